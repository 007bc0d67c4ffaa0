#ifndef NPLAN_GENERATOR_H
#define NPLAN_GENERATOR_H

#include <string>
#include <vector>

namespace nplan {

struct GeneratedInstance {
    std::string domain;             // PDDL domain text
    std::string problem;            // PDDL problem text
    std::vector<std::string> witness;  // ground action names, in order
};

// Families: "zeno" (planes ferry persons between cities, fuel consumed per
// flight, capacity-limited boarding, refuel by assignment, fuel-usage
// metric) and "depot" (trucks haul crates, weight-limited loading, shared
// recharging energy, drive-count metric). Deterministic in (family, size,
// seed). The returned witness plan is validated against the generated
// instance before returning; size must be >= 1.
GeneratedInstance gen_instance(const std::string &family, int size,
                               unsigned seed);

}  // namespace nplan

#endif
