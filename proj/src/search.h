#ifndef NPLAN_SEARCH_H
#define NPLAN_SEARCH_H

#include "lnf.h"
#include "model.h"
#include "relaxation.h"
#include "rpg.h"

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace nplan {

// Duplicate detection with dominance: a state is pruned when a stored
// state has the same propositions, at-least-as-great values on every
// solution-relevant variable, and an at-most-as-great path cost. States
// stored per proposition-set bucket form an antichain. Normal form makes
// larger values at least as useful, so the pruning preserves reachability.
class VisitedTable {
public:
    explicit VisitedTable(std::vector<int> relevant_ids);

    bool is_dominated(const State &s, const Rational &g) const;
    void insert(const State &s, const Rational &g);
    size_t size() const { return count; }

private:
    struct Entry {
        PropSet props;  // bucket keys are hashes; compare exactly
        std::vector<Rational> values;  // relevant variables only
        Rational g;
    };

    std::vector<int> rv;
    std::unordered_map<uint64_t, std::vector<Entry>> buckets;
    size_t count = 0;

    std::vector<Rational> project(const State &s) const;
};

struct SearchStats {
    std::string stage;           // stage that produced the outcome
    long expansions = 0;
    long evaluations = 0;
    ExtRational h_init = ExtRational::infinity();
    bool layer_cap_hit = false;  // some evaluation hit the layer cap
    bool expansion_cap_hit = false;
    bool guarantees_void = false;  // cyclic assign dependencies
    std::string quality_fallback;  // why cost derivation was rejected
};

struct SearchResult {
    bool solved = false;
    // Search space exhausted without caps: no plan exists. Meaningful only
    // when guarantees_void is false.
    bool proved_unsolvable = false;
    Plan plan;  // indices into the normalized task's action vector
    SearchStats stats;
};

enum class SearchMode { speed, quality };

struct SearchOptions {
    SearchMode mode = SearchMode::speed;
    bool use_helpful = true;
    long max_expansions = 1000000;
    int max_layers = 10000;
    Rational weight_g{1};
    Rational weight_h{5};
    // Blends plan length into the cost heuristic: h = h_cost + mix * h_length.
    Rational h_mix{0};
};

struct CostDerivation {
    bool ok = false;
    std::string reason;            // set when rejected
    std::vector<Rational> costs;   // per action, when ok
};

// Per-action costs from the metric: the metric must be linear; every effect
// on a variable with a nonzero metric coefficient must be an increase by a
// rational constant with a nonnegative metric contribution. A maximize
// metric is negated first, which such effects then violate unless the
// metric cannot change at all. cost(a) = sum of coeff * increase.
CostDerivation derive_costs(const LnfTask &task);

// Speed: enforced hill-climbing on helpful actions, retried without the
// helpful-action filter from the failure point, then greedy best-first
// from scratch. Quality: weighted A* on derived costs, falling back to the
// speed pipeline when cost derivation rejects the metric.
SearchResult solve(const LnfTask &task, const SearchOptions &opts);

}  // namespace nplan

#endif
