#ifndef NPLAN_VALIDATE_H
#define NPLAN_VALIDATE_H

#include "lnf.h"
#include "model.h"

#include <optional>
#include <string>
#include <vector>

namespace nplan {

struct Verdict {
    bool valid = false;
    int failed_step = -1;     // -1 when valid
    std::string reason;       // empty when valid
    State final_state;
    std::optional<Rational> metric;  // set iff valid and the task has one
};

// Replays the plan from the initial state under full semantics.
Verdict validate_plan(const NumericTask &task, const Plan &plan);

// Same over a normalized task.
Verdict validate_plan_lnf(const LnfTask &task, const Plan &plan);

// Replays under the relaxation (no deletes, effects only applied when they
// raise the value); used to sanity-check extracted relaxed plans.
Verdict validate_relaxed_plan(const LnfTask &task, const Plan &plan);

}  // namespace nplan

#endif
