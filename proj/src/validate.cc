#include "validate.h"

#include "relaxation.h"

#include <optional>

using namespace std;

namespace nplan {

namespace {

string step_name(const string &action, int step) {
    return "step " + to_string(step) + " (" + action + ")";
}

}  // namespace

Verdict validate_plan(const NumericTask &task, const Plan &plan) {
    Verdict verdict;
    State s = task.init;
    for (size_t i = 0; i < plan.size(); ++i) {
        int id = plan[i];
        if (id < 0 || id >= (int)task.actions.size()) {
            verdict.failed_step = i;
            verdict.reason = "step " + to_string(i) + ": no action with id " +
                             to_string(id);
            verdict.final_state = s;
            return verdict;
        }
        const Action &a = task.actions[id];
        ApplyResult r = apply_action(task, s, a);
        if (r.status != ApplyStatus::applied) {
            verdict.failed_step = i;
            verdict.reason =
                step_name(a.name, i) +
                (r.status == ApplyStatus::not_applicable
                     ? ": precondition not satisfied"
                     : ": effect value undefined (division by zero)");
            verdict.final_state = s;
            return verdict;
        }
        s = r.state;
    }
    if (!is_goal(task, s)) {
        verdict.failed_step = plan.size();
        verdict.reason = "goal not satisfied in the final state";
        verdict.final_state = s;
        return verdict;
    }
    verdict.valid = true;
    verdict.final_state = s;
    if (task.metric) {
        optional<Rational> value = eval_expr(task.metric->expr, s);
        if (!value) {
            verdict.valid = false;
            verdict.failed_step = plan.size();
            verdict.reason = "metric undefined in the final state";
            return verdict;
        }
        verdict.metric = *value;
    }
    return verdict;
}

Verdict validate_plan_lnf(const LnfTask &task, const Plan &plan) {
    Verdict verdict;
    State s = task.init;
    for (size_t i = 0; i < plan.size(); ++i) {
        int id = plan[i];
        if (id < 0 || id >= (int)task.actions.size()) {
            verdict.failed_step = i;
            verdict.reason = "step " + to_string(i) + ": no action with id " +
                             to_string(id);
            verdict.final_state = s;
            return verdict;
        }
        const LnfAction &a = task.actions[id];
        optional<State> next = apply_lnf_action(a, s);
        if (!next) {
            verdict.failed_step = i;
            verdict.reason = step_name(a.name, i) + ": precondition not satisfied";
            verdict.final_state = s;
            return verdict;
        }
        s = *next;
    }
    if (!is_goal_lnf(task, s)) {
        verdict.failed_step = plan.size();
        verdict.reason = "goal not satisfied in the final state";
        verdict.final_state = s;
        return verdict;
    }
    verdict.valid = true;
    verdict.final_state = s;
    if (task.metric) {
        // The metric mentions original variables only; the state vector
        // covers those plus any introduced counterparts.
        optional<Rational> value = eval_expr(task.metric->expr, s);
        if (!value) {
            verdict.valid = false;
            verdict.failed_step = plan.size();
            verdict.reason = "metric undefined in the final state";
            return verdict;
        }
        verdict.metric = *value;
    }
    return verdict;
}

Verdict validate_relaxed_plan(const LnfTask &task, const Plan &plan) {
    Verdict verdict;
    State s = task.init;
    for (size_t i = 0; i < plan.size(); ++i) {
        int id = plan[i];
        if (id < 0 || id >= (int)task.actions.size()) {
            verdict.failed_step = i;
            verdict.reason = "step " + to_string(i) + ": no action with id " +
                             to_string(id);
            verdict.final_state = s;
            return verdict;
        }
        const LnfAction &a = task.actions[id];
        optional<State> next = relaxed_apply_lnf(a, s);
        if (!next) {
            verdict.failed_step = i;
            verdict.reason = step_name(a.name, i) + ": precondition not satisfied";
            verdict.final_state = s;
            return verdict;
        }
        s = *next;
    }
    if (!is_goal_lnf(task, s)) {
        verdict.failed_step = plan.size();
        verdict.reason = "goal not satisfied in the final state";
        verdict.final_state = s;
        return verdict;
    }
    verdict.valid = true;
    verdict.final_state = s;
    return verdict;
}

}  // namespace nplan
