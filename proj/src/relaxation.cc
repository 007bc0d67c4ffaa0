#include "relaxation.h"

#include <algorithm>
#include <cassert>

using namespace std;

namespace nplan {

bool ExtRational::operator<(const ExtRational &o) const {
    if (kind == Kind::finite && o.kind == Kind::finite)
        return value < o.value;
    auto rank = [](Kind k) {
        return k == Kind::neg_inf ? -1 : k == Kind::pos_inf ? 1 : 0;
    };
    return rank(kind) < rank(o.kind);
}

ExtRational ExtRational::operator+(const ExtRational &o) const {
    if (kind == Kind::finite && o.kind == Kind::finite)
        return ExtRational(value + o.value);
    if (kind == Kind::finite)
        return o;
    assert(o.kind == Kind::finite || o.kind == kind);
    return *this;
}

string ExtRational::to_string() const {
    switch (kind) {
    case Kind::pos_inf: return "inf";
    case Kind::neg_inf: return "-inf";
    default: return value.to_string();
    }
}

ExtRational ext_eval(const LnfExpr &expr, const vector<ExtRational> &values) {
    Rational finite_sum = expr.constant;
    bool pos_inf = false, neg_inf = false;
    for (const auto &[var, coeff] : expr.terms) {
        const ExtRational &v = values[var];
        if (v.is_finite()) {
            finite_sum += coeff * v.finite_value();
        } else if (v.is_pos_inf()) {
            (coeff.sign() > 0 ? pos_inf : neg_inf) = true;
        } else {
            (coeff.sign() > 0 ? neg_inf : pos_inf) = true;
        }
    }
    assert(!(pos_inf && neg_inf));
    if (pos_inf)
        return ExtRational::infinity();
    if (neg_inf)
        return ExtRational::neg_infinity();
    return ExtRational(finite_sum);
}

bool ext_satisfied(const LnfConstraint &c, const vector<ExtRational> &values) {
    ExtRational v = ext_eval(c.expr, values);
    ExtRational zero{Rational(0)};
    return c.comp == Comparator::gt ? v > zero : v >= zero;
}

// ---- relaxed execution ----

optional<State> relaxed_apply(const NumericTask &task, const State &s,
                              const Action &a) {
    (void)task;
    if (!holds(a.pre, s))
        return nullopt;
    State result = s;
    for (int p : a.eff.adds)
        result.props.set(p);
    for (const NumEffect &ne : a.eff.num_effects) {
        optional<Rational> rhs = eval_expr(ne.rhs, s);
        if (!rhs)
            continue;  // undefined outcome never beats the current value
        Rational outcome = ne.op == AssignOp::assign ? *rhs
                           : ne.op == AssignOp::increase
                               ? s.values[ne.var] + *rhs
                               : s.values[ne.var] - *rhs;
        if (outcome > s.values[ne.var])
            result.values[ne.var] = std::move(outcome);
    }
    return result;
}

optional<State> relaxed_apply_lnf(const LnfAction &a, const State &s) {
    if (!holds_lnf(a.pre, s))
        return nullopt;
    State result = s;
    for (int p : a.adds)
        result.props.set(p);
    for (const LnfEffect &e : a.num_effects) {
        Rational rhs = e.rhs.eval(s.values);
        Rational outcome =
            e.op == AssignOp::assign ? std::move(rhs)
                                     : s.values[e.var] + std::move(rhs);
        if (outcome > s.values[e.var])
            result.values[e.var] = std::move(outcome);
    }
    return result;
}

// ---- restricted decider ----

namespace {

struct RestrictedConstraint {
    int var;
    Comparator comp;  // ge or gt
    Rational bound;
};

RestrictedConstraint to_restricted(const Constraint &c, const string &where) {
    const Expr::Node &lhs = c.lhs.node(c.lhs.root_index());
    const Expr::Node &rhs = c.rhs.node(c.rhs.root_index());
    if (lhs.kind != Expr::Kind::variable || rhs.kind != Expr::Kind::constant)
        throw MalformedInput(where + ": comparison must be (v >= c) or "
                                     "(v > c)");
    if (c.comp != Comparator::ge && c.comp != Comparator::gt)
        throw MalformedInput(where + ": comparator must be >= or >");
    return {lhs.var, c.comp, rhs.value};
}

bool restricted_satisfied(const RestrictedConstraint &c,
                          const vector<ExtRational> &values) {
    ExtRational bound{c.bound};
    return c.comp == Comparator::gt ? values[c.var] > bound
                                    : values[c.var] >= bound;
}

}  // namespace

RelaxedFixpoint decide_restricted(const NumericTask &task, const State &s) {
    struct PendingCondition {
        vector<int> props;
        vector<RestrictedConstraint> constraints;
    };

    vector<PendingCondition> pre(task.actions.size());
    vector<bool> increases(task.vars.size() * task.actions.size(), false);
    for (size_t i = 0; i < task.actions.size(); ++i) {
        const Action &a = task.actions[i];
        string where = "action " + a.name;
        pre[i].props = a.pre.props;
        for (const Constraint &c : a.pre.constraints)
            pre[i].constraints.push_back(to_restricted(c, where));
        for (const NumEffect &ne : a.eff.num_effects) {
            const Expr::Node &rhs = ne.rhs.node(ne.rhs.root_index());
            if (ne.op == AssignOp::assign)
                throw MalformedInput(where + ": assign effects are outside "
                                             "the restricted language");
            if (rhs.kind != Expr::Kind::constant || rhs.value.sign() <= 0)
                throw MalformedInput(where + ": effects must add or subtract "
                                             "a positive constant");
            if (ne.op == AssignOp::increase)
                increases[i * task.vars.size() + ne.var] = true;
        }
    }
    PendingCondition goal;
    goal.props = task.goal.props;
    for (const Constraint &c : task.goal.constraints)
        goal.constraints.push_back(to_restricted(c, "goal"));

    RelaxedFixpoint result;
    result.reached_props = s.props;
    result.reached_values.assign(s.values.begin(), s.values.end());
    PropSet &reached = result.reached_props;
    vector<ExtRational> &values = result.reached_values;

    auto strip_satisfied = [&](PendingCondition &cond) {
        erase_if(cond.props, [&](int p) { return reached.test(p); });
        erase_if(cond.constraints, [&](const RestrictedConstraint &c) {
            return restricted_satisfied(c, values);
        });
    };
    strip_satisfied(goal);
    for (PendingCondition &p : pre)
        strip_satisfied(p);

    while (!goal.props.empty() || !goal.constraints.empty()) {
        bool changed = false;
        for (size_t i = 0; i < task.actions.size(); ++i) {
            if (!pre[i].props.empty() || !pre[i].constraints.empty())
                continue;
            for (int p : task.actions[i].eff.adds)
                if (!reached.test(p)) {
                    reached.set(p);
                    changed = true;
                }
            for (size_t v = 0; v < task.vars.size(); ++v)
                if (increases[i * task.vars.size() + v] &&
                    values[v].is_finite()) {
                    values[v] = ExtRational::infinity();
                    changed = true;
                }
        }
        if (!changed) {
            result.solvable = false;
            return result;
        }
        ++result.iterations;
        strip_satisfied(goal);
        for (PendingCondition &p : pre)
            strip_satisfied(p);
    }
    result.solvable = true;
    return result;
}

// ---- strong decider ----

RelaxedFixpoint decide_strong(const LnfTask &task, const State &s) {
    LnfReport shape = verify_lnf(task);
    if (!shape.ok)
        throw invalid_argument("decide_strong requires a verified normal-form "
                               "task: " + shape.violations.front());
    AssignDepGraph deps = check_acyclic(task);
    if (!deps.acyclic)
        throw invalid_argument(
            "decide_strong requires acyclic assign dependencies");

    struct PendingCondition {
        vector<int> props;
        vector<const LnfConstraint *> constraints;
    };

    RelaxedFixpoint result;
    result.reached_props = s.props;
    result.reached_values.assign(s.values.begin(), s.values.end());
    PropSet &reached = result.reached_props;
    vector<ExtRational> &values = result.reached_values;

    auto strip_satisfied = [&](PendingCondition &cond) {
        erase_if(cond.props, [&](int p) { return reached.test(p); });
        erase_if(cond.constraints, [&](const LnfConstraint *c) {
            return ext_satisfied(*c, values);
        });
    };

    vector<PendingCondition> pre(task.actions.size());
    for (size_t i = 0; i < task.actions.size(); ++i) {
        pre[i].props = task.actions[i].pre.props;
        for (const LnfConstraint &c : task.actions[i].pre.constraints)
            pre[i].constraints.push_back(&c);
        strip_satisfied(pre[i]);
    }
    PendingCondition goal;
    goal.props = task.goal.props;
    for (const LnfConstraint &c : task.goal.constraints)
        goal.constraints.push_back(&c);
    strip_satisfied(goal);

    int defensive_bound =
        static_cast<int>(task.props.size() + task.vars.size() +
                         task.vars.size() * task.actions.size()) + 2;
    while (!goal.props.empty() || !goal.constraints.empty()) {
        vector<char> applicable(task.actions.size(), 0);
        for (size_t i = 0; i < task.actions.size(); ++i)
            applicable[i] = pre[i].props.empty() && pre[i].constraints.empty();

        PropSet new_props = reached;
        vector<ExtRational> new_values = values;
        for (size_t i = 0; i < task.actions.size(); ++i) {
            if (!applicable[i])
                continue;
            for (int p : task.actions[i].adds)
                new_props.set(p);
        }
        // Increases that make progress escalate a variable to +infinity;
        // assigns raise it to the best assigned outcome (both judged
        // against the values entering this round).
        for (size_t v = 0; v < task.vars.size(); ++v) {
            if (!values[v].is_finite())
                continue;
            bool increased = false;
            for (size_t i = 0; i < task.actions.size() && !increased; ++i) {
                if (!applicable[i])
                    continue;
                for (const LnfEffect &e : task.actions[i].num_effects)
                    if (e.var == static_cast<int>(v) &&
                        e.op == AssignOp::increase &&
                        values[v] + ext_eval(e.rhs, values) > values[v]) {
                        increased = true;
                        break;
                    }
            }
            if (increased)
                new_values[v] = ExtRational::infinity();
            ExtRational best_assign = ExtRational::neg_infinity();
            bool has_assign = false;
            for (size_t i = 0; i < task.actions.size(); ++i) {
                if (!applicable[i])
                    continue;
                for (const LnfEffect &e : task.actions[i].num_effects) {
                    if (e.var != static_cast<int>(v) ||
                        e.op != AssignOp::assign)
                        continue;
                    ExtRational outcome = ext_eval(e.rhs, values);
                    if (outcome > values[v]) {
                        has_assign = true;
                        best_assign = ext_max(best_assign, outcome);
                    }
                }
            }
            if (has_assign)
                new_values[v] = best_assign;
        }

        if (new_props == reached && new_values == values) {
            result.solvable = false;
            return result;
        }
        reached = std::move(new_props);
        values = std::move(new_values);
        ++result.iterations;
        assert(result.iterations <= defensive_bound);
        strip_satisfied(goal);
        for (PendingCondition &p : pre)
            strip_satisfied(p);
    }
    result.solvable = true;
    return result;
}

MonotonicityReport check_monotonic_structure(const LnfTask &task) {
    MonotonicityReport report;
    auto check = [](const LnfExpr &e) {
        for (const auto &[var, coeff] : e.terms) {
            (void)var;
            if (coeff.sign() < 0)
                return false;
        }
        return true;
    };
    for (const LnfAction &a : task.actions) {
        for (const LnfConstraint &c : a.pre.constraints)
            if (!check(c.expr)) {
                report.constraints_monotone = false;
                report.violations.push_back(
                    "precondition of " + a.name +
                    " decreases in some variable");
            }
        for (const LnfEffect &e : a.num_effects) {
            if (check(e.rhs))
                continue;
            if (e.op == AssignOp::increase) {
                report.increase_rhs_monotone = false;
                report.violations.push_back(
                    "increase on " + task.vars[e.var].name + " in " + a.name +
                    " decreases in some variable");
            } else {
                report.assign_rhs_monotone = false;
                report.violations.push_back(
                    "assign to " + task.vars[e.var].name + " in " + a.name +
                    " decreases in some variable");
            }
        }
    }
    for (const LnfConstraint &c : task.goal.constraints)
        if (!check(c.expr)) {
            report.constraints_monotone = false;
            report.violations.push_back("goal decreases in some variable");
        }
    report.strongly_monotonic = report.constraints_monotone &&
                                report.increase_rhs_monotone &&
                                report.assign_rhs_monotone;
    return report;
}

}  // namespace nplan
