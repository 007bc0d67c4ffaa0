#include "rpg.h"

#include <algorithm>
#include <cassert>
#include <set>
#include <stdexcept>

using namespace std;

namespace nplan {

Rational supv(const vector<Rational> &values, const LnfExpr &expr, int var,
              const Rational &bound) {
    Rational rest = expr.constant;
    Rational coeff;
    bool found = false;
    for (const auto &[v, c] : expr.terms) {
        if (v == var) {
            coeff = c;
            found = true;
        } else {
            rest += c * values[v];
        }
    }
    if (!found)
        throw invalid_argument("supv: variable does not occur in expression");
    return (bound - rest) / coeff;
}

ExtRational supv_ext(const vector<Rational> &values, const LnfExpr &expr,
                     int var, const ExtRational &bound) {
    if (!bound.is_finite()) {
        assert(bound == ExtRational::infinity());
        return ExtRational::infinity();
    }
    return ExtRational(supv(values, expr, var, bound.finite_value()));
}

namespace {

// All comparison thresholds the variable occurs in (goal and action
// preconditions), and the effect right-hand sides it feeds.
struct VarOccurrences {
    vector<const LnfExpr *> constraints;
    vector<const LnfExpr *> increase_rhs;             // target relevant
    vector<pair<const LnfExpr *, int>> assign_rhs;    // (rhs, target), relevant
};

MneedVector mneed_impl(const LnfTask &task, const State &s,
                       const RelevanceSet &relevant,
                       const AssignDepGraph &deps, bool lenient) {
    if (!lenient && !deps.acyclic)
        throw invalid_argument("mneed undefined: cyclic assign dependencies");

    int n = task.vars.size();
    vector<VarOccurrences> occ(n);
    auto add_constraint = [&](const LnfConstraint &c) {
        for (const auto &[v, coeff] : c.expr.terms)
            occ[v].constraints.push_back(&c.expr);
    };
    for (const auto &c : task.goal.constraints)
        add_constraint(c);
    for (const auto &a : task.actions) {
        for (const auto &c : a.pre.constraints)
            add_constraint(c);
        for (const auto &e : a.num_effects) {
            if (!relevant.relevant[e.var])
                continue;
            for (const auto &[v, coeff] : e.rhs.terms) {
                if (e.op == AssignOp::increase)
                    occ[v].increase_rhs.push_back(&e.rhs);
                else
                    occ[v].assign_rhs.push_back({&e.rhs, e.var});
            }
        }
    }

    MneedVector mneed(n, ExtRational::neg_infinity());
    // Variables caught in (or feeding) an assign cycle never enter the
    // topological order below; give the relevant ones the infinite
    // fallback up front.
    for (int v : deps.tainted)
        if (relevant.relevant[v])
            mneed[v] = ExtRational::infinity();

    // Assign targets are finalized before the variables feeding them.
    for (int v : deps.topo_targets_first) {
        ExtRational best = ExtRational::neg_infinity();
        Rational zero;
        for (const LnfExpr *e : occ[v].constraints)
            best = ext_max(best, ExtRational(supv(s.values, *e, v, zero)));
        for (const LnfExpr *e : occ[v].increase_rhs)
            best = ext_max(best, ExtRational(supv(s.values, *e, v, zero)));
        for (const auto &[e, target] : occ[v].assign_rhs)
            best = ext_max(best, supv_ext(s.values, *e, v, mneed[target]));
        mneed[v] = best;
    }
    return mneed;
}

}  // namespace

MneedVector compute_mneed(const LnfTask &task, const State &s) {
    RelevanceSet relevant = compute_relevance(task);
    AssignDepGraph deps = check_acyclic(task);
    return mneed_impl(task, s, relevant, deps, false);
}

void GoalAgenda::merge(int var, const Rational &bound, bool strict) {
    auto it = entries.find(var);
    if (it == entries.end()) {
        entries.insert({var, {bound, strict}});
        return;
    }
    if (bound > it->second.bound) {
        it->second = {bound, strict};
    } else if (bound == it->second.bound && strict) {
        it->second.strict = true;
    }
}

RpgBuilder::RpgBuilder(const LnfTask &task, int max_layers)
    : task(task),
      max_layers(max_layers),
      relevant(compute_relevance(task)),
      deps(check_acyclic(task)) {}

MneedVector RpgBuilder::mneed(const State &s) const {
    return mneed_impl(task, s, relevant, deps, true);
}

Rpg RpgBuilder::build(const State &s) const {
    int num_props = task.props.size();
    int num_vars = task.vars.size();
    int num_actions = task.actions.size();

    Rpg rpg;
    rpg.prop_level.assign(num_props, -1);
    rpg.action_level.assign(num_actions, -1);
    rpg.goal_constraint_level.assign(task.goal.constraints.size(), -1);
    rpg.pre_constraint_level.resize(num_actions);
    for (int a = 0; a < num_actions; ++a)
        rpg.pre_constraint_level[a].assign(
            task.actions[a].pre.constraints.size(), -1);

    MneedVector need = mneed(s);

    rpg.layers.push_back({s.values});
    for (int p = 0; p < num_props; ++p)
        if (s.props.test(p))
            rpg.prop_level[p] = 0;

    auto refresh_constraints = [&](int t) {
        const vector<Rational> &vals = rpg.layers[t].max_values;
        for (size_t i = 0; i < task.goal.constraints.size(); ++i)
            if (rpg.goal_constraint_level[i] == -1 &&
                task.goal.constraints[i].satisfied(vals))
                rpg.goal_constraint_level[i] = t;
        for (int a = 0; a < num_actions; ++a)
            for (size_t i = 0; i < task.actions[a].pre.constraints.size(); ++i)
                if (rpg.pre_constraint_level[a][i] == -1 &&
                    task.actions[a].pre.constraints[i].satisfied(vals))
                    rpg.pre_constraint_level[a][i] = t;
    };
    refresh_constraints(0);

    auto goal_reached = [&]() {
        for (int p : task.goal.props)
            if (rpg.prop_level[p] == -1)
                return false;
        for (int level : rpg.goal_constraint_level)
            if (level == -1)
                return false;
        return true;
    };

    int t = 0;
    while (true) {
        if (goal_reached()) {
            rpg.verdict = Rpg::Verdict::reached;
            rpg.finallayer = t;
            return rpg;
        }
        if (t >= max_layers) {
            rpg.verdict = Rpg::Verdict::layer_cap;
            return rpg;
        }

        // A_t: everything whose precondition is contained in layer t.
        for (int a = 0; a < num_actions; ++a) {
            if (rpg.action_level[a] != -1)
                continue;
            const LnfAction &act = task.actions[a];
            bool ok = true;
            for (int p : act.pre.props)
                if (rpg.prop_level[p] == -1) {
                    ok = false;
                    break;
                }
            if (ok)
                for (int level : rpg.pre_constraint_level[a])
                    if (level == -1) {
                        ok = false;
                        break;
                    }
            if (ok)
                rpg.action_level[a] = t;
        }

        const vector<Rational> &cur = rpg.layers[t].max_values;
        vector<Rational> next = cur;
        bool new_prop = false;
        for (int a = 0; a < num_actions; ++a) {
            if (rpg.action_level[a] == -1)
                continue;
            const LnfAction &act = task.actions[a];
            for (int p : act.adds)
                if (rpg.prop_level[p] == -1) {
                    rpg.prop_level[p] = t + 1;
                    new_prop = true;
                }
            for (const auto &e : act.num_effects) {
                if (e.op != AssignOp::increase)
                    continue;
                Rational val = e.rhs.eval(cur);
                if (val.sign() > 0)
                    next[e.var] += val;
            }
        }
        for (int a = 0; a < num_actions; ++a) {
            if (rpg.action_level[a] == -1)
                continue;
            for (const auto &e : task.actions[a].num_effects) {
                if (e.op != AssignOp::assign)
                    continue;
                Rational val = e.rhs.eval(cur);
                if (val > next[e.var])
                    next[e.var] = val;
            }
        }

        if (!new_prop) {
            bool all_stuck = true;
            for (int v = 0; v < num_vars; ++v) {
                if (next[v] != cur[v] && !(ExtRational(cur[v]) > need[v])) {
                    all_stuck = false;
                    break;
                }
            }
            if (all_stuck) {
                rpg.verdict = Rpg::Verdict::failed;
                return rpg;
            }
        }

        rpg.layers.push_back({std::move(next)});
        ++t;
        refresh_constraints(t);
    }
}

namespace {

struct Extractor {
    const LnfTask &task;
    const Rpg &rpg;
    vector<set<int>> prop_agenda;
    vector<GoalAgenda> num_agenda;
    vector<set<int>> selected;

    Extractor(const LnfTask &task, const Rpg &rpg) : task(task), rpg(rpg) {
        int layers = rpg.finallayer + 1;
        prop_agenda.resize(layers);
        num_agenda.resize(layers);
        selected.resize(layers);
    }

    const vector<Rational> &max_at(int t) const {
        return rpg.layers[t].max_values;
    }

    // A single-variable comparison pins down the exact threshold the
    // variable must pass; with several variables each is asked for the
    // layer's maximum instead.
    void push_constraint(const LnfConstraint &c, int level) {
        if (level <= 0)
            return;
        if (c.expr.terms.size() == 1) {
            int v = c.expr.terms[0].first;
            Rational zero;
            Rational bound = supv(max_at(level), c.expr, v, zero);
            num_agenda[level].merge(v, bound, c.comp == Comparator::gt);
        } else {
            for (const auto &[v, coeff] : c.expr.terms)
                num_agenda[level].merge(v, max_at(level)[v], false);
        }
    }

    void push_prop(int p) {
        int level = rpg.prop_level[p];
        assert(level >= 0);
        if (level > 0)
            prop_agenda[level].insert(p);
    }

    void push_preconditions(int a, int t) {
        const LnfAction &act = task.actions[a];
        for (int p : act.pre.props) {
            assert(rpg.prop_level[p] >= 0 && rpg.prop_level[p] < t);
            push_prop(p);
        }
        for (size_t i = 0; i < act.pre.constraints.size(); ++i) {
            int level = rpg.pre_constraint_level[a][i];
            assert(level >= 0 && level < t);
            push_constraint(act.pre.constraints[i], level);
        }
    }

    // The right-hand side delivered its layer-(t-1) value; require it.
    void push_rhs_bounds(const LnfExpr &rhs, int t) {
        for (const auto &[v, coeff] : rhs.terms)
            num_agenda[t - 1].merge(v, max_at(t - 1)[v], false);
    }

    void select(int a, int t) {
        if (selected[t].insert(a).second)
            push_preconditions(a, t);
    }

    void process_prop_goal(int p, int t) {
        int best = -1;
        for (int a = 0; a < (int)task.actions.size(); ++a) {
            int level = rpg.action_level[a];
            if (level == -1 || level > t - 1)
                continue;
            const auto &adds = task.actions[a].adds;
            if (!binary_search(adds.begin(), adds.end(), p))
                continue;
            if (selected[t].count(a)) {
                best = a;
                break;
            }
            if (best == -1)
                best = a;
        }
        if (best == -1)
            throw logic_error("relaxed plan extraction: no achiever for " +
                              task.props[p].name);
        select(best, t);
    }

    void process_num_goal(int v, const GoalBound &g, int t) {
        const vector<Rational> &prev = max_at(t - 1);
        auto met = [&](const Rational &value, const Rational &bound) {
            return g.strict ? value > bound : value >= bound;
        };
        if (met(prev[v], g.bound)) {
            num_agenda[t - 1].merge(v, g.bound, g.strict);
            return;
        }
        // Prefer one assignment that reaches the bound outright.
        int best_assign = -1;
        for (int a = 0; a < (int)task.actions.size(); ++a) {
            int level = rpg.action_level[a];
            if (level == -1 || level > t - 1)
                continue;
            for (const auto &e : task.actions[a].num_effects) {
                if (e.var != v || e.op != AssignOp::assign)
                    continue;
                if (met(e.rhs.eval(prev), g.bound)) {
                    best_assign = a;
                    break;
                }
            }
            if (best_assign != -1)
                break;
        }
        if (best_assign != -1) {
            const LnfAction &act = task.actions[best_assign];
            select(best_assign, t);
            for (const auto &e : act.num_effects)
                if (e.var == v && e.op == AssignOp::assign &&
                    met(e.rhs.eval(prev), g.bound)) {
                    push_rhs_bounds(e.rhs, t);
                    break;
                }
            return;
        }
        // Otherwise accumulate increases, best contribution first, until
        // the remaining need is available one layer down.
        struct Candidate {
            Rational gain;
            int action;
            const LnfExpr *rhs;
        };
        vector<Candidate> candidates;
        for (int a = 0; a < (int)task.actions.size(); ++a) {
            int level = rpg.action_level[a];
            if (level == -1 || level > t - 1)
                continue;
            for (const auto &e : task.actions[a].num_effects) {
                if (e.var != v || e.op != AssignOp::increase)
                    continue;
                Rational gain = e.rhs.eval(prev);
                if (gain.sign() > 0)
                    candidates.push_back({gain, a, &e.rhs});
            }
        }
        sort(candidates.begin(), candidates.end(),
             [](const Candidate &x, const Candidate &y) {
                 if (x.gain != y.gain)
                     return x.gain > y.gain;
                 return x.action < y.action;
             });
        Rational remaining = g.bound;
        size_t i = 0;
        while (!met(prev[v], remaining)) {
            if (i >= candidates.size())
                throw logic_error(
                    "relaxed plan extraction: increase support exhausted for " +
                    task.vars[v].name);
            const Candidate &c = candidates[i++];
            remaining -= c.gain;
            select(c.action, t);
            push_rhs_bounds(*c.rhs, t);
        }
        num_agenda[t - 1].merge(v, remaining, g.strict);
    }

    ExtractResult run(const State &s) {
        for (int p : task.goal.props)
            push_prop(p);
        for (size_t i = 0; i < task.goal.constraints.size(); ++i)
            push_constraint(task.goal.constraints[i],
                            rpg.goal_constraint_level[i]);

        for (int t = rpg.finallayer; t >= 1; --t) {
            for (int p : prop_agenda[t])
                process_prop_goal(p, t);
            // The agenda can grow for lower layers only; a snapshot of
            // this layer's bounds is stable.
            for (const auto &[v, g] : num_agenda[t].bounds())
                process_num_goal(v, g, t);
        }

        // Whatever reaches layer 0 must already hold in the state.
        for (int p : prop_agenda[0])
            assert(s.props.test(p));
        for (const auto &[v, g] : num_agenda[0].bounds())
            assert(g.strict ? s.values[v] > g.bound : s.values[v] >= g.bound);

        ExtractResult result;
        result.valid = true;
        result.selected.resize(rpg.finallayer + 1);
        for (int t = 1; t <= rpg.finallayer; ++t) {
            result.selected[t].assign(selected[t].begin(), selected[t].end());
            result.plan_length += selected[t].size();
            for (int a : selected[t])
                result.plan_cost += task.actions[a].cost;
        }
        result.helpful = collect_helpful(s);
        return result;
    }

    // Applicable actions that add a layer-1 subgoal, assign a variable a
    // sufficient value right away, or increase a variable some layer-1
    // bound still asks more of.
    vector<int> collect_helpful(const State &s) {
        vector<int> helpful;
        if (rpg.finallayer < 1)
            return helpful;
        const set<int> &goals = prop_agenda[1];
        const auto &bounds = num_agenda[1].bounds();
        for (int a = 0; a < (int)task.actions.size(); ++a) {
            if (rpg.action_level[a] != 0)
                continue;
            const LnfAction &act = task.actions[a];
            bool useful = false;
            for (int p : act.adds)
                if (goals.count(p)) {
                    useful = true;
                    break;
                }
            if (!useful) {
                for (const auto &e : act.num_effects) {
                    auto it = bounds.find(e.var);
                    if (it == bounds.end())
                        continue;
                    if (e.op == AssignOp::increase) {
                        if (e.rhs.eval(s.values).sign() > 0) {
                            useful = true;
                            break;
                        }
                    } else {
                        Rational val = e.rhs.eval(s.values);
                        const GoalBound &g = it->second;
                        if (g.strict ? val > g.bound : val >= g.bound) {
                            useful = true;
                            break;
                        }
                    }
                }
            }
            if (useful)
                helpful.push_back(a);
        }
        return helpful;
    }
};

}  // namespace

ExtractResult RpgBuilder::extract(const Rpg &rpg, const State &s) const {
    ExtractResult result;
    if (rpg.verdict != Rpg::Verdict::reached)
        return result;
    if (rpg.finallayer == 0) {
        result.valid = true;
        result.selected.resize(1);
        return result;
    }
    Extractor ex(task, rpg);
    return ex.run(s);
}

Rpg build_graph(const LnfTask &task, const State &s, int max_layers) {
    RpgBuilder builder(task, max_layers);
    return builder.build(s);
}

ExtractResult extract_plan(const LnfTask &task, const Rpg &rpg,
                           const State &s) {
    RpgBuilder builder(task);
    return builder.extract(rpg, s);
}

}  // namespace nplan
