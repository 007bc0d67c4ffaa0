#include "oracles.h"

#include "relaxation.h"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <string>

using namespace std;

namespace nplan {
namespace oracle {

optional<Rational> eval_reference(const Expr &e,
                                  const vector<Rational> &values) {
    auto rec = [&](auto &&self, int idx) -> optional<Rational> {
        const Expr::Node &n = e.node(idx);
        switch (n.kind) {
        case Expr::Kind::constant:
            return n.value;
        case Expr::Kind::variable:
            return values[n.var];
        default: {
            optional<Rational> l = self(self, n.left);
            optional<Rational> r = self(self, n.right);
            if (!l || !r)
                return nullopt;
            switch (n.kind) {
            case Expr::Kind::add:
                return *l + *r;
            case Expr::Kind::sub:
                return *l - *r;
            case Expr::Kind::mul:
                return *l * *r;
            default:
                if (r->is_zero())
                    return nullopt;
                return *l / *r;
            }
        }
        }
    };
    return rec(rec, e.root_index());
}

namespace {

int ri(mt19937 &rng, int lo, int hi) {
    return lo + static_cast<int>(rng() % (hi - lo + 1));
}

vector<int> random_prop_subset(mt19937 &rng, int np, int max_size) {
    set<int> out;
    int n = ri(rng, 0, max_size);
    for (int i = 0; i < n; ++i)
        out.insert(ri(rng, 0, np - 1));
    return {out.begin(), out.end()};
}

}  // namespace

LnfTask random_lnf_task(mt19937 &rng, const RandomLnfParams &params) {
    LnfTask t;
    int np = ri(rng, 1, params.max_props);
    int nv = ri(rng, 1, params.max_vars);
    int na = ri(rng, 1, params.max_actions);
    for (int i = 0; i < np; ++i)
        t.props.push_back({i, "p" + to_string(i)});
    for (int i = 0; i < nv; ++i)
        t.vars.push_back({i, "v" + to_string(i), -1});
    t.num_original_vars = nv;
    t.counterpart.assign(nv, -1);
    t.init.props = PropSet(np);
    for (int i = 0; i < np; ++i)
        if (rng() % 2)
            t.init.props.set(i);
    for (int i = 0; i < nv; ++i)
        t.init.values.push_back(Rational(ri(rng, -3, 3)));

    auto rand_constraint = [&]() {
        LnfConstraint c;
        c.expr.add_term(ri(rng, 0, nv - 1), Rational(ri(rng, 1, 3)));
        if (nv > 1 && rng() % 2 == 0) {
            int v = ri(rng, 0, nv - 1);
            if (v != c.expr.terms[0].first)
                c.expr.add_term(v, Rational(ri(rng, 1, 3)));
        }
        c.expr.constant = Rational(ri(rng, -5, 5));
        c.comp = rng() % 2 ? Comparator::ge : Comparator::gt;
        return c;
    };
    auto rand_rhs = [&](int target, bool is_assign) {
        LnfExpr e;
        e.constant = Rational(ri(rng, -2, 3));
        if (rng() % 2) {
            // Assign right-hand sides only mention smaller-id variables,
            // which keeps the dependency graph acyclic.
            int hi = (is_assign && !params.allow_assign_cycles) ? target - 1
                                                                : nv - 1;
            if (hi >= 0)
                e.add_term(ri(rng, 0, hi), Rational(ri(rng, 1, 2)));
        }
        return e;
    };

    for (int i = 0; i < na; ++i) {
        LnfAction a;
        a.id = i;
        a.name = "a" + to_string(i);
        a.pre.props = random_prop_subset(rng, np, 2);
        if (rng() % 2)
            a.pre.constraints.push_back(rand_constraint());
        a.adds = random_prop_subset(rng, np, 2);
        a.dels = random_prop_subset(rng, np, 2);
        set<int> targets;
        int ne = ri(rng, 0, 2);
        for (int k = 0; k < ne; ++k)
            targets.insert(ri(rng, 0, nv - 1));
        for (int v : targets) {
            bool is_assign = rng() % 3 == 0;
            a.num_effects.push_back(
                {v, is_assign ? AssignOp::assign : AssignOp::increase,
                 rand_rhs(v, is_assign)});
        }
        t.actions.push_back(std::move(a));
    }

    t.goal.props = random_prop_subset(rng, np, 2);
    if (rng() % 2 || (t.goal.props.empty() && rng() % 2))
        t.goal.constraints.push_back(rand_constraint());
    if (t.goal.props.empty() && t.goal.constraints.empty())
        t.goal.props.push_back(ri(rng, 0, np - 1));
    return t;
}

namespace {

Expr rand_linear_expr(mt19937 &rng, int nv, int depth) {
    if (depth == 0 || rng() % 3 == 0) {
        if (rng() % 2)
            return Expr::variable(ri(rng, 0, nv - 1));
        return Expr::constant(Rational(ri(rng, -4, 4)));
    }
    switch (ri(rng, 0, 3)) {
    case 0:
        return Expr::binary(Expr::Kind::add, rand_linear_expr(rng, nv, depth - 1),
                            rand_linear_expr(rng, nv, depth - 1));
    case 1:
        return Expr::binary(Expr::Kind::sub, rand_linear_expr(rng, nv, depth - 1),
                            rand_linear_expr(rng, nv, depth - 1));
    case 2: {
        Expr c = Expr::constant(Rational(ri(rng, -3, 3)));
        Expr e = rand_linear_expr(rng, nv, depth - 1);
        return rng() % 2 ? Expr::binary(Expr::Kind::mul, c, e)
                         : Expr::binary(Expr::Kind::mul, e, c);
    }
    default: {
        int d = ri(rng, 1, 3) * (rng() % 2 ? 1 : -1);
        return Expr::binary(Expr::Kind::div, rand_linear_expr(rng, nv, depth - 1),
                            Expr::constant(Rational(d)));
    }
    }
}

Comparator rand_comp(mt19937 &rng) {
    switch (ri(rng, 0, 4)) {
    case 0:
        return Comparator::lt;
    case 1:
        return Comparator::le;
    case 2:
        return Comparator::eq;
    case 3:
        return Comparator::ge;
    default:
        return Comparator::gt;
    }
}

}  // namespace

NumericTask random_numeric_task(mt19937 &rng) {
    NumericTask t;
    int np = ri(rng, 1, 4);
    int nv = ri(rng, 1, 3);
    int na = ri(rng, 1, 6);
    for (int i = 0; i < np; ++i)
        t.props.push_back({i, "p" + to_string(i)});
    for (int i = 0; i < nv; ++i)
        t.vars.push_back({i, "v" + to_string(i), -1});
    t.init.props = PropSet(np);
    for (int i = 0; i < np; ++i)
        if (rng() % 2)
            t.init.props.set(i);
    for (int i = 0; i < nv; ++i)
        t.init.values.push_back(Rational(ri(rng, -3, 3)));

    auto rand_constraint = [&]() {
        return Constraint{rand_linear_expr(rng, nv, 2), rand_comp(rng),
                          rand_linear_expr(rng, nv, 1)};
    };

    for (int i = 0; i < na; ++i) {
        Action a;
        a.id = i;
        a.name = "a" + to_string(i);
        a.pre.props = random_prop_subset(rng, np, 2);
        if (rng() % 2)
            a.pre.constraints.push_back(rand_constraint());
        a.eff.adds = random_prop_subset(rng, np, 2);
        a.eff.dels = random_prop_subset(rng, np, 2);
        set<int> targets;
        int ne = ri(rng, 0, 2);
        for (int k = 0; k < ne; ++k)
            targets.insert(ri(rng, 0, nv - 1));
        for (int v : targets) {
            AssignOp op = rng() % 3 == 0
                              ? AssignOp::assign
                              : (rng() % 2 ? AssignOp::increase
                                           : AssignOp::decrease);
            a.eff.num_effects.push_back({v, op, rand_linear_expr(rng, nv, 2)});
        }
        t.actions.push_back(std::move(a));
    }

    t.goal.props = random_prop_subset(rng, np, 2);
    if (rng() % 2)
        t.goal.constraints.push_back(rand_constraint());
    if (t.goal.props.empty() && t.goal.constraints.empty())
        t.goal.props.push_back(ri(rng, 0, np - 1));
    if (rng() % 3 == 0)
        t.metric = Metric{rng() % 4 ? MetricDirection::minimize
                                    : MetricDirection::maximize,
                          rand_linear_expr(rng, nv, 1)};
    return t;
}

NumericTask random_restricted_task(mt19937 &rng) {
    NumericTask t;
    int np = ri(rng, 1, 4);
    int nv = ri(rng, 1, 3);
    int na = ri(rng, 1, 6);
    for (int i = 0; i < np; ++i)
        t.props.push_back({i, "p" + to_string(i)});
    for (int i = 0; i < nv; ++i)
        t.vars.push_back({i, "v" + to_string(i), -1});
    t.init.props = PropSet(np);
    for (int i = 0; i < np; ++i)
        if (rng() % 2)
            t.init.props.set(i);
    for (int i = 0; i < nv; ++i)
        t.init.values.push_back(Rational(ri(rng, -3, 3)));

    auto rand_constraint = [&]() {
        return Constraint{Expr::variable(ri(rng, 0, nv - 1)),
                          rng() % 2 ? Comparator::ge : Comparator::gt,
                          Expr::constant(Rational(ri(rng, -2, 6)))};
    };

    for (int i = 0; i < na; ++i) {
        Action a;
        a.id = i;
        a.name = "a" + to_string(i);
        a.pre.props = random_prop_subset(rng, np, 2);
        if (rng() % 2)
            a.pre.constraints.push_back(rand_constraint());
        a.eff.adds = random_prop_subset(rng, np, 2);
        a.eff.dels = random_prop_subset(rng, np, 2);
        set<int> targets;
        int ne = ri(rng, 0, 2);
        for (int k = 0; k < ne; ++k)
            targets.insert(ri(rng, 0, nv - 1));
        for (int v : targets)
            a.eff.num_effects.push_back(
                {v, rng() % 2 ? AssignOp::increase : AssignOp::decrease,
                 Expr::constant(Rational(ri(rng, 1, 3)))});
        t.actions.push_back(std::move(a));
    }

    t.goal.props = random_prop_subset(rng, np, 2);
    if (rng() % 2)
        t.goal.constraints.push_back(rand_constraint());
    if (t.goal.props.empty() && t.goal.constraints.empty())
        t.goal.props.push_back(ri(rng, 0, np - 1));
    return t;
}

namespace {

// a adds nothing over b: subset propositions, pointwise <= values.
bool relaxed_covered_by(const State &a, const State &b) {
    if (!a.props.is_subset_of(b.props))
        return false;
    for (size_t v = 0; v < a.values.size(); ++v)
        if (a.values[v] > b.values[v])
            return false;
    return true;
}

string state_key(const LnfTask &task, const State &s) {
    string key;
    key.reserve(task.props.size() + 8 * task.vars.size());
    for (size_t p = 0; p < task.props.size(); ++p)
        key += s.props.test(p) ? '1' : '0';
    for (size_t v = 0; v < task.vars.size(); ++v) {
        key += '|';
        key += s.values[v].to_string();
    }
    return key;
}

}  // namespace

optional<bool> brute_force_relaxed_solvable(const LnfTask &task,
                                            long node_budget) {
    vector<State> antichain;
    deque<State> queue;
    auto try_add = [&](const State &s) {
        for (const State &e : antichain)
            if (relaxed_covered_by(s, e))
                return;
        erase_if(antichain,
                 [&](const State &e) { return relaxed_covered_by(e, s); });
        antichain.push_back(s);
        queue.push_back(s);
    };
    try_add(task.init);
    long popped = 0;
    while (!queue.empty()) {
        if (++popped > node_budget)
            return nullopt;
        State s = std::move(queue.front());
        queue.pop_front();
        if (is_goal_lnf(task, s))
            return true;
        for (const LnfAction &a : task.actions) {
            optional<State> succ = relaxed_apply_lnf(a, s);
            if (succ)
                try_add(*succ);
        }
    }
    return false;
}

ExhaustiveResult exhaustive_search(const LnfTask &task, long state_budget) {
    struct Node {
        State s;
        int parent;
        int action;
    };
    set<string> seen;
    vector<Node> nodes;
    deque<int> queue;
    seen.insert(state_key(task, task.init));
    nodes.push_back({task.init, -1, -1});
    queue.push_back(0);
    long stored = 1;
    auto plan_to = [&](int idx) {
        Plan plan;
        while (nodes[idx].parent != -1) {
            plan.push_back(nodes[idx].action);
            idx = nodes[idx].parent;
        }
        reverse(plan.begin(), plan.end());
        return plan;
    };
    while (!queue.empty()) {
        int idx = queue.front();
        queue.pop_front();
        if (is_goal_lnf(task, nodes[idx].s))
            return {ExhaustiveResult::Verdict::solved, plan_to(idx)};
        State base = nodes[idx].s;
        for (size_t a = 0; a < task.actions.size(); ++a) {
            optional<State> succ = apply_lnf_action(task.actions[a], base);
            if (!succ)
                continue;
            if (!seen.insert(state_key(task, *succ)).second)
                continue;
            if (++stored > state_budget)
                return {ExhaustiveResult::Verdict::budget, {}};
            nodes.push_back({std::move(*succ), idx, (int)a});
            queue.push_back(nodes.size() - 1);
        }
    }
    return {ExhaustiveResult::Verdict::unsolvable, {}};
}

optional<bool> exhaustive_solvable(const LnfTask &task, long state_budget) {
    ExhaustiveResult r = exhaustive_search(task, state_budget);
    if (r.verdict == ExhaustiveResult::Verdict::budget)
        return nullopt;
    return r.verdict == ExhaustiveResult::Verdict::solved;
}

optional<Rational> exhaustive_best_cost(const LnfTask &task,
                                        const vector<Rational> &costs,
                                        long state_budget) {
    map<string, Rational> best;
    multimap<Rational, State> open;
    best.emplace(state_key(task, task.init), Rational());
    open.insert({Rational(), task.init});
    long pops = 0;
    while (!open.empty()) {
        auto it = open.begin();
        Rational g = it->first;
        State s = std::move(it->second);
        open.erase(it);
        if (++pops > state_budget)
            return nullopt;
        auto bit = best.find(state_key(task, s));
        if (bit != best.end() && bit->second < g)
            continue;  // superseded entry
        if (is_goal_lnf(task, s))
            return g;
        for (size_t a = 0; a < task.actions.size(); ++a) {
            optional<State> succ = apply_lnf_action(task.actions[a], s);
            if (!succ)
                continue;
            Rational g2 = g + costs[a];
            auto [entry, inserted] =
                best.try_emplace(state_key(task, *succ), g2);
            if (!inserted) {
                if (entry->second <= g2)
                    continue;
                entry->second = g2;
            }
            open.insert({g2, std::move(*succ)});
        }
    }
    return nullopt;
}

}  // namespace oracle
}  // namespace nplan
