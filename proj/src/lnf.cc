#include "lnf.h"

#include <algorithm>
#include <cassert>
#include <map>
#include <set>

using namespace std;

namespace nplan {

void LnfExpr::add_term(int var, const Rational &coeff) {
    if (coeff.is_zero())
        return;
    auto it = lower_bound(terms.begin(), terms.end(), var,
                          [](const auto &t, int v) { return t.first < v; });
    if (it != terms.end() && it->first == var) {
        it->second += coeff;
        if (it->second.is_zero())
            terms.erase(it);
    } else {
        terms.insert(it, {var, coeff});
    }
}

LnfExpr LnfExpr::negated() const {
    LnfExpr out;
    out.constant = -constant;
    out.terms.reserve(terms.size());
    for (const auto &[var, coeff] : terms)
        out.terms.push_back({var, -coeff});
    return out;
}

string LnfExpr::to_string(const vector<NumVar> &vars) const {
    string s;
    for (const auto &[var, coeff] : terms) {
        if (!s.empty())
            s += " + ";
        s += coeff.to_string() + "*" + vars[var].name;
    }
    if (s.empty())
        return constant.to_string();
    if (!constant.is_zero())
        s += " + " + constant.to_string();
    return s;
}

// ---- fold_constants ----

namespace {

LnfExpr scaled(const LnfExpr &e, const Rational &factor) {
    LnfExpr out;
    if (factor.is_zero())
        return out;
    out.constant = e.constant * factor;
    for (const auto &[var, coeff] : e.terms)
        out.terms.push_back({var, coeff * factor});
    return out;
}

LnfExpr sum_of(const LnfExpr &a, const LnfExpr &b) {
    LnfExpr out = a;
    out.constant += b.constant;
    for (const auto &[var, coeff] : b.terms)
        out.add_term(var, coeff);
    return out;
}

optional<Rational> eval_binop(Expr::Kind kind, const Rational &l,
                              const Rational &r) {
    switch (kind) {
    case Expr::Kind::add: return l + r;
    case Expr::Kind::sub: return l - r;
    case Expr::Kind::mul: return l * r;
    case Expr::Kind::div:
        if (r.is_zero())
            return nullopt;
        return l / r;
    default:
        return nullopt;
    }
}

struct Folder {
    const vector<Rational> &init_values;
    const vector<bool> &is_task_const;

    // nullopt: the expression contains a division by a constant zero and is
    // undefined in every state.
    optional<Expr> fold(const Expr &e, int idx) const {
        const Expr::Node &n = e.node(idx);
        switch (n.kind) {
        case Expr::Kind::constant:
            return Expr::constant(n.value);
        case Expr::Kind::variable:
            if (is_task_const[n.var])
                return Expr::constant(init_values[n.var]);
            return Expr::variable(n.var);
        default:
            break;
        }
        optional<Expr> l = fold(e, n.left);
        if (!l)
            return nullopt;
        optional<Expr> r = fold(e, n.right);
        if (!r)
            return nullopt;
        if (n.kind == Expr::Kind::div && r->is_constant() &&
            r->constant_value().is_zero())
            return nullopt;
        if (l->is_constant() && r->is_constant()) {
            optional<Rational> v =
                eval_binop(n.kind, l->constant_value(), r->constant_value());
            if (!v)
                return nullopt;
            return Expr::constant(*v);
        }
        return Expr::binary(n.kind, *l, *r);
    }

    optional<Expr> fold(const Expr &e) const { return fold(e, e.root_index()); }
};

bool compare_to(const Rational &l, Comparator comp, const Rational &r) {
    switch (comp) {
    case Comparator::lt: return l < r;
    case Comparator::le: return l <= r;
    case Comparator::eq: return l == r;
    case Comparator::ge: return l >= r;
    case Comparator::gt: return l > r;
    }
    return false;
}

Expr remap_expr(const Expr &e, int idx, const vector<int> &var_map) {
    const Expr::Node &n = e.node(idx);
    switch (n.kind) {
    case Expr::Kind::constant:
        return Expr::constant(n.value);
    case Expr::Kind::variable:
        assert(var_map[n.var] != -1);
        return Expr::variable(var_map[n.var]);
    default:
        return Expr::binary(n.kind, remap_expr(e, n.left, var_map),
                            remap_expr(e, n.right, var_map));
    }
}

}  // namespace

NumericTask fold_constants(const NumericTask &task) {
    vector<bool> is_task_const(task.vars.size(), true);
    for (const Action &a : task.actions)
        for (const NumEffect &ne : a.eff.num_effects)
            is_task_const[ne.var] = false;

    Folder folder{task.init.values, is_task_const};

    // Fold actions; folded-false or undefined preconditions and undefined
    // effects make an action permanently inapplicable, so it is removed.
    struct FoldedAction {
        const Action *src;
        vector<Constraint> pre_constraints;
        vector<NumEffect> num_effects;
    };
    vector<FoldedAction> kept;
    for (const Action &a : task.actions) {
        FoldedAction fa{&a, {}, {}};
        bool alive = true;
        for (const Constraint &c : a.pre.constraints) {
            optional<Expr> l = folder.fold(c.lhs);
            optional<Expr> r = folder.fold(c.rhs);
            if (!l || !r) {
                alive = false;
                break;
            }
            if (l->is_constant() && r->is_constant()) {
                if (compare_to(l->constant_value(), c.comp,
                               r->constant_value()))
                    continue;  // trivially true
                alive = false;
                break;
            }
            fa.pre_constraints.push_back({std::move(*l), c.comp,
                                          std::move(*r)});
        }
        if (!alive)
            continue;
        for (const NumEffect &ne : a.eff.num_effects) {
            optional<Expr> rhs = folder.fold(ne.rhs);
            if (!rhs) {
                alive = false;
                break;
            }
            fa.num_effects.push_back({ne.var, ne.op, std::move(*rhs)});
        }
        if (!alive)
            continue;
        kept.push_back(std::move(fa));
    }

    // Fold the goal; a folded-false constraint is kept in constant form so
    // the task stays honestly unsolvable.
    vector<Constraint> goal_constraints;
    for (const Constraint &c : task.goal.constraints) {
        optional<Expr> l = folder.fold(c.lhs);
        optional<Expr> r = folder.fold(c.rhs);
        if (!l || !r) {
            goal_constraints.push_back(
                {Expr::constant(Rational(0)), Comparator::ge,
                 Expr::constant(Rational(1))});
            continue;
        }
        if (l->is_constant() && r->is_constant()) {
            if (compare_to(l->constant_value(), c.comp, r->constant_value()))
                continue;
            goal_constraints.push_back(
                {Expr::constant(Rational(0)), Comparator::ge,
                 Expr::constant(Rational(1))});
            continue;
        }
        goal_constraints.push_back({std::move(*l), c.comp, std::move(*r)});
    }

    optional<Expr> metric_expr;
    if (task.metric) {
        metric_expr = folder.fold(task.metric->expr);
        if (!metric_expr)
            throw invalid_argument(
                "metric expression divides by a constant zero");
    }

    // Re-index the variables that are still mentioned.
    vector<bool> used(task.vars.size(), false);
    auto mark = [&](const Expr &e) {
        for (int v : e.variables())
            used[v] = true;
    };
    for (const FoldedAction &fa : kept) {
        for (const Constraint &c : fa.pre_constraints) {
            mark(c.lhs);
            mark(c.rhs);
        }
        for (const NumEffect &ne : fa.num_effects) {
            used[ne.var] = true;
            mark(ne.rhs);
        }
    }
    for (const Constraint &c : goal_constraints) {
        mark(c.lhs);
        mark(c.rhs);
    }
    if (metric_expr)
        mark(*metric_expr);

    NumericTask out;
    vector<int> var_map(task.vars.size(), -1);
    for (size_t v = 0; v < task.vars.size(); ++v) {
        if (!used[v])
            continue;
        int id = static_cast<int>(out.vars.size());
        var_map[v] = id;
        out.vars.push_back({id, task.vars[v].name, -1});
        out.init.values.push_back(task.init.values[v]);
    }
    out.props = task.props;
    out.init.props = task.init.props;

    for (const FoldedAction &fa : kept) {
        Action a;
        a.id = static_cast<int>(out.actions.size());
        a.name = fa.src->name;
        a.cost = fa.src->cost;
        a.pre.props = fa.src->pre.props;
        for (const Constraint &c : fa.pre_constraints)
            a.pre.constraints.push_back(
                {remap_expr(c.lhs, c.lhs.root_index(), var_map), c.comp,
                 remap_expr(c.rhs, c.rhs.root_index(), var_map)});
        a.eff.adds = fa.src->eff.adds;
        a.eff.dels = fa.src->eff.dels;
        for (const NumEffect &ne : fa.num_effects)
            a.eff.num_effects.push_back(
                {var_map[ne.var], ne.op,
                 remap_expr(ne.rhs, ne.rhs.root_index(), var_map)});
        out.actions.push_back(std::move(a));
    }

    out.goal.props = task.goal.props;
    for (const Constraint &c : goal_constraints)
        out.goal.constraints.push_back(
            {remap_expr(c.lhs, c.lhs.root_index(), var_map), c.comp,
             remap_expr(c.rhs, c.rhs.root_index(), var_map)});

    if (task.metric)
        out.metric = Metric{task.metric->direction,
                            remap_expr(*metric_expr,
                                       metric_expr->root_index(), var_map)};
    return out;
}

// ---- to_pre_lnf ----

namespace {

struct LinResult {
    enum class Kind { linear, not_linear, undefined };
    Kind kind;
    LnfExpr expr;  // valid when kind == linear

    static LinResult lin(LnfExpr e) {
        return {Kind::linear, std::move(e)};
    }
    static LinResult bad() { return {Kind::not_linear, {}}; }
    static LinResult undef() { return {Kind::undefined, {}}; }
};

bool subtree_has_vars(const Expr &e, int idx) {
    const Expr::Node &n = e.node(idx);
    if (n.kind == Expr::Kind::variable)
        return true;
    if (n.kind == Expr::Kind::constant)
        return false;
    return subtree_has_vars(e, n.left) || subtree_has_vars(e, n.right);
}

optional<Rational> eval_var_free(const Expr &e, int idx) {
    const Expr::Node &n = e.node(idx);
    if (n.kind == Expr::Kind::constant)
        return n.value;
    assert(n.kind != Expr::Kind::variable);
    optional<Rational> l = eval_var_free(e, n.left);
    optional<Rational> r = eval_var_free(e, n.right);
    if (!l || !r)
        return nullopt;
    return eval_binop(n.kind, *l, *r);
}

LinResult linearize(const Expr &e, int idx) {
    const Expr::Node &n = e.node(idx);
    switch (n.kind) {
    case Expr::Kind::constant: {
        LnfExpr out;
        out.constant = n.value;
        return LinResult::lin(std::move(out));
    }
    case Expr::Kind::variable: {
        LnfExpr out;
        out.terms.push_back({n.var, Rational(1)});
        return LinResult::lin(std::move(out));
    }
    case Expr::Kind::add:
    case Expr::Kind::sub: {
        LinResult l = linearize(e, n.left);
        if (l.kind != LinResult::Kind::linear)
            return l;
        LinResult r = linearize(e, n.right);
        if (r.kind != LinResult::Kind::linear)
            return r;
        if (n.kind == Expr::Kind::sub)
            return LinResult::lin(sum_of(l.expr, r.expr.negated()));
        return LinResult::lin(sum_of(l.expr, r.expr));
    }
    case Expr::Kind::mul: {
        // Linearity is syntactic: one factor must be variable-free.
        bool left_const = !subtree_has_vars(e, n.left);
        bool right_const = !subtree_has_vars(e, n.right);
        if (!left_const && !right_const)
            return LinResult::bad();
        int const_side = left_const ? n.left : n.right;
        int other_side = left_const ? n.right : n.left;
        optional<Rational> c = eval_var_free(e, const_side);
        if (!c)
            return LinResult::undef();
        LinResult other = linearize(e, other_side);
        if (other.kind != LinResult::Kind::linear)
            return other;
        return LinResult::lin(scaled(other.expr, *c));
    }
    case Expr::Kind::div: {
        if (subtree_has_vars(e, n.right))
            return LinResult::bad();
        optional<Rational> c = eval_var_free(e, n.right);
        if (!c || c->is_zero())
            return LinResult::undef();
        LinResult l = linearize(e, n.left);
        if (l.kind != LinResult::Kind::linear)
            return l;
        return LinResult::lin(scaled(l.expr, Rational(1) / *c));
    }
    }
    return LinResult::bad();
}

LinResult linearize(const Expr &e) {
    return linearize(e, e.root_index());
}

LnfConstraint constant_false_constraint() {
    LnfExpr e;
    e.constant = Rational(-1);
    return {std::move(e), Comparator::ge};
}

// lhs comp rhs, rewritten to one or two ">= 0 / > 0" constraints.
// nullopt: one side is undefined, so the constraint is constant-false.
optional<vector<LnfConstraint>> convert_constraint(const Constraint &c,
                                                   const string &context) {
    LinResult l = linearize(c.lhs);
    LinResult r = linearize(c.rhs);
    if (l.kind == LinResult::Kind::not_linear ||
        r.kind == LinResult::Kind::not_linear)
        throw NotLinearError("nonlinear comparison in " + context);
    if (l.kind == LinResult::Kind::undefined ||
        r.kind == LinResult::Kind::undefined)
        return nullopt;
    vector<LnfConstraint> out;
    switch (c.comp) {
    case Comparator::lt:
        out.push_back({sum_of(r.expr, l.expr.negated()), Comparator::gt});
        break;
    case Comparator::le:
        out.push_back({sum_of(r.expr, l.expr.negated()), Comparator::ge});
        break;
    case Comparator::ge:
        out.push_back({sum_of(l.expr, r.expr.negated()), Comparator::ge});
        break;
    case Comparator::gt:
        out.push_back({sum_of(l.expr, r.expr.negated()), Comparator::gt});
        break;
    case Comparator::eq:
        out.push_back({sum_of(l.expr, r.expr.negated()), Comparator::ge});
        out.push_back({sum_of(r.expr, l.expr.negated()), Comparator::ge});
        break;
    }
    return out;
}

}  // namespace

LnfTask to_pre_lnf(const NumericTask &task) {
    LnfTask out;
    out.props = task.props;
    out.vars = task.vars;
    out.num_original_vars = static_cast<int>(task.vars.size());
    out.init = task.init;
    out.metric = task.metric;
    out.counterpart.assign(task.vars.size(), -1);

    for (const Action &src : task.actions) {
        LnfAction a;
        a.id = static_cast<int>(out.actions.size());
        a.name = src.name;
        a.cost = src.cost;
        a.pre.props = src.pre.props;
        a.adds = src.eff.adds;
        a.dels = src.eff.dels;
        bool dead = false;
        for (const Constraint &c : src.pre.constraints) {
            auto converted = convert_constraint(c, "action " + src.name);
            if (!converted) {
                dead = true;
                break;
            }
            for (LnfConstraint &lc : *converted)
                a.pre.constraints.push_back(std::move(lc));
        }
        for (const NumEffect &ne : src.eff.num_effects) {
            if (dead)
                break;
            LinResult rhs = linearize(ne.rhs);
            if (rhs.kind == LinResult::Kind::not_linear)
                throw NotLinearError("nonlinear effect on " +
                                     task.vars[ne.var].name + " in action " +
                                     src.name);
            if (rhs.kind == LinResult::Kind::undefined) {
                // The effect can never become applicable, hence neither can
                // the action.
                dead = true;
                break;
            }
            switch (ne.op) {
            case AssignOp::assign:
                a.num_effects.push_back(
                    {ne.var, AssignOp::assign, std::move(rhs.expr)});
                break;
            case AssignOp::increase:
                a.num_effects.push_back(
                    {ne.var, AssignOp::increase, std::move(rhs.expr)});
                break;
            case AssignOp::decrease:
                a.num_effects.push_back(
                    {ne.var, AssignOp::increase, rhs.expr.negated()});
                break;
            }
        }
        if (dead) {
            // Keep the action with an unsatisfiable precondition rather
            // than renumbering ids here; fold_constants is the pass that
            // removes impossible actions.
            a.pre.constraints.clear();
            a.pre.constraints.push_back(constant_false_constraint());
            a.num_effects.clear();
        }
        out.actions.push_back(std::move(a));
    }

    out.goal.props = task.goal.props;
    for (const Constraint &c : task.goal.constraints) {
        auto converted = convert_constraint(c, "the goal");
        if (!converted) {
            out.goal.constraints.push_back(constant_false_constraint());
            continue;
        }
        for (LnfConstraint &lc : *converted)
            out.goal.constraints.push_back(std::move(lc));
    }
    return out;
}

optional<LnfExpr> linearize_expr(const Expr &expr) {
    LinResult r = linearize(expr);
    if (r.kind != LinResult::Kind::linear)
        return nullopt;
    return std::move(r.expr);
}

// ---- invert_negatives ----

namespace {

LnfExpr rewrite_inverses(const LnfExpr &e, const vector<int> &counterpart) {
    bool needed = false;
    for (const auto &[var, coeff] : e.terms)
        if (coeff.sign() < 0 && counterpart[var] != -1) {
            needed = true;
            break;
        }
    if (!needed)
        return e;
    LnfExpr out;
    out.constant = e.constant;
    for (const auto &[var, coeff] : e.terms) {
        if (coeff.sign() < 0 && counterpart[var] != -1)
            out.add_term(counterpart[var], -coeff);
        else
            out.add_term(var, coeff);
    }
    return out;
}

}  // namespace

void invert_negatives(LnfTask &task) {
    auto rewrite_all = [&task]() {
        for (LnfAction &a : task.actions) {
            for (LnfConstraint &c : a.pre.constraints)
                c.expr = rewrite_inverses(c.expr, task.counterpart);
            for (LnfEffect &e : a.num_effects)
                e.rhs = rewrite_inverses(e.rhs, task.counterpart);
        }
        for (LnfConstraint &c : task.goal.constraints)
            c.expr = rewrite_inverses(c.expr, task.counterpart);
    };

    auto min_negative_var = [&task]() {
        int best = -1;
        auto scan = [&best](const LnfExpr &e) {
            for (const auto &[var, coeff] : e.terms)
                if (coeff.sign() < 0 && (best == -1 || var < best))
                    best = var;
        };
        for (const LnfAction &a : task.actions)
            for (const LnfConstraint &c : a.pre.constraints)
                scan(c.expr);
        for (const LnfConstraint &c : task.goal.constraints)
            scan(c.expr);
        if (best != -1)
            return best;
        for (const LnfAction &a : task.actions)
            for (const LnfEffect &e : a.num_effects)
                scan(e.rhs);
        return best;
    };

    int bound = static_cast<int>(task.vars.size());
    for (int round = 0; round <= bound; ++round) {
        rewrite_all();
        int v = min_negative_var();
        if (v == -1)
            return;
        // Negative occurrences of already-inverted variables were rewritten
        // above, so v cannot have an inverse yet.
        assert(task.counterpart[v] == -1);
        int nv = static_cast<int>(task.vars.size());
        task.vars.push_back({nv, "-" + task.vars[v].name, v});
        task.counterpart[v] = nv;
        task.counterpart.push_back(v);
        task.init.values.push_back(-task.init.values[v]);
        for (LnfAction &a : task.actions) {
            size_t existing = a.num_effects.size();
            for (size_t i = 0; i < existing; ++i) {
                if (a.num_effects[i].var != v)
                    continue;
                LnfEffect mirror{nv, a.num_effects[i].op,
                                 a.num_effects[i].rhs.negated()};
                a.num_effects.push_back(std::move(mirror));
            }
        }
    }
    // Each round inverts a fresh variable, so the bound cannot be hit.
    assert(false && "negative-coefficient elimination did not converge");
}

LnfTask normalize(const NumericTask &task) {
    LnfTask result = to_pre_lnf(fold_constants(task));
    invert_negatives(result);
    return result;
}

// ---- analysis ----

AssignDepGraph check_acyclic(const LnfTask &task) {
    int n = static_cast<int>(task.vars.size());
    AssignDepGraph g;
    g.successors.assign(n, {});
    set<pair<int, int>> seen;
    for (const LnfAction &a : task.actions)
        for (const LnfEffect &e : a.num_effects) {
            if (e.op != AssignOp::assign)
                continue;
            for (const auto &[src, coeff] : e.rhs.terms) {
                (void)coeff;
                if (seen.insert({src, e.var}).second)
                    g.successors[src].push_back(e.var);
            }
        }

    // Peel variables whose assign dependencies are all resolved: a variable
    // is ready once every edge target reachable from it is done, so count
    // outgoing edges and walk them backwards.
    vector<int> pending_out(n, 0);
    vector<vector<int>> predecessors(n);
    for (int v = 0; v < n; ++v)
        for (int succ : g.successors[v]) {
            ++pending_out[v];
            predecessors[succ].push_back(v);
        }
    vector<int> queue;
    for (int v = 0; v < n; ++v)
        if (pending_out[v] == 0)
            queue.push_back(v);
    for (size_t head = 0; head < queue.size(); ++head) {
        int v = queue[head];
        g.topo_targets_first.push_back(v);
        for (int pred : predecessors[v])
            if (--pending_out[pred] == 0)
                queue.push_back(pred);
    }
    if (static_cast<int>(g.topo_targets_first.size()) != n) {
        g.acyclic = false;
        vector<bool> done(n, false);
        for (int v : g.topo_targets_first)
            done[v] = true;
        for (int v = 0; v < n; ++v)
            if (!done[v])
                g.tainted.push_back(v);
    }
    return g;
}

RelevanceSet compute_relevance(const LnfTask &task) {
    int n = static_cast<int>(task.vars.size());
    RelevanceSet r;
    r.relevant.assign(n, false);
    auto mark_expr = [&r](const LnfExpr &e) {
        for (const auto &[var, coeff] : e.terms) {
            (void)coeff;
            r.relevant[var] = true;
        }
    };
    for (const LnfAction &a : task.actions)
        for (const LnfConstraint &c : a.pre.constraints)
            mark_expr(c.expr);
    for (const LnfConstraint &c : task.goal.constraints)
        mark_expr(c.expr);

    bool changed = true;
    while (changed) {
        changed = false;
        for (const LnfAction &a : task.actions)
            for (const LnfEffect &e : a.num_effects) {
                if (!r.relevant[e.var])
                    continue;
                for (const auto &[var, coeff] : e.rhs.terms) {
                    (void)coeff;
                    if (!r.relevant[var]) {
                        r.relevant[var] = true;
                        changed = true;
                    }
                }
            }
    }
    for (int v = 0; v < n; ++v)
        if (r.relevant[v])
            r.ids.push_back(v);
    return r;
}

// ---- structural verification ----

namespace {

void check_expr(const LnfExpr &e, int num_vars, const string &where,
                LnfReport &report) {
    int prev = -1;
    for (const auto &[var, coeff] : e.terms) {
        if (var < 0 || var >= num_vars)
            report.violations.push_back(where + ": variable id " +
                                        to_string(var) + " out of range");
        if (var <= prev)
            report.violations.push_back(where + ": terms not sorted/unique");
        prev = var;
        if (coeff.is_zero())
            report.violations.push_back(where + ": zero coefficient");
        else if (coeff.sign() < 0)
            report.violations.push_back(where + ": negative coefficient on " +
                                        to_string(var));
    }
}

}  // namespace

LnfReport verify_lnf(const LnfTask &task) {
    LnfReport report;
    int n = static_cast<int>(task.vars.size());
    auto check_constraint = [&](const LnfConstraint &c, const string &where) {
        check_expr(c.expr, n, where, report);
        if (c.comp != Comparator::ge && c.comp != Comparator::gt)
            report.violations.push_back(where + ": comparator must be >= or >");
    };
    for (const LnfAction &a : task.actions) {
        string where = "action " + a.name;
        for (const LnfConstraint &c : a.pre.constraints)
            check_constraint(c, where);
        set<int> targets;
        for (const LnfEffect &e : a.num_effects) {
            check_expr(e.rhs, n, where, report);
            if (e.op == AssignOp::decrease)
                report.violations.push_back(where +
                                            ": decrease effect not allowed");
            if (e.var < 0 || e.var >= n)
                report.violations.push_back(where + ": effect target out of "
                                                    "range");
            else if (!targets.insert(e.var).second)
                report.violations.push_back(
                    where + ": multiple effects on " + task.vars[e.var].name);
        }
    }
    for (const LnfConstraint &c : task.goal.constraints)
        check_constraint(c, "goal");
    if (task.init.values.size() != task.vars.size())
        report.violations.push_back("init value vector size mismatch");
    for (int v = 0; v < n; ++v) {
        int cp = task.counterpart[v];
        if (cp == -1)
            continue;
        if (cp < 0 || cp >= n || task.counterpart[cp] != v)
            report.violations.push_back("counterpart map not symmetric at " +
                                        to_string(v));
        else if (task.init.values[v] != -task.init.values[cp])
            report.violations.push_back(
                "inverse initial value mismatch for " + task.vars[v].name);
    }
    report.ok = report.violations.empty();
    return report;
}

// ---- execution ----

bool holds_lnf(const LnfCondition &cond, const State &s) {
    for (int p : cond.props)
        if (!s.props.test(p))
            return false;
    for (const LnfConstraint &c : cond.constraints)
        if (!c.satisfied(s.values))
            return false;
    return true;
}

optional<State> apply_lnf_action(const LnfAction &a, const State &s) {
    if (!holds_lnf(a.pre, s))
        return nullopt;
    vector<Rational> rhs_values;
    rhs_values.reserve(a.num_effects.size());
    for (const LnfEffect &e : a.num_effects)
        rhs_values.push_back(e.rhs.eval(s.values));
    State result = s;
    for (int p : a.dels)
        result.props.reset(p);
    for (int p : a.adds)
        result.props.set(p);
    for (size_t i = 0; i < a.num_effects.size(); ++i) {
        const LnfEffect &e = a.num_effects[i];
        if (e.op == AssignOp::assign)
            result.values[e.var] = rhs_values[i];
        else
            result.values[e.var] += rhs_values[i];
    }
    return result;
}

bool is_goal_lnf(const LnfTask &task, const State &s) {
    return holds_lnf(task.goal, s);
}

}  // namespace nplan
