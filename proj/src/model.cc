#include "model.h"

#include <algorithm>
#include <bit>
#include <cassert>

using namespace std;

namespace nplan {

int PropSet::count() const {
    int total = 0;
    for (uint64_t w : words)
        total += popcount(w);
    return total;
}

bool PropSet::is_subset_of(const PropSet &other) const {
    assert(words.size() == other.words.size());
    for (size_t i = 0; i < words.size(); ++i)
        if (words[i] & ~other.words[i])
            return false;
    return true;
}

size_t PropSet::hash() const {
    size_t h = 14695981039346656037ULL;
    for (uint64_t w : words)
        h = (h ^ w) * 1099511628211ULL;
    return h;
}

Expr Expr::constant(Rational c) {
    Expr e;
    e.nodes.push_back({Kind::constant, std::move(c), -1, -1, -1});
    e.root = 0;
    return e;
}

Expr Expr::variable(int var) {
    Expr e;
    e.nodes.push_back({Kind::variable, Rational(), var, -1, -1});
    e.root = 0;
    return e;
}

int Expr::copy_subtree(const Expr &src, int src_index) {
    const Node &n = src.nodes[src_index];
    int left = -1, right = -1;
    if (n.left != -1)
        left = copy_subtree(src, n.left);
    if (n.right != -1)
        right = copy_subtree(src, n.right);
    nodes.push_back({n.kind, n.value, n.var, left, right});
    return static_cast<int>(nodes.size()) - 1;
}

Expr Expr::binary(Kind op, const Expr &left, const Expr &right) {
    assert(op != Kind::constant && op != Kind::variable);
    Expr e;
    int l = e.copy_subtree(left, left.root);
    int r = e.copy_subtree(right, right.root);
    e.nodes.push_back({op, Rational(), -1, l, r});
    e.root = static_cast<int>(e.nodes.size()) - 1;
    return e;
}

vector<int> Expr::variables() const {
    vector<int> result;
    for (const Node &n : nodes)
        if (n.kind == Kind::variable)
            result.push_back(n.var);
    sort(result.begin(), result.end());
    result.erase(unique(result.begin(), result.end()), result.end());
    return result;
}

string Expr::to_string(const vector<NumVar> &vars) const {
    // Prefix notation, mirroring the input syntax.
    string out;
    auto rec = [&](auto &&self, int idx) -> void {
        const Node &n = nodes[idx];
        switch (n.kind) {
        case Kind::constant:
            out += n.value.to_string();
            return;
        case Kind::variable:
            out += vars[n.var].name;
            return;
        case Kind::add:
        case Kind::sub:
        case Kind::mul:
        case Kind::div:
            out += '(';
            out += n.kind == Kind::add   ? '+'
                   : n.kind == Kind::sub ? '-'
                   : n.kind == Kind::mul ? '*'
                                         : '/';
            out += ' ';
            self(self, n.left);
            out += ' ';
            self(self, n.right);
            out += ')';
            return;
        }
    };
    rec(rec, root);
    return out;
}

string comparator_name(Comparator c) {
    switch (c) {
    case Comparator::lt: return "<";
    case Comparator::le: return "<=";
    case Comparator::eq: return "=";
    case Comparator::ge: return ">=";
    case Comparator::gt: return ">";
    }
    return "?";
}

string assign_op_name(AssignOp op) {
    switch (op) {
    case AssignOp::assign: return "assign";
    case AssignOp::increase: return "increase";
    case AssignOp::decrease: return "decrease";
    }
    return "?";
}

optional<Rational> eval_expr(const Expr &expr, const State &s) {
    // Iterative post-order evaluation; keeps deep expressions off the call
    // stack and undefined results explicit.
    vector<optional<Rational>> memo(expr.num_nodes());
    vector<pair<int, bool>> stack;  // (node, children done)
    stack.push_back({expr.root_index(), false});
    while (!stack.empty()) {
        auto [idx, ready] = stack.back();
        stack.pop_back();
        const Expr::Node &n = expr.node(idx);
        if (n.kind == Expr::Kind::constant) {
            memo[idx] = n.value;
            continue;
        }
        if (n.kind == Expr::Kind::variable) {
            memo[idx] = s.values[n.var];
            continue;
        }
        if (!ready) {
            stack.push_back({idx, true});
            stack.push_back({n.left, false});
            stack.push_back({n.right, false});
            continue;
        }
        const optional<Rational> &l = memo[n.left];
        const optional<Rational> &r = memo[n.right];
        if (!l || !r) {
            memo[idx] = nullopt;
            continue;
        }
        switch (n.kind) {
        case Expr::Kind::add:
            memo[idx] = *l + *r;
            break;
        case Expr::Kind::sub:
            memo[idx] = *l - *r;
            break;
        case Expr::Kind::mul:
            memo[idx] = *l * *r;
            break;
        case Expr::Kind::div:
            if (r->is_zero())
                memo[idx] = nullopt;
            else
                memo[idx] = *l / *r;
            break;
        default:
            break;
        }
    }
    return memo[expr.root_index()];
}

static bool compare(const Rational &l, Comparator comp, const Rational &r) {
    switch (comp) {
    case Comparator::lt: return l < r;
    case Comparator::le: return l <= r;
    case Comparator::eq: return l == r;
    case Comparator::ge: return l >= r;
    case Comparator::gt: return l > r;
    }
    return false;
}

bool holds(const Constraint &c, const State &s) {
    optional<Rational> l = eval_expr(c.lhs, s);
    if (!l)
        return false;
    optional<Rational> r = eval_expr(c.rhs, s);
    if (!r)
        return false;
    return compare(*l, c.comp, *r);
}

bool holds(const Condition &cond, const State &s) {
    for (int p : cond.props)
        if (!s.props.test(p))
            return false;
    for (const Constraint &c : cond.constraints)
        if (!holds(c, s))
            return false;
    return true;
}

ApplyResult apply_action(const NumericTask &task, const State &s,
                         const Action &a) {
    (void)task;
    if (!holds(a.pre, s))
        return {ApplyStatus::not_applicable, State()};
    // Evaluate every right-hand side against the incoming state before
    // writing anything, so effects within one action cannot see each other.
    vector<Rational> rhs_values;
    rhs_values.reserve(a.eff.num_effects.size());
    for (const NumEffect &ne : a.eff.num_effects) {
        optional<Rational> v = eval_expr(ne.rhs, s);
        if (!v)
            return {ApplyStatus::undefined_effect, State()};
        rhs_values.push_back(std::move(*v));
    }
    State result = s;
    for (int p : a.eff.dels)
        result.props.reset(p);
    for (int p : a.eff.adds)
        result.props.set(p);
    for (size_t i = 0; i < a.eff.num_effects.size(); ++i) {
        const NumEffect &ne = a.eff.num_effects[i];
        switch (ne.op) {
        case AssignOp::assign:
            result.values[ne.var] = rhs_values[i];
            break;
        case AssignOp::increase:
            result.values[ne.var] += rhs_values[i];
            break;
        case AssignOp::decrease:
            result.values[ne.var] -= rhs_values[i];
            break;
        }
    }
    return {ApplyStatus::applied, std::move(result)};
}

bool is_goal(const NumericTask &task, const State &s) {
    return holds(task.goal, s);
}

}  // namespace nplan
