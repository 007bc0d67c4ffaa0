#ifndef NPLAN_MODEL_H
#define NPLAN_MODEL_H

#include "rational.h"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace nplan {

/*
  Ground numeric planning task: propositions plus rational-valued state
  variables. States are value objects; tasks and actions are immutable once
  built.
*/

class PropSet {
public:
    PropSet() = default;
    explicit PropSet(int num_props)
        : num_bits(num_props), words((num_props + 63) / 64, 0) {}

    void set(int i) { words[i >> 6] |= uint64_t(1) << (i & 63); }
    void reset(int i) { words[i >> 6] &= ~(uint64_t(1) << (i & 63)); }
    bool test(int i) const {
        return (words[i >> 6] >> (i & 63)) & 1;
    }
    int size() const { return num_bits; }
    int count() const;
    bool is_subset_of(const PropSet &other) const;
    bool operator==(const PropSet &other) const {
        return words == other.words;
    }
    bool operator!=(const PropSet &other) const { return !(*this == other); }
    std::size_t hash() const;

private:
    int num_bits = 0;
    std::vector<uint64_t> words;
};

struct Proposition {
    int id;
    std::string name;
};

struct NumVar {
    int id;
    std::string name;
    // Set when this variable is the mirrored negation of another one
    // (introduced by the normalization pass); -1 otherwise.
    int inverse_of = -1;
};

// Arithmetic expression over state variables, stored as a small node arena
// so expressions are cheap value types.
class Expr {
public:
    enum class Kind { constant, variable, add, sub, mul, div };

    struct Node {
        Kind kind;
        Rational value;  // Kind::constant
        int var = -1;    // Kind::variable
        int left = -1;
        int right = -1;
    };

    static Expr constant(Rational c);
    static Expr variable(int var);
    static Expr binary(Kind op, const Expr &left, const Expr &right);

    const Node &node(int i) const { return nodes[i]; }
    int root_index() const { return root; }
    int num_nodes() const { return static_cast<int>(nodes.size()); }

    bool is_constant() const {
        return nodes[root].kind == Kind::constant;
    }
    const Rational &constant_value() const { return nodes[root].value; }

    // Sorted, duplicate-free ids of the variables mentioned.
    std::vector<int> variables() const;

    std::string to_string(const std::vector<NumVar> &vars) const;

private:
    std::vector<Node> nodes;
    int root = -1;

    int copy_subtree(const Expr &src, int src_index);
};

enum class Comparator { lt, le, eq, ge, gt };

std::string comparator_name(Comparator c);

struct Constraint {
    Expr lhs;
    Comparator comp;
    Expr rhs;
};

enum class AssignOp { assign, increase, decrease };

std::string assign_op_name(AssignOp op);

struct NumEffect {
    int var;
    AssignOp op;
    Expr rhs;
};

struct Condition {
    std::vector<int> props;  // sorted ids
    std::vector<Constraint> constraints;
};

struct Effect {
    std::vector<int> adds;  // sorted ids
    std::vector<int> dels;  // sorted ids
    std::vector<NumEffect> num_effects;  // at most one per variable
};

struct Action {
    int id;
    std::string name;
    Condition pre;
    Effect eff;
    Rational cost;  // derived for plan-metric optimization; 0 by default
};

struct State {
    PropSet props;
    std::vector<Rational> values;

    bool operator==(const State &other) const {
        return props == other.props && values == other.values;
    }
};

enum class MetricDirection { minimize, maximize };

struct Metric {
    MetricDirection direction;
    Expr expr;
};

struct NumericTask {
    std::vector<Proposition> props;
    std::vector<NumVar> vars;
    std::vector<Action> actions;
    State init;
    Condition goal;
    std::optional<Metric> metric;
};

using Plan = std::vector<int>;  // action ids, in execution order

// nullopt = undefined (a division by zero occurred somewhere below).
std::optional<Rational> eval_expr(const Expr &expr, const State &s);

// A constraint with an undefined side never holds.
bool holds(const Constraint &c, const State &s);
bool holds(const Condition &cond, const State &s);

enum class ApplyStatus { applied, not_applicable, undefined_effect };

struct ApplyResult {
    ApplyStatus status;
    State state;  // meaningful only when status == applied
};

// All effect right-hand sides are evaluated against the incoming state; an
// action whose precondition holds but whose effect divides by zero is
// rejected as undefined_effect (checked after applicability).
ApplyResult apply_action(const NumericTask &task, const State &s,
                         const Action &a);

bool is_goal(const NumericTask &task, const State &s);

}  // namespace nplan

#endif
