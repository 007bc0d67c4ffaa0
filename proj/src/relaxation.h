#ifndef NPLAN_RELAXATION_H
#define NPLAN_RELAXATION_H

#include "lnf.h"
#include "model.h"
#include "rational.h"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nplan {

/*
  Delete-and-decrease relaxation: delete lists are ignored and a numeric
  effect fires only if its outcome strictly exceeds the current value, so
  values only grow. The deciders run a fixpoint over an extended value
  domain where "unboundedly achievable" is represented as +infinity.
*/

class ExtRational {
public:
    ExtRational() : kind(Kind::finite) {}
    ExtRational(const Rational &r) : kind(Kind::finite), value(r) {}
    ExtRational(long n) : kind(Kind::finite), value(n) {}

    static ExtRational infinity() { return ExtRational(Kind::pos_inf); }
    static ExtRational neg_infinity() { return ExtRational(Kind::neg_inf); }

    bool is_finite() const { return kind == Kind::finite; }
    bool is_pos_inf() const { return kind == Kind::pos_inf; }
    bool is_neg_inf() const { return kind == Kind::neg_inf; }

    const Rational &finite_value() const { return value; }

    bool operator==(const ExtRational &o) const {
        if (kind != o.kind)
            return false;
        return kind != Kind::finite || value == o.value;
    }
    bool operator!=(const ExtRational &o) const { return !(*this == o); }
    // Total order with -inf < every finite < +inf; inf == inf, so
    // "inf > inf" is false.
    bool operator<(const ExtRational &o) const;
    bool operator<=(const ExtRational &o) const { return !(o < *this); }
    bool operator>(const ExtRational &o) const { return o < *this; }
    bool operator>=(const ExtRational &o) const { return !(*this < o); }

    // Asserts on +inf + -inf, which no planner path produces.
    ExtRational operator+(const ExtRational &o) const;

    std::string to_string() const;

private:
    enum class Kind { neg_inf, finite, pos_inf };
    explicit ExtRational(Kind k) : kind(k) {}

    Kind kind;
    Rational value;
};

inline ExtRational ext_max(const ExtRational &a, const ExtRational &b) {
    return a < b ? b : a;
}

// Value of a weighted sum when variables may carry +infinity: the sum is
// +infinity iff some mentioned variable is (coefficients are positive in
// verified normal form, so infinities never cancel).
ExtRational ext_eval(const LnfExpr &expr,
                     const std::vector<ExtRational> &values);

// Comparison against zero under the constraint's comparator.
bool ext_satisfied(const LnfConstraint &c,
                   const std::vector<ExtRational> &values);

// ---- relaxed execution ----

// One relaxed step on a general task: precondition must hold in s; deletes
// are ignored; a numeric effect is applied only when its outcome is defined
// and strictly exceeds the current value. nullopt = precondition false.
std::optional<State> relaxed_apply(const NumericTask &task, const State &s,
                                   const Action &a);

// Same semantics on a normalized task (no undefinedness possible).
std::optional<State> relaxed_apply_lnf(const LnfAction &a, const State &s);

// ---- deciders ----

class MalformedInput : public std::runtime_error {
public:
    explicit MalformedInput(const std::string &msg)
        : std::runtime_error(msg) {}
};

struct RelaxedFixpoint {
    bool solvable = false;
    int iterations = 0;  // executed fixpoint rounds
    PropSet reached_props;
    std::vector<ExtRational> reached_values;
};

// Decider for the restricted language: comparisons are "v >= c" / "v > c"
// and numeric effects increase/decrease by positive constants. Any other
// shape raises MalformedInput. Polynomial: each variable jumps to +infinity
// at most once.
RelaxedFixpoint decide_restricted(const NumericTask &task, const State &s);

// Decider for acyclic normalized tasks. Increases that can fire push a
// variable to +infinity; assigns raise it to the best achievable assigned
// value. Requires verify_lnf to pass and the assign dependencies to be
// acyclic (throws std::invalid_argument otherwise).
RelaxedFixpoint decide_strong(const LnfTask &task, const State &s);

struct MonotonicityReport {
    // Syntactic sufficient conditions: with positive coefficients
    // everywhere, growing a variable can only help.
    bool constraints_monotone = true;
    bool increase_rhs_monotone = true;
    bool assign_rhs_monotone = true;
    bool strongly_monotonic = true;
    std::vector<std::string> violations;
};

MonotonicityReport check_monotonic_structure(const LnfTask &task);

}  // namespace nplan

#endif
