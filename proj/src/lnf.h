#ifndef NPLAN_LNF_H
#define NPLAN_LNF_H

#include "model.h"
#include "rational.h"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nplan {

/*
  Linear normal form: every comparison is "weighted sum comp 0" with
  comp in {>=, >}, every stored coefficient is positive, and numeric effects
  are assign/increase only. Negative coefficients are eliminated by
  introducing mirrored inverse variables (-v), whose effects negate the
  originals'. Assign effects are kept as assigns: compiling them into
  increases would change how the relaxation treats them.
*/

struct LnfExpr {
    // Sorted by variable id, no zero coefficients, no duplicates.
    std::vector<std::pair<int, Rational>> terms;
    Rational constant;

    Rational eval(const std::vector<Rational> &values) const {
        Rational sum = constant;
        for (const auto &[var, coeff] : terms)
            sum += coeff * values[var];
        return sum;
    }

    bool is_constant() const { return terms.empty(); }
    void add_term(int var, const Rational &coeff);
    LnfExpr negated() const;
    std::string to_string(const std::vector<NumVar> &vars) const;
};

struct LnfConstraint {
    LnfExpr expr;
    Comparator comp;  // the pipeline only produces ge / gt (vs zero)

    bool satisfied(const std::vector<Rational> &values) const {
        Rational v = expr.eval(values);
        return comp == Comparator::gt ? v.sign() > 0 : v.sign() >= 0;
    }
};

struct LnfEffect {
    int var;
    AssignOp op;  // the pipeline only produces assign / increase
    LnfExpr rhs;
};

struct LnfCondition {
    std::vector<int> props;  // sorted
    std::vector<LnfConstraint> constraints;
};

struct LnfAction {
    int id;
    std::string name;
    LnfCondition pre;
    std::vector<int> adds, dels;  // sorted
    std::vector<LnfEffect> num_effects;  // at most one per variable
    Rational cost;
};

struct LnfTask {
    std::vector<Proposition> props;
    std::vector<NumVar> vars;  // originals first, then introduced inverses
    int num_original_vars = 0;
    std::vector<LnfAction> actions;
    State init;
    LnfCondition goal;
    std::optional<Metric> metric;  // over original variable ids

    // Symmetric counterpart map: counterpart[v] is the variable holding -v,
    // or -1 if v was never inverted.
    std::vector<int> counterpart;
};

class NotLinearError : public std::runtime_error {
public:
    explicit NotLinearError(const std::string &msg)
        : std::runtime_error(msg) {}
};

// Substitutes task constants (variables no surviving action affects) by
// their initial value and folds constant subexpressions. A division by a
// folded zero makes the enclosing precondition constraint false (action
// dropped) resp. the enclosing effect inapplicable (action dropped); in the
// goal the constraint is replaced by a constant-false one. Unused variables
// are re-indexed densely.
NumericTask fold_constants(const NumericTask &task);

// Rewrites all comparisons to ">= 0 / > 0" form (splitting "="), turns
// decrease effects into increases of the negated expression, and linearizes
// every expression. Coefficients may still be negative here. Throws
// NotLinearError on nonlinear input (variable divisor, product of two
// variable expressions).
LnfTask to_pre_lnf(const NumericTask &task);

// Eliminates negative coefficients by introducing inverse variables. Scans
// deterministically: the smallest-id variable with a negative occurrence in
// any constraint first, then in any effect right-hand side. At most one
// inverse per variable, reused across occurrences.
void invert_negatives(LnfTask &task);

// fold_constants + to_pre_lnf + invert_negatives.
LnfTask normalize(const NumericTask &task);

// Linear view of an arbitrary expression: nullopt when it is not linear
// (variable divisor, product of two variable expressions) or divides by a
// constant zero. Coefficients may be negative.
std::optional<LnfExpr> linearize_expr(const Expr &expr);

struct AssignDepGraph {
    // Edge (i -> j): some assign effect on j mentions i in its rhs.
    std::vector<std::vector<int>> successors;
    bool acyclic = true;
    // Topological order of all variables (valid iff acyclic): every edge
    // (i -> j) has j before i, so assignment targets come before sources.
    std::vector<int> topo_targets_first;
    // Variables on assign cycles or depending on one (empty iff acyclic).
    std::vector<int> tainted;
};

AssignDepGraph check_acyclic(const LnfTask &task);

struct RelevanceSet {
    std::vector<bool> relevant;  // indexed by variable id
    std::vector<int> ids;        // sorted list of relevant variables
};

// Solution relevance: occurs in some precondition/goal comparison, or in
// the right-hand side of an effect on a relevant variable (least fixpoint).
RelevanceSet compute_relevance(const LnfTask &task);

struct LnfReport {
    bool ok = true;
    std::vector<std::string> violations;
};

// Structural check of the normal-form invariants (positive coefficients,
// comparators, effect ops, term ordering, counterpart init consistency).
LnfReport verify_lnf(const LnfTask &task);

// ---- execution semantics on normalized tasks ----
// Linear expressions cannot divide, so applicability is the only gate.

bool holds_lnf(const LnfCondition &cond, const State &s);
std::optional<State> apply_lnf_action(const LnfAction &a, const State &s);
bool is_goal_lnf(const LnfTask &task, const State &s);

}  // namespace nplan

#endif
