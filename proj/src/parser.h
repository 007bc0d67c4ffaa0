#ifndef NPLAN_PARSER_H
#define NPLAN_PARSER_H

#include "model.h"
#include "rational.h"

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nplan {

/*
  Frontend for the accepted input subset: conjunctive typed STRIPS plus
  numeric fluents. Preconditions/goals are conjunctions of atoms and
  comparisons; effects are add/delete atoms and increase/decrease/assign
  updates. Everything is case-insensitive; ';' starts a comment.
*/

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string &msg, int line, int col)
        : std::runtime_error("line " + std::to_string(line) + ", column " +
                             std::to_string(col) + ": " + msg),
          line(line), col(col) {}

    int line;
    int col;
};

// Construct outside the accepted subset (quantifiers, disjunctions,
// conditional effects, object fluents, durative actions, ...).
class UnsupportedFeature : public ParseError {
public:
    UnsupportedFeature(const std::string &msg, int line, int col)
        : ParseError(msg, line, col) {}
};

// A fluent is mentioned by the task but has no (= (f ...) value) entry in
// the initial state. Raised during grounding.
class UninitializedFluent : public std::runtime_error {
public:
    explicit UninitializedFluent(const std::string &fluent)
        : std::runtime_error("fluent " + fluent +
                             " has no initial value in :init"),
          fluent(fluent) {}

    std::string fluent;
};

struct TypedName {
    std::string name;
    std::string type;  // "object" when untyped
};

struct AtomTemplate {
    std::string predicate;
    std::vector<std::string> args;  // ?params or object names
};

struct FluentTemplate {
    std::string function;
    std::vector<std::string> args;
};

struct ExprTemplate {
    enum class Kind { number, fluent, add, sub, mul, div };

    Kind kind;
    Rational number;                     // Kind::number
    FluentTemplate fluent;               // Kind::fluent
    std::vector<ExprTemplate> children;  // binary ops: exactly two
};

struct ConstraintTemplate {
    Comparator comp;
    ExprTemplate lhs;
    ExprTemplate rhs;
};

struct ConditionTemplate {
    std::vector<AtomTemplate> atoms;
    std::vector<ConstraintTemplate> constraints;
};

struct NumEffectTemplate {
    AssignOp op;
    FluentTemplate fluent;
    ExprTemplate rhs;
};

struct EffectTemplate {
    std::vector<AtomTemplate> adds;
    std::vector<AtomTemplate> dels;
    std::vector<NumEffectTemplate> num_effects;
};

struct ActionSchema {
    std::string name;
    std::vector<TypedName> params;
    ConditionTemplate pre;
    EffectTemplate eff;
};

struct PredicateDef {
    std::string name;
    std::vector<TypedName> params;
};

struct FunctionDef {
    std::string name;
    std::vector<TypedName> params;
};

struct Domain {
    std::string name;
    std::vector<std::pair<std::string, std::string>> types;  // type, parent
    std::vector<TypedName> constants;
    std::vector<PredicateDef> predicates;
    std::vector<FunctionDef> functions;
    std::vector<ActionSchema> actions;
};

struct GroundAtom {
    std::string predicate;
    std::vector<std::string> args;
};

struct FluentInit {
    std::string function;
    std::vector<std::string> args;
    Rational value;
};

struct Problem {
    std::string name;
    std::string domain_name;
    std::vector<TypedName> objects;
    std::vector<GroundAtom> init_atoms;
    std::vector<FluentInit> init_fluents;
    ConditionTemplate goal;
    std::optional<std::pair<MetricDirection, ExprTemplate>> metric;
};

struct ParsedTask {
    Domain domain;
    Problem problem;
};

ParsedTask parse_task(const std::string &domain_text,
                      const std::string &problem_text);

}  // namespace nplan

#endif
