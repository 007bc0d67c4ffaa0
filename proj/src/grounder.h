#ifndef NPLAN_GROUNDER_H
#define NPLAN_GROUNDER_H

#include "model.h"
#include "parser.h"

#include <stdexcept>
#include <string>

namespace nplan {

// Semantic errors found while instantiating (unknown types, arity
// mismatches, conflicting numeric effects, ...).
class GroundingError : public std::runtime_error {
public:
    explicit GroundingError(const std::string &msg)
        : std::runtime_error(msg) {}
};

/*
  Instantiates all type-consistent ground actions, then simplifies:
    - ground atoms of static predicates (mentioned in no effect) are replaced
      by their truth value in :init; actions with a false static
      precondition atom are dropped,
    - precondition/goal comparisons whose fluents are all static are
      pre-evaluated (an undefined value, i.e. a zero divisor, counts as
      false),
    - actions whose propositional preconditions are unreachable in the
      delete-and-numbers-ignoring fixpoint from :init are dropped.
  Propositions and variables get dense ids; ground action names follow the
  plan syntax "(name arg1 arg2)" and can be mapped back to action ids.
*/
NumericTask ground_task(const ParsedTask &parsed);

}  // namespace nplan

#endif
