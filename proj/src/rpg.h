#ifndef NPLAN_RPG_H
#define NPLAN_RPG_H

#include "lnf.h"
#include "model.h"
#include "relaxation.h"

#include <map>
#include <vector>

namespace nplan {

/*
  Relaxed planning graph over normalized tasks. Layers track, per variable,
  the maximum value reachable by t relaxed steps; propositions and actions
  record the first layer they appear in. Termination of the build is
  decided against mneed: once a variable's max exceeds what any condition
  or relevant effect could still profit from, further growth is progress
  in name only.
*/

// Largest value of values[var] for which "expr comp bound" can still fail,
// i.e. the threshold the variable must exceed (given the other variables'
// values): (bound - constant - sum of other terms) / coeff(var).
// var must occur in expr.
Rational supv(const std::vector<Rational> &values, const LnfExpr &expr,
              int var, const Rational &bound);

// Same with an extended bound: a +infinity bound yields +infinity.
ExtRational supv_ext(const std::vector<Rational> &values, const LnfExpr &expr,
                     int var, const ExtRational &bound);

using MneedVector = std::vector<ExtRational>;

// Max-need per variable: -infinity iff the variable is not
// solution-relevant; otherwise the largest threshold it is asked to exceed
// by any comparison, increase right-hand side, or (recursively) assign
// right-hand side feeding a relevant variable. Throws std::invalid_argument
// when the assign dependencies are cyclic.
MneedVector compute_mneed(const LnfTask &task, const State &s);

struct Layer {
    std::vector<Rational> max_values;
};

struct Rpg {
    enum class Verdict { reached, failed, layer_cap };

    Verdict verdict = Verdict::failed;
    int finallayer = -1;  // valid iff verdict == reached
    std::vector<Layer> layers;
    std::vector<int> prop_level;    // first layer; -1 = never
    std::vector<int> action_level;  // first layer applicable; -1 = never
    std::vector<int> goal_constraint_level;
    std::vector<std::vector<int>> pre_constraint_level;  // [action][constraint]
};

struct GoalBound {
    Rational bound;
    bool strict;
};

// Per-layer numeric subgoals; merging keeps the stronger bound (greater
// value, or strict over non-strict at equal value).
class GoalAgenda {
public:
    void merge(int var, const Rational &bound, bool strict);
    const std::map<int, GoalBound> &bounds() const { return entries; }

private:
    std::map<int, GoalBound> entries;
};

struct ExtractResult {
    bool valid = false;               // false iff the graph did not reach
    std::vector<std::vector<int>> selected;  // per layer 1..finallayer
    int plan_length = 0;              // sum of per-layer selection counts
    Rational plan_cost;               // sum of selected actions' costs
    std::vector<int> helpful;         // applicable actions useful at layer 1
};

class RpgBuilder {
public:
    // Cyclic assign dependencies void the termination guarantee but do not
    // prevent building: affected variables fall back to an infinite mneed
    // and the layer cap bounds the construction.
    explicit RpgBuilder(const LnfTask &task, int max_layers = 10000);

    const RelevanceSet &relevance() const { return relevant; }
    const AssignDepGraph &dependencies() const { return deps; }

    // mneed with the cyclic fallback applied (infinite on tainted
    // relevant variables).
    MneedVector mneed(const State &s) const;

    Rpg build(const State &s) const;
    ExtractResult extract(const Rpg &rpg, const State &s) const;

private:
    const LnfTask &task;
    int max_layers;
    RelevanceSet relevant;
    AssignDepGraph deps;
};

// One-shot convenience wrappers.
Rpg build_graph(const LnfTask &task, const State &s, int max_layers = 10000);
ExtractResult extract_plan(const LnfTask &task, const Rpg &rpg,
                           const State &s);

}  // namespace nplan

#endif
