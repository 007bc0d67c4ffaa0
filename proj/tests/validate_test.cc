#include "validate.h"

#include "doctest.h"
#include "rpg.h"

#include <string>
#include <vector>

using namespace nplan;

namespace {

Expr num(long v) { return Expr::constant(Rational(v)); }
Expr evar(int id) { return Expr::variable(id); }

// Two-step delivery task: load (needs fuel >= 3, burns 3), then drive
// (needs the load, burns 6/d fuel, finishes). A third action zeroes d so a
// later drive divides by zero.
NumericTask delivery_task() {
    NumericTask t;
    t.props = {{0, "(loaded)"}, {1, "(done)"}};
    t.vars = {{0, "(fuel)"}, {1, "(d)"}};
    t.init.props = PropSet(2);
    t.init.values = {Rational(8), Rational(2)};
    t.goal.props = {1};

    Action load;
    load.id = 0;
    load.name = "(load)";
    load.pre.constraints = {{evar(0), Comparator::ge, num(3)}};
    load.eff.adds = {0};
    load.eff.num_effects = {{0, AssignOp::decrease, num(3)}};

    Action drive;
    drive.id = 1;
    drive.name = "(drive)";
    drive.pre.props = {0};
    drive.eff.adds = {1};
    drive.eff.num_effects = {
        {0, AssignOp::decrease, Expr::binary(Expr::Kind::div, num(6), evar(1))}};

    Action zero;
    zero.id = 2;
    zero.name = "(zero)";
    zero.eff.num_effects = {{1, AssignOp::assign, num(0)}};

    t.actions = {load, drive, zero};
    return t;
}

LnfExpr lexpr(std::vector<std::pair<int, Rational>> terms,
              Rational constant = Rational(0)) {
    LnfExpr e;
    e.terms = std::move(terms);
    e.constant = constant;
    return e;
}

}  // namespace

TEST_CASE("a correct plan yields the final state and metric value") {
    NumericTask t = delivery_task();
    t.metric = Metric{MetricDirection::minimize, evar(0)};
    Verdict v = validate_plan(t, {0, 1});
    CHECK(v.valid);
    CHECK(v.failed_step == -1);
    CHECK(v.reason.empty());
    CHECK(v.final_state.props.test(0));
    CHECK(v.final_state.props.test(1));
    CHECK(v.final_state.values[0] == Rational(2));  // 8 - 3 - 6/2
    REQUIRE(v.metric.has_value());
    CHECK(*v.metric == Rational(2));

    // Without a metric declaration none is reported.
    NumericTask plain = delivery_task();
    CHECK_FALSE(validate_plan(plain, {0, 1}).metric.has_value());
}

TEST_CASE("a failing precondition names the offending step") {
    NumericTask t = delivery_task();
    Verdict v = validate_plan(t, {1});  // drive before loading
    CHECK_FALSE(v.valid);
    CHECK(v.failed_step == 0);
    CHECK(v.reason == "step 0 ((drive)): precondition not satisfied");
    CHECK(v.final_state.values[0] == Rational(8));  // untouched
}

TEST_CASE("an unknown action id is rejected") {
    NumericTask t = delivery_task();
    Verdict v = validate_plan(t, {0, 7});
    CHECK_FALSE(v.valid);
    CHECK(v.failed_step == 1);
    CHECK(v.reason == "step 1: no action with id 7");
}

TEST_CASE("a runtime division by zero fails the step after the "
          "precondition check") {
    NumericTask t = delivery_task();
    Verdict v = validate_plan(t, {2, 0, 1});
    CHECK_FALSE(v.valid);
    CHECK(v.failed_step == 2);
    CHECK(v.reason ==
          "step 2 ((drive)): effect value undefined (division by zero)");
    // The failing state is the one before the bad step: loaded, d == 0.
    CHECK(v.final_state.props.test(0));
    CHECK(v.final_state.values[1] == Rational(0));
}

TEST_CASE("a plan that stops short fails the goal check") {
    NumericTask t = delivery_task();
    Verdict v = validate_plan(t, {0});
    CHECK_FALSE(v.valid);
    CHECK(v.failed_step == 1);  // one past the last step
    CHECK(v.reason == "goal not satisfied in the final state");

    t.goal.props.clear();
    t.goal.constraints = {{evar(0), Comparator::ge, num(100)}};
    v = validate_plan(t, {0});
    CHECK_FALSE(v.valid);
    CHECK(v.reason == "goal not satisfied in the final state");
}

TEST_CASE("an undefined metric invalidates an otherwise good plan") {
    NumericTask t = delivery_task();
    t.goal.props = {0};  // only the load is required
    t.metric = Metric{MetricDirection::minimize,
                      Expr::binary(Expr::Kind::div, num(1), evar(1))};
    Verdict v = validate_plan(t, {2, 0});  // d == 0 in the final state
    CHECK_FALSE(v.valid);
    CHECK(v.failed_step == 2);
    CHECK(v.reason == "metric undefined in the final state");
}

TEST_CASE("normalized plans validate with the original-variable metric") {
    LnfTask t;
    t.vars = {{0, "(u)", -1}};
    t.num_original_vars = 1;
    t.counterpart = {-1};
    t.init.props = PropSet(0);
    t.init.values = {Rational(0)};
    t.goal.constraints = {
        {lexpr({{0, Rational(1)}}, Rational(-4)), Comparator::ge}};
    t.metric = Metric{MetricDirection::minimize, evar(0)};

    LnfAction bump;
    bump.id = 0;
    bump.name = "(bump)";
    bump.num_effects = {{0, AssignOp::increase, lexpr({}, Rational(2))}};
    t.actions = {bump};

    Verdict v = validate_plan_lnf(t, {0, 0});
    CHECK(v.valid);
    CHECK(v.final_state.values[0] == Rational(4));
    REQUIRE(v.metric.has_value());
    CHECK(*v.metric == Rational(4));

    v = validate_plan_lnf(t, {0});
    CHECK_FALSE(v.valid);
    CHECK(v.reason == "goal not satisfied in the final state");

    t.actions[0].pre.constraints = {
        {lexpr({{0, Rational(1)}}, Rational(-10)), Comparator::ge}};
    v = validate_plan_lnf(t, {0});
    CHECK_FALSE(v.valid);
    CHECK(v.failed_step == 0);
    CHECK(v.reason == "step 0 ((bump)): precondition not satisfied");
}

TEST_CASE("relaxed validation ignores deletes and harmful effects") {
    LnfTask t;
    t.props = {{0, "(a)"}, {1, "(b)"}, {2, "(g)"}};
    t.vars = {{0, "(u)", -1}};
    t.num_original_vars = 1;
    t.counterpart = {-1};
    t.init.props = PropSet(3);
    t.init.props.set(0);
    t.init.values = {Rational(0)};
    t.goal.props = {2};
    t.goal.constraints = {{lexpr({{0, Rational(1)}}), Comparator::ge}};

    LnfAction swap;  // trades a for b and drains u by 5
    swap.id = 0;
    swap.name = "(swap)";
    swap.pre.props = {0};
    swap.adds = {1};
    swap.dels = {0};
    swap.num_effects = {{0, AssignOp::increase, lexpr({}, Rational(-5))}};

    LnfAction win;  // needs both a and b
    win.id = 1;
    win.name = "(win)";
    win.pre.props = {0, 1};
    win.adds = {2};
    t.actions = {swap, win};

    Verdict real = validate_plan_lnf(t, {0, 1});
    CHECK_FALSE(real.valid);
    CHECK(real.failed_step == 1);  // a was deleted

    Verdict relaxed = validate_relaxed_plan(t, {0, 1});
    CHECK(relaxed.valid);
    CHECK(relaxed.final_state.values[0] == Rational(0));  // decrease skipped
    CHECK_FALSE(relaxed.metric.has_value());
}

TEST_CASE("extracted relaxed plans replay under relaxed validation") {
    // Counter to 3: the flattened per-layer selection is a relaxed plan.
    LnfTask t;
    t.vars = {{0, "(v)", -1}};
    t.num_original_vars = 1;
    t.counterpart = {-1};
    t.init.props = PropSet(0);
    t.init.values = {Rational(0)};
    t.goal.constraints = {
        {lexpr({{0, Rational(1)}}, Rational(-3)), Comparator::ge}};
    LnfAction tick;
    tick.id = 0;
    tick.name = "(tick)";
    tick.num_effects = {{0, AssignOp::increase, lexpr({}, Rational(1))}};
    t.actions = {tick};

    RpgBuilder builder(t);
    Rpg rpg = builder.build(t.init);
    REQUIRE(rpg.verdict == Rpg::Verdict::reached);
    ExtractResult ex = builder.extract(rpg, t.init);
    REQUIRE(ex.valid);
    Plan flat;
    for (const auto &layer : ex.selected)
        flat.insert(flat.end(), layer.begin(), layer.end());
    CHECK((int)flat.size() == ex.plan_length);
    CHECK(validate_relaxed_plan(t, flat).valid);
}
