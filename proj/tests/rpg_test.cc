#include "rpg.h"

#include "doctest.h"
#include "lnf.h"
#include "oracles.h"

#include <stdexcept>
#include <string>
#include <vector>

using namespace nplan;

namespace {

LnfExpr lexpr(std::vector<std::pair<int, Rational>> terms,
              Rational constant = Rational(0)) {
    LnfExpr e;
    e.terms = std::move(terms);
    e.constant = constant;
    return e;
}

LnfTask lnf_skeleton(int num_vars) {
    LnfTask t;
    for (int v = 0; v < num_vars; ++v)
        t.vars.push_back({v, "v" + std::to_string(v), -1});
    t.num_original_vars = num_vars;
    t.counterpart.assign(num_vars, -1);
    t.init.props = PropSet(0);
    t.init.values.assign(num_vars, Rational(0));
    return t;
}

LnfAction effect_action(int id, const char *name, int var, AssignOp op,
                        LnfExpr rhs) {
    LnfAction a;
    a.id = id;
    a.name = name;
    a.num_effects = {{var, op, std::move(rhs)}};
    return a;
}

// v0 starts at 0, the goal wants v0 >= bound, one action adds +1.
LnfTask count_to(int bound) {
    LnfTask t = lnf_skeleton(1);
    t.goal.constraints = {
        {lexpr({{0, Rational(1)}}, Rational(-bound)), Comparator::ge}};
    t.actions.push_back(effect_action(0, "gain", 0, AssignOp::increase,
                                      lexpr({}, Rational(1))));
    return t;
}

}  // namespace

TEST_CASE("supv computes the exact threshold a variable must pass") {
    std::vector<Rational> values = {Rational(1), Rational(1)};
    LnfExpr e = lexpr({{0, Rational(2)}, {1, Rational(3)}}, Rational(1));
    // 2*v0 + 3*v1 + 1 >= 10 given v1 = 1: v0 must reach (10 - 1 - 3)/2.
    CHECK(supv(values, e, 0, Rational(10)) == Rational(3));
    CHECK(supv(values, e, 1, Rational(10)) == Rational(7, 3));
    CHECK(supv(values, lexpr({{0, Rational(1, 2)}}, Rational(-2)), 0,
               Rational(0)) == Rational(4));
    CHECK_THROWS_AS(supv(values, e, 5, Rational(0)), std::invalid_argument);

    CHECK(supv_ext(values, e, 0, ExtRational::infinity()) ==
          ExtRational::infinity());
    CHECK(supv_ext(values, e, 0, ExtRational(Rational(10))) ==
          ExtRational(Rational(3)));
}

TEST_CASE("goal agendas keep the strongest bound per variable") {
    GoalAgenda g;
    g.merge(0, Rational(3), false);
    g.merge(0, Rational(3), true);  // strict wins at equal bound
    CHECK(g.bounds().at(0).strict);
    g.merge(0, Rational(2), true);  // weaker, ignored
    CHECK(g.bounds().at(0).bound == Rational(3));
    CHECK(g.bounds().at(0).strict);
    g.merge(0, Rational(4), false);  // higher bound replaces
    CHECK(g.bounds().at(0).bound == Rational(4));
    CHECK_FALSE(g.bounds().at(0).strict);
    g.merge(1, Rational(-1), false);
    CHECK(g.bounds().size() == 2);
}

TEST_CASE("mneed propagates thresholds through effects") {
    LnfTask t = lnf_skeleton(4);
    t.goal.constraints = {
        {lexpr({{0, Rational(1)}}, Rational(-5)), Comparator::ge}};  // v0 >= 5
    // v0 := v1 - 2: to push v0 past 5, v1 must pass 7.
    t.actions.push_back(effect_action(0, "asg", 0, AssignOp::assign,
                                      lexpr({{1, Rational(1)}},
                                            Rational(-2))));
    // v0 += v2 - 3: the increase pays off once v2 passes 3.
    t.actions.push_back(effect_action(1, "inc", 0, AssignOp::increase,
                                      lexpr({{2, Rational(1)}},
                                            Rational(-3))));
    // v3 is mentioned nowhere relevant.

    MneedVector need = compute_mneed(t, t.init);
    REQUIRE(need.size() == 4);
    CHECK(need[0] == ExtRational(Rational(5)));
    CHECK(need[1] == ExtRational(Rational(7)));
    CHECK(need[2] == ExtRational(Rational(3)));
    CHECK(need[3] == ExtRational::neg_infinity());

    RpgBuilder builder(t);
    CHECK(builder.mneed(t.init) == need);
}

TEST_CASE("mneed refuses cyclic assigns; the builder falls back") {
    LnfTask t = lnf_skeleton(1);
    t.goal.constraints = {
        {lexpr({{0, Rational(1)}}, Rational(-3)), Comparator::ge}};
    // v0 := v0 + 1 makes v0's need depend on itself.
    t.actions.push_back(effect_action(0, "step", 0, AssignOp::assign,
                                      lexpr({{0, Rational(1)}}, Rational(1))));

    CHECK_THROWS_AS(compute_mneed(t, t.init), std::invalid_argument);

    RpgBuilder builder(t);
    CHECK_FALSE(builder.dependencies().acyclic);
    MneedVector need = builder.mneed(t.init);
    CHECK(need[0] == ExtRational::infinity());

    // The graph still builds: the assign walks v0 up to the goal.
    Rpg rpg = builder.build(t.init);
    CHECK(rpg.verdict == Rpg::Verdict::reached);
    CHECK(rpg.finallayer == 3);
}

TEST_CASE("counting to three: the canonical full trace") {
    LnfTask t = count_to(3);
    RpgBuilder builder(t);
    Rpg rpg = builder.build(t.init);

    REQUIRE(rpg.verdict == Rpg::Verdict::reached);
    CHECK(rpg.finallayer == 3);
    REQUIRE(rpg.layers.size() == 4);
    for (int layer = 0; layer <= 3; ++layer)
        CHECK(rpg.layers[layer].max_values[0] == Rational(layer));
    CHECK(rpg.action_level[0] == 0);
    CHECK(rpg.goal_constraint_level[0] == 3);

    ExtractResult ex = builder.extract(rpg, t.init);
    REQUIRE(ex.valid);
    CHECK(ex.plan_length == 3);
    CHECK(ex.plan_cost == Rational(0));
    for (int layer = 1; layer <= 3; ++layer)
        CHECK(ex.selected[layer] == std::vector<int>{0});
    CHECK(ex.helpful == std::vector<int>{0});
}

TEST_CASE("counting to n needs exactly n layers") {
    for (int n : {1, 5, 50}) {
        LnfTask t = count_to(n);
        Rpg rpg = build_graph(t, t.init);
        REQUIRE(rpg.verdict == Rpg::Verdict::reached);
        CHECK(rpg.finallayer == n);
        CHECK(extract_plan(t, rpg, t.init).plan_length == n);
    }
}

TEST_CASE("a goal satisfied in the state needs zero layers") {
    LnfTask t = count_to(0);
    RpgBuilder builder(t);
    Rpg rpg = builder.build(t.init);
    REQUIRE(rpg.verdict == Rpg::Verdict::reached);
    CHECK(rpg.finallayer == 0);
    ExtractResult ex = builder.extract(rpg, t.init);
    CHECK(ex.valid);
    CHECK(ex.plan_length == 0);
    CHECK(ex.helpful.empty());
}

TEST_CASE("stagnation against mneed fails the build") {
    LnfTask t = lnf_skeleton(1);
    t.goal.constraints = {
        {lexpr({{0, Rational(1)}}, Rational(-3)), Comparator::ge}};
    // The only effect shrinks (never fires in the relaxation).
    t.actions.push_back(effect_action(0, "drain", 0, AssignOp::increase,
                                      lexpr({}, Rational(-1))));
    Rpg rpg = build_graph(t, t.init);
    CHECK(rpg.verdict == Rpg::Verdict::failed);
    CHECK(rpg.finallayer == -1);
    CHECK(rpg.layers.size() == 1);
    CHECK(extract_plan(t, rpg, t.init).valid == false);
}

TEST_CASE("the layer cap cuts off inconclusive builds") {
    LnfTask t = count_to(3);
    Rpg rpg = build_graph(t, t.init, /*max_layers=*/2);
    CHECK(rpg.verdict == Rpg::Verdict::layer_cap);
    CHECK(rpg.layers.size() == 3);  // layers 0..2 were built
}

TEST_CASE("assigns cap growth where compiled increases would not") {
    // u starts at -1; (assign u 10) reaches 10 and nothing more.
    NumericTask t;
    t.vars = {{0, "u", -1}};
    t.init.props = PropSet(0);
    t.init.values = {Rational(-1)};
    Action set10;
    set10.id = 0;
    set10.name = "set10";
    set10.eff.num_effects = {
        {0, AssignOp::assign, Expr::constant(Rational(10))}};
    t.actions.push_back(set10);
    t.goal.constraints = {
        {Expr::variable(0), Comparator::ge, Expr::constant(Rational(10))}};

    LnfTask reach10 = normalize(t);
    Rpg rpg = build_graph(reach10, reach10.init);
    REQUIRE(rpg.verdict == Rpg::Verdict::reached);
    CHECK(rpg.finallayer == 1);
    CHECK(rpg.layers[1].max_values[0] == Rational(10));
    CHECK(extract_plan(reach10, rpg, reach10.init).plan_length == 1);

    // Asking for 11 is hopeless, and the graph detects that.
    t.goal.constraints = {
        {Expr::variable(0), Comparator::ge, Expr::constant(Rational(11))}};
    LnfTask reach11 = normalize(t);
    CHECK(build_graph(reach11, reach11.init).verdict ==
          Rpg::Verdict::failed);

    // Compiling the assign into "u += 10 - u" (inverse variable frozen at
    // its maximum 1) would instead gain a constant 11 per layer and
    // claim 11 reachable — which is why assigns are kept as assigns.
    LnfTask compiled;
    compiled.vars = {{0, "u", -1}, {1, "-u", 0}};
    compiled.num_original_vars = 1;
    compiled.counterpart = {1, 0};
    compiled.init.props = PropSet(0);
    compiled.init.values = {Rational(-1), Rational(1)};
    compiled.actions.push_back(
        effect_action(0, "set10c", 0, AssignOp::increase,
                      lexpr({{1, Rational(1)}}, Rational(10))));
    compiled.actions[0].num_effects.push_back(
        {1, AssignOp::increase, lexpr({{0, Rational(1)}}, Rational(-10))});
    compiled.goal.constraints = {
        {lexpr({{0, Rational(1)}}, Rational(-11)), Comparator::ge}};

    Rpg wrong = build_graph(compiled, compiled.init);
    CHECK(wrong.verdict == Rpg::Verdict::reached);
    CHECK(wrong.layers[1].max_values[0] == Rational(10));
    CHECK(wrong.layers[2].max_values[0] == Rational(21));
}

TEST_CASE("diminishing increases: growth the relaxation overestimates") {
    // u += 1 - u/2 from u = 1 really produces 2 - 1/2^n: supremum 2,
    // never attained. The inverse variable -u freezes at -1 under the
    // relaxation, so the relaxed gain stays 1/2 per layer and the graph
    // reports u >= 2 reachable. The task leaves the restricted language
    // (the change amount depends on a variable), so the exactness
    // guarantee does not cover it — dominance still does.
    NumericTask t;
    t.vars = {{0, "u", -1}};
    t.init.props = PropSet(0);
    t.init.values = {Rational(1)};
    Action drip;
    drip.id = 0;
    drip.name = "drip";
    drip.eff.num_effects = {
        {0, AssignOp::increase,
         Expr::binary(Expr::Kind::sub, Expr::constant(Rational(1)),
                      Expr::binary(Expr::Kind::div, Expr::variable(0),
                                   Expr::constant(Rational(2))))}};
    t.actions.push_back(drip);
    t.goal.constraints = {
        {Expr::variable(0), Comparator::ge, Expr::constant(Rational(2))}};

    LnfTask lnf = normalize(t);
    REQUIRE(verify_lnf(lnf).ok);
    REQUIRE(lnf.vars.size() == 2);  // u and its inverse
    int mu = lnf.counterpart[0];
    REQUIRE(mu == 1);

    // Exact real trajectory for twenty steps.
    State real = lnf.init;
    for (int n = 1; n <= 20; ++n) {
        std::optional<State> next = apply_lnf_action(lnf.actions[0], real);
        REQUIRE(next.has_value());
        real = *next;
        Rational expected = Rational(2) - Rational(1, 1L << n);
        CHECK(real.values[0] == expected);
        CHECK(real.values[mu] == -expected);
        CHECK_FALSE(is_goal_lnf(lnf, real));
    }

    // Relaxed view: constant gain 1/2, goal "reached" after two layers.
    Rpg rpg = build_graph(lnf, lnf.init);
    REQUIRE(rpg.verdict == Rpg::Verdict::reached);
    CHECK(rpg.finallayer == 2);
    CHECK(rpg.layers[1].max_values[0] == Rational(3, 2));
    CHECK(rpg.layers[2].max_values[0] == Rational(2));
    CHECK(rpg.layers[1].max_values[mu] == Rational(-1));
    CHECK(extract_plan(lnf, rpg, lnf.init).plan_length == 2);

    CHECK(decide_strong(lnf, lnf.init).solvable);
    CHECK_THROWS_AS(decide_restricted(t, t.init), MalformedInput);
}

TEST_CASE("extraction prefers one sufficient assign over increases") {
    LnfTask t = lnf_skeleton(1);
    t.goal.constraints = {
        {lexpr({{0, Rational(1)}}, Rational(-10)), Comparator::ge}};
    t.actions.push_back(effect_action(0, "inc10", 0, AssignOp::increase,
                                      lexpr({}, Rational(10))));
    t.actions.push_back(effect_action(1, "set10", 0, AssignOp::assign,
                                      lexpr({}, Rational(10))));
    RpgBuilder builder(t);
    Rpg rpg = builder.build(t.init);
    REQUIRE(rpg.verdict == Rpg::Verdict::reached);
    REQUIRE(rpg.finallayer == 1);
    ExtractResult ex = builder.extract(rpg, t.init);
    // The assign is taken although the increase has the smaller id.
    CHECK(ex.selected[1] == std::vector<int>{1});
    CHECK(ex.plan_length == 1);
}

TEST_CASE("extraction stacks increases by descending contribution") {
    LnfTask t = lnf_skeleton(1);
    t.goal.constraints = {
        {lexpr({{0, Rational(1)}}, Rational(-10)), Comparator::ge}};
    t.actions.push_back(effect_action(0, "small", 0, AssignOp::increase,
                                      lexpr({}, Rational(3))));
    t.actions.push_back(effect_action(1, "large", 0, AssignOp::increase,
                                      lexpr({}, Rational(7))));
    RpgBuilder builder(t);
    Rpg rpg = builder.build(t.init);
    REQUIRE(rpg.verdict == Rpg::Verdict::reached);
    REQUIRE(rpg.finallayer == 1);  // 3 + 7 arrive in a single layer
    ExtractResult ex = builder.extract(rpg, t.init);
    // Both are needed: 7 first, then 3 covers the remainder exactly.
    CHECK(ex.selected[1] == std::vector<int>{0, 1});
    CHECK(ex.plan_length == 2);
    // Both are applicable now and useful: helpful set lists them.
    CHECK(ex.helpful == std::vector<int>{0, 1});
}

TEST_CASE("extraction reuses already selected achievers for propositions") {
    LnfTask t = lnf_skeleton(0);
    t.props = {{0, "p"}, {1, "q"}};
    t.init.props = PropSet(2);
    t.goal.props = {0, 1};

    LnfAction both;
    both.id = 0;
    both.name = "both";
    both.adds = {0, 1};
    LnfAction only_p;
    only_p.id = 1;
    only_p.name = "only_p";
    only_p.adds = {0};
    LnfAction only_q;
    only_q.id = 2;
    only_q.name = "only_q";
    only_q.adds = {1};
    t.actions = {both, only_p, only_q};

    RpgBuilder builder(t);
    Rpg rpg = builder.build(t.init);
    REQUIRE(rpg.verdict == Rpg::Verdict::reached);
    REQUIRE(rpg.finallayer == 1);
    ExtractResult ex = builder.extract(rpg, t.init);
    // p picks the lowest-id achiever ("both"); q then sticks with it.
    CHECK(ex.selected[1] == std::vector<int>{0});
    CHECK(ex.plan_length == 1);

    // With the combined action last, each goal picks its own achiever
    // first, but q still prefers a selected one when that exists.
    t.actions = {only_p, only_q, both};
    for (int i = 0; i < 3; ++i)
        t.actions[i].id = i;
    RpgBuilder builder2(t);
    Rpg rpg2 = builder2.build(t.init);
    ExtractResult ex2 = builder2.extract(rpg2, t.init);
    CHECK(ex2.selected[1] == std::vector<int>{0, 1});
    CHECK(ex2.plan_length == 2);
}

TEST_CASE("gated chains: levels, helpful actions, extraction order") {
    LnfTask t = lnf_skeleton(1);
    t.props = {{0, "p"}};
    t.init.props = PropSet(1);
    t.goal.props = {0};
    LnfAction finish;
    finish.id = 0;
    finish.name = "finish";
    finish.pre.constraints = {
        {lexpr({{0, Rational(1)}}, Rational(-1)), Comparator::ge}};  // v0 >= 1
    finish.adds = {0};
    t.actions.push_back(finish);
    t.actions.push_back(effect_action(1, "gain", 0, AssignOp::increase,
                                      lexpr({}, Rational(1))));

    RpgBuilder builder(t);
    Rpg rpg = builder.build(t.init);
    REQUIRE(rpg.verdict == Rpg::Verdict::reached);
    CHECK(rpg.finallayer == 2);
    CHECK(rpg.action_level[0] == 1);  // finish waits for the bound
    CHECK(rpg.action_level[1] == 0);
    CHECK(rpg.pre_constraint_level[0][0] == 1);
    CHECK(rpg.prop_level[0] == 2);

    ExtractResult ex = builder.extract(rpg, t.init);
    CHECK(ex.selected[2] == std::vector<int>{0});
    CHECK(ex.selected[1] == std::vector<int>{1});
    CHECK(ex.plan_length == 2);
    // Only "gain" is applicable now; "finish" is helpful only later.
    CHECK(ex.helpful == std::vector<int>{1});
}

TEST_CASE("relaxed plans extracted from random graphs replay under "
          "relaxed semantics") {
    std::mt19937 rng(20100);
    int replayed = 0;
    for (int round = 0; round < 120; ++round) {
        LnfTask task = oracle::random_lnf_task(rng);
        RpgBuilder builder(task);
        Rpg rpg = builder.build(task.init);
        if (rpg.verdict != Rpg::Verdict::reached)
            continue;
        ExtractResult ex = builder.extract(rpg, task.init);
        REQUIRE(ex.valid);

        // Execute layer by layer under relaxed semantics; every selected
        // action must be applicable and the goal must hold at the end.
        State s = task.init;
        int steps = 0;
        for (size_t layer = 1; layer < ex.selected.size(); ++layer)
            for (int a : ex.selected[layer]) {
                std::optional<State> next =
                    relaxed_apply_lnf(task.actions[a], s);
                REQUIRE(next.has_value());
                s = *next;
                ++steps;
            }
        CHECK(steps == ex.plan_length);
        CHECK(is_goal_lnf(task, s));
        ++replayed;
    }
    CHECK(replayed >= 40);
}
