#include "search.h"

#include <algorithm>
#include <cassert>
#include <deque>
#include <queue>

using namespace std;

namespace nplan {

VisitedTable::VisitedTable(vector<int> relevant_ids)
    : rv(std::move(relevant_ids)) {}

vector<Rational> VisitedTable::project(const State &s) const {
    vector<Rational> out;
    out.reserve(rv.size());
    for (int v : rv)
        out.push_back(s.values[v]);
    return out;
}

bool VisitedTable::is_dominated(const State &s, const Rational &g) const {
    auto it = buckets.find(s.props.hash());
    if (it == buckets.end())
        return false;
    vector<Rational> proj = project(s);
    for (const Entry &e : it->second) {
        if (e.g > g || !(e.props == s.props))
            continue;
        bool covers = true;
        for (size_t i = 0; i < proj.size(); ++i)
            if (e.values[i] < proj[i]) {
                covers = false;
                break;
            }
        if (covers)
            return true;
    }
    return false;
}

void VisitedTable::insert(const State &s, const Rational &g) {
    vector<Entry> &bucket = buckets[s.props.hash()];
    vector<Rational> proj = project(s);
    // Keep an antichain: drop stored entries the new state covers.
    auto covered = [&](const Entry &e) {
        if (g > e.g || !(e.props == s.props))
            return false;
        for (size_t i = 0; i < proj.size(); ++i)
            if (proj[i] < e.values[i])
                return false;
        return true;
    };
    size_t before = bucket.size();
    bucket.erase(remove_if(bucket.begin(), bucket.end(), covered),
                 bucket.end());
    count -= before - bucket.size();
    bucket.push_back({s.props, std::move(proj), g});
    ++count;
}

CostDerivation derive_costs(const LnfTask &task) {
    CostDerivation d;
    if (!task.metric) {
        d.reason = "no metric specified";
        return d;
    }
    optional<LnfExpr> metric = linearize_expr(task.metric->expr);
    if (!metric) {
        d.reason = "metric is not linear";
        return d;
    }
    if (task.metric->direction == MetricDirection::maximize) {
        LnfExpr negated = metric->negated();
        metric = std::move(negated);
    }
    vector<Rational> coeff(task.vars.size());
    vector<bool> in_metric(task.vars.size(), false);
    for (const auto &[v, c] : metric->terms) {
        coeff[v] = c;
        in_metric[v] = true;
    }

    d.costs.assign(task.actions.size(), Rational());
    for (size_t i = 0; i < task.actions.size(); ++i) {
        const LnfAction &a = task.actions[i];
        for (const LnfEffect &e : a.num_effects) {
            if (!in_metric[e.var])
                continue;
            const string &var = task.vars[e.var].name;
            if (e.op != AssignOp::increase) {
                d.reason = "assign effect on metric variable " + var +
                           " in action " + a.name;
                return d;
            }
            if (!e.rhs.is_constant()) {
                d.reason = "non-constant change of metric variable " + var +
                           " in action " + a.name;
                return d;
            }
            if (e.rhs.constant.sign() < 0) {
                d.reason = "metric variable " + var + " decreases in action " +
                           a.name;
                return d;
            }
            Rational contribution = coeff[e.var] * e.rhs.constant;
            if (contribution.sign() < 0) {
                d.reason = "action " + a.name + " improves the metric via " +
                           var + "; costs would be negative";
                return d;
            }
            d.costs[i] += contribution;
        }
    }
    d.ok = true;
    return d;
}

namespace {

struct Evaluation {
    bool reachable = false;
    bool layer_cap = false;
    int h_length = 0;
    Rational h_cost;
    vector<int> helpful;
};

class Evaluator {
public:
    Evaluator(const LnfTask &task, int max_layers)
        : task(task), builder(task, max_layers) {}

    Evaluation evaluate(const State &s) {
        ++evals;
        Rpg rpg = builder.build(s);
        Evaluation ev;
        if (rpg.verdict == Rpg::Verdict::layer_cap) {
            ev.layer_cap = true;
            any_layer_cap = true;
            return ev;
        }
        if (rpg.verdict != Rpg::Verdict::reached)
            return ev;
        ExtractResult ex = builder.extract(rpg, s);
        ev.reachable = true;
        ev.h_length = ex.plan_length;
        ev.h_cost = ex.plan_cost;
        ev.helpful = std::move(ex.helpful);
        return ev;
    }

    const LnfTask &task;
    RpgBuilder builder;
    long evals = 0;
    bool any_layer_cap = false;
};

struct Node {
    State s;
    int parent;
    int action;
};

Plan reconstruct(const vector<Node> &nodes, int idx) {
    Plan plan;
    while (nodes[idx].parent != -1) {
        plan.push_back(nodes[idx].action);
        idx = nodes[idx].parent;
    }
    reverse(plan.begin(), plan.end());
    return plan;
}

struct EhcOutcome {
    bool solved = false;
    bool cap = false;
    Plan plan;         // complete, including the prefix, when solved
    State anchor;      // best state reached when not solved
    Plan anchor_plan;
};

// Breadth-first bursts from the current anchor until some state improves
// on its heuristic value; dead ends (unreachable relaxed goal) are not
// expanded. States are evaluated when popped.
EhcOutcome run_ehc(Evaluator &eval, const SearchOptions &opts,
                   bool use_helpful, const State &start, const Plan &prefix,
                   const Evaluation *start_eval, SearchStats &stats) {
    const LnfTask &task = eval.task;
    EhcOutcome out;
    State current = start;
    Plan plan = prefix;
    Evaluation cur_ev = start_eval ? *start_eval : eval.evaluate(current);

    vector<int> all_ids(task.actions.size());
    for (size_t i = 0; i < all_ids.size(); ++i)
        all_ids[i] = i;

    while (true) {
        if (!cur_ev.reachable)
            break;
        if (is_goal_lnf(task, current)) {
            out.solved = true;
            out.plan = std::move(plan);
            return out;
        }

        vector<Node> nodes;
        nodes.push_back({current, -1, -1});
        VisitedTable visited(eval.builder.relevance().ids);
        visited.insert(current, Rational());
        deque<int> queue = {0};
        bool improved = false;
        while (!queue.empty()) {
            int idx = queue.front();
            queue.pop_front();
            Evaluation ev = idx == 0 ? cur_ev : eval.evaluate(nodes[idx].s);
            if (!ev.reachable)
                continue;
            if (idx != 0 && (ev.h_length < cur_ev.h_length ||
                             is_goal_lnf(task, nodes[idx].s))) {
                Plan suffix = reconstruct(nodes, idx);
                plan.insert(plan.end(), suffix.begin(), suffix.end());
                current = nodes[idx].s;
                cur_ev = std::move(ev);
                improved = true;
                break;
            }
            if (stats.expansions >= opts.max_expansions) {
                out.cap = true;
                out.anchor = std::move(current);
                out.anchor_plan = std::move(plan);
                return out;
            }
            ++stats.expansions;
            State base = nodes[idx].s;
            const vector<int> &order = use_helpful ? ev.helpful : all_ids;
            for (int a : order) {
                optional<State> succ = apply_lnf_action(task.actions[a], base);
                if (!succ)
                    continue;
                if (visited.is_dominated(*succ, Rational()))
                    continue;
                visited.insert(*succ, Rational());
                nodes.push_back({std::move(*succ), idx, a});
                queue.push_back(nodes.size() - 1);
            }
        }
        if (!improved)
            break;
    }
    out.anchor = std::move(current);
    out.anchor_plan = std::move(plan);
    return out;
}

SearchResult run_gbfs(Evaluator &eval, const SearchOptions &opts,
                      SearchStats &stats) {
    const LnfTask &task = eval.task;
    SearchResult res;

    struct OpenEntry {
        int h;
        uint64_t seq;
        int node;
    };
    auto worse = [](const OpenEntry &a, const OpenEntry &b) {
        if (a.h != b.h)
            return a.h > b.h;
        return a.seq > b.seq;
    };
    priority_queue<OpenEntry, vector<OpenEntry>, decltype(worse)> open(worse);
    uint64_t seq = 0;

    vector<Node> nodes;
    VisitedTable visited(eval.builder.relevance().ids);

    Evaluation ev0 = eval.evaluate(task.init);
    if (is_goal_lnf(task, task.init)) {
        res.solved = true;
        return res;
    }
    visited.insert(task.init, Rational());
    nodes.push_back({task.init, -1, -1});
    if (ev0.reachable)
        open.push({ev0.h_length, seq++, 0});

    while (!open.empty()) {
        if (stats.expansions >= opts.max_expansions) {
            stats.expansion_cap_hit = true;
            return res;
        }
        OpenEntry entry = open.top();
        open.pop();
        ++stats.expansions;
        State base = nodes[entry.node].s;
        for (size_t a = 0; a < task.actions.size(); ++a) {
            optional<State> succ = apply_lnf_action(task.actions[a], base);
            if (!succ)
                continue;
            if (visited.is_dominated(*succ, Rational()))
                continue;
            visited.insert(*succ, Rational());
            bool goal = is_goal_lnf(task, *succ);
            if (goal) {
                nodes.push_back({std::move(*succ), entry.node, (int)a});
                res.solved = true;
                res.plan = reconstruct(nodes, nodes.size() - 1);
                return res;
            }
            Evaluation ev = eval.evaluate(*succ);
            if (!ev.reachable)
                continue;
            nodes.push_back({std::move(*succ), entry.node, (int)a});
            open.push({ev.h_length, seq++, (int)nodes.size() - 1});
        }
    }
    res.proved_unsolvable = !eval.any_layer_cap && !stats.guarantees_void;
    return res;
}

SearchResult run_wastar(Evaluator &eval, const SearchOptions &opts,
                        SearchStats &stats) {
    const LnfTask &task = eval.task;
    SearchResult res;

    struct WNode {
        State s;
        int parent;
        int action;
        Rational g;
    };
    struct OpenEntry {
        Rational f;
        Rational h;
        uint64_t seq;
        int node;
    };
    auto worse = [](const OpenEntry &a, const OpenEntry &b) {
        if (a.f != b.f)
            return a.f > b.f;
        if (a.h != b.h)
            return a.h > b.h;
        return a.seq > b.seq;
    };
    priority_queue<OpenEntry, vector<OpenEntry>, decltype(worse)> open(worse);
    uint64_t seq = 0;

    vector<WNode> nodes;
    VisitedTable visited(eval.builder.relevance().ids);

    auto heuristic = [&](const Evaluation &ev) {
        return ev.h_cost + opts.h_mix * Rational((long)ev.h_length);
    };
    auto reconstruct_w = [&](int idx) {
        Plan plan;
        while (nodes[idx].parent != -1) {
            plan.push_back(nodes[idx].action);
            idx = nodes[idx].parent;
        }
        reverse(plan.begin(), plan.end());
        return plan;
    };

    Evaluation ev0 = eval.evaluate(task.init);
    stats.h_init = ev0.reachable ? ExtRational(Rational((long)ev0.h_length))
                                 : ExtRational::infinity();
    visited.insert(task.init, Rational());
    nodes.push_back({task.init, -1, -1, Rational()});
    if (ev0.reachable) {
        Rational h = heuristic(ev0);
        open.push({opts.weight_h * h, h, seq++, 0});
    }

    while (!open.empty()) {
        if (stats.expansions >= opts.max_expansions) {
            stats.expansion_cap_hit = true;
            return res;
        }
        OpenEntry entry = open.top();
        open.pop();
        if (is_goal_lnf(task, nodes[entry.node].s)) {
            res.solved = true;
            res.plan = reconstruct_w(entry.node);
            return res;
        }
        ++stats.expansions;
        State base = nodes[entry.node].s;
        Rational base_g = nodes[entry.node].g;
        for (size_t a = 0; a < task.actions.size(); ++a) {
            optional<State> succ = apply_lnf_action(task.actions[a], base);
            if (!succ)
                continue;
            Rational g = base_g + task.actions[a].cost;
            if (visited.is_dominated(*succ, g))
                continue;
            visited.insert(*succ, g);
            Evaluation ev = eval.evaluate(*succ);
            if (!ev.reachable)
                continue;
            Rational h = heuristic(ev);
            nodes.push_back({std::move(*succ), entry.node, (int)a, g});
            open.push({opts.weight_g * g + opts.weight_h * h, h, seq++,
                       (int)nodes.size() - 1});
        }
    }
    res.proved_unsolvable = !eval.any_layer_cap && !stats.guarantees_void;
    return res;
}

}  // namespace

SearchResult solve(const LnfTask &task, const SearchOptions &opts) {
    SearchStats stats;
    stats.guarantees_void = !check_acyclic(task).acyclic;

    if (opts.mode == SearchMode::quality) {
        CostDerivation d = derive_costs(task);
        if (d.ok) {
            LnfTask costed = task;
            for (size_t i = 0; i < costed.actions.size(); ++i)
                costed.actions[i].cost = d.costs[i];
            Evaluator eval(costed, opts.max_layers);
            SearchResult res = run_wastar(eval, opts, stats);
            stats.stage = "wastar";
            stats.evaluations = eval.evals;
            stats.layer_cap_hit = eval.any_layer_cap;
            res.stats = std::move(stats);
            if (res.proved_unsolvable)
                res.proved_unsolvable = !res.stats.layer_cap_hit;
            return res;
        }
        stats.quality_fallback = d.reason;
    }

    Evaluator eval(task, opts.max_layers);
    auto finish = [&](SearchResult res, const string &stage) {
        stats.stage = stage;
        stats.evaluations = eval.evals;
        stats.layer_cap_hit = eval.any_layer_cap;
        if (res.proved_unsolvable && eval.any_layer_cap)
            res.proved_unsolvable = false;
        res.stats = std::move(stats);
        return res;
    };

    Evaluation ev0 = eval.evaluate(task.init);
    stats.h_init = ev0.reachable ? ExtRational(Rational((long)ev0.h_length))
                                 : ExtRational::infinity();

    if (is_goal_lnf(task, task.init)) {
        SearchResult res;
        res.solved = true;
        return finish(std::move(res), "initial");
    }
    if (!ev0.reachable) {
        SearchResult res;
        res.proved_unsolvable = !ev0.layer_cap && !stats.guarantees_void;
        return finish(std::move(res), "initial");
    }

    EhcOutcome first;
    if (opts.use_helpful) {
        first = run_ehc(eval, opts, true, task.init, {}, &ev0, stats);
        if (first.solved) {
            SearchResult res;
            res.solved = true;
            res.plan = std::move(first.plan);
            return finish(std::move(res), "ehc");
        }
        if (first.cap) {
            SearchResult res;
            stats.expansion_cap_hit = true;
            return finish(std::move(res), "ehc");
        }
        EhcOutcome second = run_ehc(eval, opts, false, first.anchor,
                                    first.anchor_plan, nullptr, stats);
        if (second.solved) {
            SearchResult res;
            res.solved = true;
            res.plan = std::move(second.plan);
            return finish(std::move(res), "ehc-unpruned");
        }
        if (second.cap) {
            SearchResult res;
            stats.expansion_cap_hit = true;
            return finish(std::move(res), "ehc-unpruned");
        }
    } else {
        first = run_ehc(eval, opts, false, task.init, {}, &ev0, stats);
        if (first.solved) {
            SearchResult res;
            res.solved = true;
            res.plan = std::move(first.plan);
            return finish(std::move(res), "ehc");
        }
        if (first.cap) {
            SearchResult res;
            stats.expansion_cap_hit = true;
            return finish(std::move(res), "ehc");
        }
    }

    SearchResult res = run_gbfs(eval, opts, stats);
    return finish(std::move(res), "gbfs");
}

}  // namespace nplan
