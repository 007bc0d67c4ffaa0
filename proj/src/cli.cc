#include "cli.h"

#include "generator.h"
#include "grounder.h"
#include "lnf.h"
#include "model.h"
#include "parser.h"
#include "relaxation.h"
#include "rpg.h"
#include "search.h"
#include "validate.h"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>
#include <unordered_map>

using namespace std;

namespace nplan {

namespace {

string slurp(const string &path) {
    ifstream in(path);
    if (!in)
        throw runtime_error("cannot read " + path);
    ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

NumericTask load_task(const string &domain_path, const string &problem_path) {
    ParsedTask parsed = parse_task(slurp(domain_path), slurp(problem_path));
    return ground_task(parsed);
}

unordered_map<string, int> action_index(const NumericTask &task) {
    unordered_map<string, int> map;
    for (const Action &a : task.actions)
        map[a.name] = a.id;
    return map;
}

// Accepts "3: (drive t0 l1 l2)" as well as bare "(drive t0 l1 l2)";
// ';' starts a comment.
vector<string> read_plan_names(const string &path) {
    ifstream in(path);
    if (!in)
        throw runtime_error("cannot read " + path);
    vector<string> names;
    string line;
    while (getline(in, line)) {
        size_t semi = line.find(';');
        if (semi != string::npos)
            line.erase(semi);
        size_t open = line.find('(');
        if (open == string::npos)
            continue;
        size_t close = line.rfind(')');
        if (close == string::npos || close < open)
            throw runtime_error("malformed plan line: " + line);
        istringstream tokens(line.substr(open + 1, close - open - 1));
        string token, name;
        while (tokens >> token) {
            for (char &ch : token)
                ch = tolower(static_cast<unsigned char>(ch));
            name += (name.empty() ? "" : " ") + token;
        }
        if (name.empty())
            throw runtime_error("malformed plan line: " + line);
        names.push_back("(" + name + ")");
    }
    return names;
}

Plan plan_from_names(const NumericTask &task, const vector<string> &names) {
    unordered_map<string, int> index = action_index(task);
    Plan plan;
    for (const string &name : names) {
        auto it = index.find(name);
        if (it == index.end())
            throw runtime_error("plan refers to unknown action " + name);
        plan.push_back(it->second);
    }
    return plan;
}

void print_plan(ostream &out, const NumericTask &task, const Plan &plan,
                const Verdict &verdict) {
    for (size_t i = 0; i < plan.size(); ++i)
        out << i << ": " << task.actions[plan[i]].name << "\n";
    out << "; length=" << plan.size() << "\n";
    if (verdict.metric)
        out << "; metric=" << verdict.metric->to_string() << "\n";
}

void dump_rpg(const LnfTask &lnf, int max_layers) {
    RpgBuilder builder(lnf, max_layers);
    Rpg rpg = builder.build(lnf.init);
    const char *verdict =
        rpg.verdict == Rpg::Verdict::reached
            ? "reached"
            : rpg.verdict == Rpg::Verdict::failed ? "failed" : "layer-cap";
    cout << "rpg verdict: " << verdict << "\n";
    for (size_t t = 0; t < rpg.layers.size(); ++t) {
        cout << "layer " << t << ":";
        for (size_t p = 0; p < lnf.props.size(); ++p)
            if (rpg.prop_level[p] == (int)t)
                cout << " +" << lnf.props[p].name;
        cout << "\n   ";
        for (size_t v = 0; v < lnf.vars.size(); ++v)
            cout << " " << lnf.vars[v].name << "="
                 << rpg.layers[t].max_values[v].to_string();
        cout << "\n";
    }
    if (rpg.verdict == Rpg::Verdict::reached) {
        ExtractResult ex = builder.extract(rpg, lnf.init);
        cout << "h(init) = " << ex.plan_length << "\n";
        cout << "helpful:";
        for (int a : ex.helpful)
            cout << " " << lnf.actions[a].name;
        cout << "\n";
    }
}

int cmd_solve(const string &domain, const string &problem,
              const SearchOptions &opts, bool dump, const string &plan_file) {
    NumericTask task = load_task(domain, problem);
    LnfTask lnf = normalize(task);
    if (dump)
        dump_rpg(lnf, opts.max_layers);

    SearchResult result = solve(lnf, opts);

    const SearchStats &st = result.stats;
    cerr << "stage=" << st.stage << " expansions=" << st.expansions
         << " evaluations=" << st.evaluations
         << " h_init=" << st.h_init.to_string()
         << " guarantees_void=" << (st.guarantees_void ? 1 : 0);
    if (!st.quality_fallback.empty())
        cerr << " fallback=\"" << st.quality_fallback << "\"";
    if (st.expansion_cap_hit)
        cerr << " expansion_cap_hit=1";
    if (st.layer_cap_hit)
        cerr << " layer_cap_hit=1";
    cerr << "\n";

    if (!result.solved) {
        if (result.proved_unsolvable)
            cout << "; task proved unsolvable\n";
        else if (st.expansion_cap_hit)
            cout << "; no plan found (expansion cap reached)\n";
        else
            cout << "; no plan found\n";
        return 1;
    }

    // Map back to the ground task and replay as a final safety check.
    vector<string> names;
    for (int idx : result.plan)
        names.push_back(lnf.actions[idx].name);
    Plan plan = plan_from_names(task, names);
    Verdict verdict = validate_plan(task, plan);
    if (!verdict.valid) {
        cerr << "internal error: produced plan failed validation: "
             << verdict.reason << "\n";
        return 2;
    }
    print_plan(cout, task, plan, verdict);
    if (!plan_file.empty()) {
        ofstream out(plan_file);
        if (!out)
            throw runtime_error("cannot write " + plan_file);
        print_plan(out, task, plan, verdict);
    }
    return 0;
}

int cmd_validate(const string &domain, const string &problem,
                 const string &plan_path) {
    NumericTask task = load_task(domain, problem);
    Plan plan = plan_from_names(task, read_plan_names(plan_path));
    Verdict verdict = validate_plan(task, plan);
    if (verdict.valid) {
        cout << "valid; length=" << plan.size();
        if (verdict.metric)
            cout << " metric=" << verdict.metric->to_string();
        cout << "\n";
        return 0;
    }
    cout << "invalid: " << verdict.reason << "\n";
    return 1;
}

int cmd_decide(const string &domain, const string &problem,
               const string &decider) {
    NumericTask task = load_task(domain, problem);
    RelaxedFixpoint result;
    if (decider == "restricted") {
        result = decide_restricted(task, task.init);
    } else {
        LnfTask lnf = normalize(task);
        result = decide_strong(lnf, lnf.init);
    }
    cout << (result.solvable ? "relaxed-solvable" : "relaxed-unsolvable")
         << " iterations=" << result.iterations << "\n";
    return result.solvable ? 0 : 1;
}

int cmd_analyze(const string &domain, const string &problem, bool dump,
                int max_layers) {
    NumericTask task = load_task(domain, problem);
    cout << "ground task: " << task.props.size() << " propositions, "
         << task.vars.size() << " variables, " << task.actions.size()
         << " actions\n";
    LnfTask lnf = normalize(task);
    cout << "normalized: " << lnf.vars.size() << " variables ("
         << lnf.vars.size() - lnf.num_original_vars << " inverses), "
         << lnf.actions.size() << " actions\n";
    LnfReport report = verify_lnf(lnf);
    cout << "normal form: " << (report.ok ? "ok" : "violated") << "\n";
    for (const string &v : report.violations)
        cout << "  " << v << "\n";
    AssignDepGraph deps = check_acyclic(lnf);
    cout << "assign dependencies: " << (deps.acyclic ? "acyclic" : "cyclic")
         << "\n";
    RelevanceSet rel = compute_relevance(lnf);
    cout << "solution-relevant variables:";
    for (int v : rel.ids)
        cout << " " << lnf.vars[v].name;
    cout << "\n";
    MonotonicityReport mono = check_monotonic_structure(lnf);
    cout << "strongly monotonic structure: "
         << (mono.strongly_monotonic ? "yes" : "no") << "\n";
    for (const string &v : mono.violations)
        cout << "  " << v << "\n";
    if (deps.acyclic) {
        MneedVector need = compute_mneed(lnf, lnf.init);
        cout << "mneed(init):";
        for (int v : rel.ids)
            cout << " " << lnf.vars[v].name << "=" << need[v].to_string();
        cout << "\n";
    }
    CostDerivation costs = derive_costs(lnf);
    if (costs.ok) {
        cout << "metric costs derived:";
        for (size_t i = 0; i < lnf.actions.size(); ++i)
            if (costs.costs[i].sign() != 0)
                cout << " " << lnf.actions[i].name << "="
                     << costs.costs[i].to_string();
        cout << "\n";
    } else {
        cout << "metric costs rejected: " << costs.reason << "\n";
    }
    if (dump)
        dump_rpg(lnf, max_layers);
    return 0;
}

int cmd_gen(const string &family, int size, unsigned seed, const string &out) {
    GeneratedInstance inst = gen_instance(family, size, seed);
    auto write = [&](const string &name, const string &content) {
        string path = out + "/" + name;
        ofstream f(path);
        if (!f)
            throw runtime_error("cannot write " + path);
        f << content;
        cout << path << "\n";
    };
    write("domain.pddl", inst.domain);
    write("problem.pddl", inst.problem);
    ostringstream plan;
    for (size_t i = 0; i < inst.witness.size(); ++i)
        plan << i << ": " << inst.witness[i] << "\n";
    plan << "; length=" << inst.witness.size() << "\n";
    write("witness.plan", plan.str());
    return 0;
}

}  // namespace

int run_cli(int argc, char **argv) {
    CLI::App app{"forward state-space planner for numeric STRIPS tasks"};
    app.require_subcommand(1);

    string domain, problem, plan_path, plan_file;
    string mode = "speed", decider = "strong", family = "zeno", out_dir = ".";
    string wg = "1", wh = "5", h_mix = "0";
    bool no_helpful = false, dump = false;
    long max_expansions = 1000000;
    int max_layers = 10000;
    int size = 1;
    unsigned seed = 0;

    CLI::App *solve_cmd =
        app.add_subcommand("solve", "search for a plan");
    solve_cmd->add_option("domain", domain)->required();
    solve_cmd->add_option("problem", problem)->required();
    solve_cmd->add_option("--mode", mode, "speed or quality")
        ->check(CLI::IsMember({"speed", "quality"}));
    solve_cmd->add_option("--wg", wg, "path-cost weight (quality mode)");
    solve_cmd->add_option("--wh", wh, "heuristic weight (quality mode)");
    solve_cmd->add_option("--h-mix", h_mix,
                          "blend of plan length into the cost heuristic");
    solve_cmd->add_flag("--no-helpful", no_helpful,
                        "expand all applicable actions during hill-climbing");
    solve_cmd->add_option("--max-expansions", max_expansions);
    solve_cmd->add_option("--max-layers", max_layers);
    solve_cmd->add_flag("--dump-rpg", dump,
                        "print the initial state's planning graph");
    solve_cmd->add_option("--plan-file", plan_file,
                          "also write the plan to this file");

    CLI::App *validate_cmd =
        app.add_subcommand("validate", "replay a plan file");
    validate_cmd->add_option("domain", domain)->required();
    validate_cmd->add_option("problem", problem)->required();
    validate_cmd->add_option("plan", plan_path)->required();

    CLI::App *decide_cmd = app.add_subcommand(
        "decide", "decide relaxed solvability from the initial state");
    decide_cmd->add_option("domain", domain)->required();
    decide_cmd->add_option("problem", problem)->required();
    decide_cmd->add_option("--decider", decider, "strong or restricted")
        ->check(CLI::IsMember({"strong", "restricted"}));

    CLI::App *analyze_cmd = app.add_subcommand(
        "analyze", "report normalization and relaxation structure");
    analyze_cmd->add_option("domain", domain)->required();
    analyze_cmd->add_option("problem", problem)->required();
    analyze_cmd->add_flag("--dump-rpg", dump);
    analyze_cmd->add_option("--max-layers", max_layers);

    CLI::App *gen_cmd =
        app.add_subcommand("gen", "generate a benchmark instance");
    gen_cmd->add_option("--family", family, "zeno or depot")
        ->check(CLI::IsMember({"zeno", "depot"}));
    gen_cmd->add_option("--size", size)->required();
    gen_cmd->add_option("--seed", seed);
    gen_cmd->add_option("--out", out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (solve_cmd->parsed()) {
            SearchOptions opts;
            opts.mode = mode == "quality" ? SearchMode::quality
                                          : SearchMode::speed;
            opts.use_helpful = !no_helpful;
            opts.max_expansions = max_expansions;
            opts.max_layers = max_layers;
            opts.weight_g = Rational::parse(wg);
            opts.weight_h = Rational::parse(wh);
            opts.h_mix = Rational::parse(h_mix);
            return cmd_solve(domain, problem, opts, dump, plan_file);
        }
        if (validate_cmd->parsed())
            return cmd_validate(domain, problem, plan_path);
        if (decide_cmd->parsed())
            return cmd_decide(domain, problem, decider);
        if (analyze_cmd->parsed())
            return cmd_analyze(domain, problem, dump, max_layers);
        if (gen_cmd->parsed())
            return cmd_gen(family, size, seed, out_dir);
    } catch (const UnsupportedFeature &e) {
        cerr << "unsupported feature: " << e.what() << "\n";
        return 2;
    } catch (const ParseError &e) {
        cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const NotLinearError &e) {
        cerr << "not linear: " << e.what() << "\n";
        return 2;
    } catch (const MalformedInput &e) {
        cerr << "malformed input: " << e.what() << "\n";
        return 2;
    } catch (const exception &e) {
        cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

}  // namespace nplan
