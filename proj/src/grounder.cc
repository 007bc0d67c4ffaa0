#include "grounder.h"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>
#include <unordered_set>

using namespace std;

namespace nplan {

namespace {

string ground_name(const string &head, const vector<string> &args) {
    string s = "(" + head;
    for (const string &a : args)
        s += " " + a;
    s += ")";
    return s;
}

struct GroundFluentExpr {
    // Expression over ground fluent names; intermediate form before
    // variable ids exist.
    enum class Kind { number, fluent, add, sub, mul, div };
    Kind kind;
    Rational number;
    string fluent;
    vector<GroundFluentExpr> children;

    void collect_fluents(set<string> &out) const {
        if (kind == Kind::fluent)
            out.insert(fluent);
        for (const GroundFluentExpr &c : children)
            c.collect_fluents(out);
    }
};

struct GroundConstraint {
    Comparator comp;
    GroundFluentExpr lhs, rhs;
};

struct GroundNumEffect {
    AssignOp op;
    string fluent;
    GroundFluentExpr rhs;
};

struct GroundAction {
    string name;
    vector<string> pre_props;
    vector<GroundConstraint> pre_constraints;
    vector<string> adds, dels;
    vector<GroundNumEffect> num_effects;
};

class Grounder {
public:
    explicit Grounder(const ParsedTask &parsed) : task(parsed) {}

    NumericTask ground() {
        build_type_table();
        build_object_table();
        build_signature_tables();
        find_statics();
        instantiate_all();
        simplify_static_atoms();
        collect_and_check_fluents();
        evaluate_static_constraints();
        prune_unreachable();
        return build_output();
    }

private:
    const ParsedTask &task;

    map<string, string> type_parent;
    map<string, vector<string>> objects_by_type;  // direct type only
    map<string, string> object_type;
    map<string, const PredicateDef *> predicates;
    map<string, const FunctionDef *> functions;
    set<string> static_predicates;
    set<string> static_functions;

    set<string> init_atoms;              // ground names
    map<string, Rational> init_values;   // ground fluent -> value

    vector<GroundAction> actions;
    vector<GroundConstraint> goal_constraints;
    vector<string> goal_props;
    optional<GroundFluentExpr> metric_expr;

    set<string> mentioned_fluents;

    void build_type_table() {
        type_parent["object"] = "";
        for (const auto &[type, parent] : task.domain.types) {
            if (type == "object" && parent != "object")
                throw GroundingError("type 'object' cannot have a supertype");
            if (type != "object")
                type_parent[type] = parent;
            if (!type_parent.count(parent))
                type_parent[parent] = "object";
        }
        // Missing intermediate parents default to object; detect cycles.
        for (const auto &[type, parent] : type_parent) {
            (void)parent;
            set<string> seen;
            string cur = type;
            while (!cur.empty()) {
                if (!seen.insert(cur).second)
                    throw GroundingError("cycle in type hierarchy at '" + cur +
                                         "'");
                auto it = type_parent.find(cur);
                if (it == type_parent.end())
                    throw GroundingError("undeclared type '" + cur + "'");
                cur = it->second;
            }
        }
    }

    bool is_subtype(const string &type, const string &ancestor) const {
        string cur = type;
        while (true) {
            if (cur == ancestor)
                return true;
            auto it = type_parent.find(cur);
            if (it == type_parent.end() || it->second.empty())
                return false;
            cur = it->second;
        }
    }

    void add_object(const TypedName &obj) {
        if (!type_parent.count(obj.type))
            throw GroundingError("object '" + obj.name +
                                 "' has undeclared type '" + obj.type + "'");
        if (object_type.count(obj.name))
            throw GroundingError("duplicate object '" + obj.name + "'");
        object_type[obj.name] = obj.type;
        objects_by_type[obj.type].push_back(obj.name);
    }

    void build_object_table() {
        for (const TypedName &c : task.domain.constants)
            add_object(c);
        for (const TypedName &o : task.problem.objects)
            add_object(o);
    }

    void build_signature_tables() {
        for (const PredicateDef &p : task.domain.predicates)
            predicates[p.name] = &p;
        for (const FunctionDef &f : task.domain.functions)
            functions[f.name] = &f;
    }

    void find_statics() {
        set<string> affected_preds, affected_fns;
        for (const ActionSchema &a : task.domain.actions) {
            for (const AtomTemplate &atom : a.eff.adds)
                affected_preds.insert(atom.predicate);
            for (const AtomTemplate &atom : a.eff.dels)
                affected_preds.insert(atom.predicate);
            for (const NumEffectTemplate &ne : a.eff.num_effects)
                affected_fns.insert(ne.fluent.function);
        }
        for (const auto &[name, def] : predicates) {
            (void)def;
            if (!affected_preds.count(name))
                static_predicates.insert(name);
        }
        for (const auto &[name, def] : functions) {
            (void)def;
            if (!affected_fns.count(name))
                static_functions.insert(name);
        }
    }

    // ---- instantiation ----

    using Binding = map<string, string>;  // ?param -> object

    string resolve_term(const string &term, const Binding &binding,
                        const string &context) const {
        if (!term.empty() && term[0] == '?') {
            auto it = binding.find(term);
            if (it == binding.end())
                throw GroundingError("unbound variable '" + term + "' in " +
                                     context);
            return it->second;
        }
        if (!object_type.count(term))
            throw GroundingError("unknown object '" + term + "' in " +
                                 context);
        return term;
    }

    void check_signature_args(const vector<TypedName> &params,
                              const vector<string> &ground_args,
                              const string &what) const {
        if (params.size() != ground_args.size())
            throw GroundingError(what + ": expected " +
                                 to_string(params.size()) + " arguments, got " +
                                 to_string(ground_args.size()));
        for (size_t i = 0; i < params.size(); ++i) {
            const string &obj = ground_args[i];
            if (!is_subtype(object_type.at(obj), params[i].type))
                throw GroundingError(what + ": argument '" + obj +
                                     "' is not of type '" + params[i].type +
                                     "'");
        }
    }

    string instantiate_atom(const AtomTemplate &atom, const Binding &binding,
                            const string &context) const {
        auto it = predicates.find(atom.predicate);
        if (it == predicates.end())
            throw GroundingError("unknown predicate '" + atom.predicate + "'");
        vector<string> args;
        for (const string &t : atom.args)
            args.push_back(resolve_term(t, binding, context));
        check_signature_args(it->second->params, args,
                             "predicate " + atom.predicate + " in " + context);
        return ground_name(atom.predicate, args);
    }

    string instantiate_fluent(const FluentTemplate &fl, const Binding &binding,
                              const string &context) const {
        auto it = functions.find(fl.function);
        if (it == functions.end())
            throw GroundingError("unknown function '" + fl.function + "'");
        vector<string> args;
        for (const string &t : fl.args)
            args.push_back(resolve_term(t, binding, context));
        check_signature_args(it->second->params, args,
                             "function " + fl.function + " in " + context);
        return ground_name(fl.function, args);
    }

    GroundFluentExpr instantiate_expr(const ExprTemplate &e,
                                      const Binding &binding,
                                      const string &context) const {
        GroundFluentExpr g;
        switch (e.kind) {
        case ExprTemplate::Kind::number:
            g.kind = GroundFluentExpr::Kind::number;
            g.number = e.number;
            return g;
        case ExprTemplate::Kind::fluent:
            g.kind = GroundFluentExpr::Kind::fluent;
            g.fluent = instantiate_fluent(e.fluent, binding, context);
            return g;
        case ExprTemplate::Kind::add:
            g.kind = GroundFluentExpr::Kind::add;
            break;
        case ExprTemplate::Kind::sub:
            g.kind = GroundFluentExpr::Kind::sub;
            break;
        case ExprTemplate::Kind::mul:
            g.kind = GroundFluentExpr::Kind::mul;
            break;
        case ExprTemplate::Kind::div:
            g.kind = GroundFluentExpr::Kind::div;
            break;
        }
        for (const ExprTemplate &c : e.children)
            g.children.push_back(instantiate_expr(c, binding, context));
        return g;
    }

    void instantiate_schema(const ActionSchema &schema) {
        // Candidate objects per parameter, then the cartesian product in
        // declaration order (deterministic action ids).
        vector<vector<string>> candidates;
        for (const TypedName &p : schema.params) {
            if (!type_parent.count(p.type))
                throw GroundingError("parameter '" + p.name + "' of action '" +
                                     schema.name + "' has undeclared type '" +
                                     p.type + "'");
            vector<string> objs;
            for (const TypedName &c : task.domain.constants)
                if (is_subtype(c.type, p.type))
                    objs.push_back(c.name);
            for (const TypedName &o : task.problem.objects)
                if (is_subtype(o.type, p.type))
                    objs.push_back(o.name);
            candidates.push_back(std::move(objs));
        }
        Binding binding;
        vector<string> chosen(schema.params.size());
        instantiate_rec(schema, candidates, 0, binding, chosen);
    }

    void instantiate_rec(const ActionSchema &schema,
                         const vector<vector<string>> &candidates, size_t i,
                         Binding &binding, vector<string> &chosen) {
        if (i == schema.params.size()) {
            emit_ground_action(schema, binding, chosen);
            return;
        }
        for (const string &obj : candidates[i]) {
            binding[schema.params[i].name] = obj;
            chosen[i] = obj;
            instantiate_rec(schema, candidates, i + 1, binding, chosen);
        }
        binding.erase(schema.params[i].name);
    }

    void emit_ground_action(const ActionSchema &schema, const Binding &binding,
                            const vector<string> &chosen) {
        GroundAction ga;
        ga.name = ground_name(schema.name, chosen);
        string ctx = "action " + ga.name;
        for (const AtomTemplate &atom : schema.pre.atoms)
            ga.pre_props.push_back(instantiate_atom(atom, binding, ctx));
        for (const ConstraintTemplate &c : schema.pre.constraints)
            ga.pre_constraints.push_back(
                {c.comp, instantiate_expr(c.lhs, binding, ctx),
                 instantiate_expr(c.rhs, binding, ctx)});
        for (const AtomTemplate &atom : schema.eff.adds)
            ga.adds.push_back(instantiate_atom(atom, binding, ctx));
        for (const AtomTemplate &atom : schema.eff.dels)
            ga.dels.push_back(instantiate_atom(atom, binding, ctx));
        set<string> effect_targets;
        for (const NumEffectTemplate &ne : schema.eff.num_effects) {
            string target = instantiate_fluent(ne.fluent, binding, ctx);
            if (!effect_targets.insert(target).second)
                throw GroundingError("conflicting numeric effects on " +
                                     target + " in " + ctx);
            ga.num_effects.push_back(
                {ne.op, target, instantiate_expr(ne.rhs, binding, ctx)});
        }
        actions.push_back(std::move(ga));
    }

    void instantiate_all() {
        for (const GroundAtom &a : task.problem.init_atoms) {
            auto it = predicates.find(a.predicate);
            if (it == predicates.end())
                throw GroundingError("unknown predicate '" + a.predicate +
                                     "' in :init");
            for (const string &arg : a.args)
                if (!object_type.count(arg))
                    throw GroundingError("unknown object '" + arg +
                                         "' in :init");
            check_signature_args(it->second->params, a.args,
                                 "predicate " + a.predicate + " in :init");
            init_atoms.insert(ground_name(a.predicate, a.args));
        }
        for (const FluentInit &f : task.problem.init_fluents) {
            auto it = functions.find(f.function);
            if (it == functions.end())
                throw GroundingError("unknown function '" + f.function +
                                     "' in :init");
            for (const string &arg : f.args)
                if (!object_type.count(arg))
                    throw GroundingError("unknown object '" + arg +
                                         "' in :init");
            check_signature_args(it->second->params, f.args,
                                 "function " + f.function + " in :init");
            string name = ground_name(f.function, f.args);
            auto [pos, inserted] = init_values.insert({name, f.value});
            if (!inserted && pos->second != f.value)
                throw GroundingError("conflicting :init values for " + name);
        }

        for (const ActionSchema &schema : task.domain.actions)
            instantiate_schema(schema);

        Binding empty;
        for (const AtomTemplate &atom : task.problem.goal.atoms)
            goal_props.push_back(instantiate_atom(atom, empty, ":goal"));
        for (const ConstraintTemplate &c : task.problem.goal.constraints)
            goal_constraints.push_back(
                {c.comp, instantiate_expr(c.lhs, empty, ":goal"),
                 instantiate_expr(c.rhs, empty, ":goal")});
        if (task.problem.metric)
            metric_expr =
                instantiate_expr(task.problem.metric->second, empty, ":metric");
    }

    // ---- simplification ----

    bool atom_is_static(const string &ground_atom) const {
        size_t space = ground_atom.find(' ');
        string pred = space == string::npos
                          ? ground_atom.substr(1, ground_atom.size() - 2)
                          : ground_atom.substr(1, space - 1);
        return static_predicates.count(pred) > 0;
    }

    void simplify_static_atoms() {
        vector<GroundAction> kept;
        for (GroundAction &ga : actions) {
            bool applicable = true;
            vector<string> pre;
            for (string &p : ga.pre_props) {
                if (atom_is_static(p)) {
                    if (!init_atoms.count(p)) {
                        applicable = false;
                        break;
                    }
                    // True forever; drop from the precondition.
                } else {
                    pre.push_back(std::move(p));
                }
            }
            if (!applicable)
                continue;
            ga.pre_props = std::move(pre);
            kept.push_back(std::move(ga));
        }
        actions = std::move(kept);

        // Static goal atoms: drop the true ones. A false one stays in the
        // goal as an ordinary never-achievable proposition, which makes the
        // task honestly unsolvable downstream.
        vector<string> goal;
        for (string &g : goal_props) {
            if (atom_is_static(g) && init_atoms.count(g))
                continue;
            goal.push_back(std::move(g));
        }
        goal_props = std::move(goal);
    }

    void collect_and_check_fluents() {
        for (const GroundAction &ga : actions) {
            for (const GroundConstraint &c : ga.pre_constraints) {
                c.lhs.collect_fluents(mentioned_fluents);
                c.rhs.collect_fluents(mentioned_fluents);
            }
            for (const GroundNumEffect &ne : ga.num_effects) {
                mentioned_fluents.insert(ne.fluent);
                ne.rhs.collect_fluents(mentioned_fluents);
            }
        }
        for (const GroundConstraint &c : goal_constraints) {
            c.lhs.collect_fluents(mentioned_fluents);
            c.rhs.collect_fluents(mentioned_fluents);
        }
        if (metric_expr)
            metric_expr->collect_fluents(mentioned_fluents);
        for (const string &fl : mentioned_fluents)
            if (!init_values.count(fl))
                throw UninitializedFluent(fl);
    }

    bool fluent_is_static(const string &ground_fluent) const {
        size_t space = ground_fluent.find(' ');
        string fn = space == string::npos
                        ? ground_fluent.substr(1, ground_fluent.size() - 2)
                        : ground_fluent.substr(1, space - 1);
        return static_functions.count(fn) > 0;
    }

    bool expr_is_static(const GroundFluentExpr &e) const {
        if (e.kind == GroundFluentExpr::Kind::fluent)
            return fluent_is_static(e.fluent);
        for (const GroundFluentExpr &c : e.children)
            if (!expr_is_static(c))
                return false;
        return true;
    }

    optional<Rational> eval_static(const GroundFluentExpr &e) const {
        switch (e.kind) {
        case GroundFluentExpr::Kind::number:
            return e.number;
        case GroundFluentExpr::Kind::fluent:
            return init_values.at(e.fluent);
        default:
            break;
        }
        optional<Rational> l = eval_static(e.children[0]);
        optional<Rational> r = eval_static(e.children[1]);
        if (!l || !r)
            return nullopt;
        switch (e.kind) {
        case GroundFluentExpr::Kind::add: return *l + *r;
        case GroundFluentExpr::Kind::sub: return *l - *r;
        case GroundFluentExpr::Kind::mul: return *l * *r;
        case GroundFluentExpr::Kind::div:
            if (r->is_zero())
                return nullopt;  // undefined; the constraint counts as false
            return *l / *r;
        default:
            return nullopt;
        }
    }

    static bool compare(const Rational &l, Comparator comp, const Rational &r) {
        switch (comp) {
        case Comparator::lt: return l < r;
        case Comparator::le: return l <= r;
        case Comparator::eq: return l == r;
        case Comparator::ge: return l >= r;
        case Comparator::gt: return l > r;
        }
        return false;
    }

    // Evaluates constraints whose fluents are all static. Returns nullopt
    // if the constraint is not static.
    optional<bool> try_eval_constraint(const GroundConstraint &c) const {
        if (!expr_is_static(c.lhs) || !expr_is_static(c.rhs))
            return nullopt;
        optional<Rational> l = eval_static(c.lhs);
        optional<Rational> r = eval_static(c.rhs);
        if (!l || !r)
            return false;
        return compare(*l, c.comp, *r);
    }

    void evaluate_static_constraints() {
        vector<GroundAction> kept;
        for (GroundAction &ga : actions) {
            bool applicable = true;
            vector<GroundConstraint> remaining;
            for (GroundConstraint &c : ga.pre_constraints) {
                optional<bool> value = try_eval_constraint(c);
                if (!value) {
                    remaining.push_back(std::move(c));
                } else if (!*value) {
                    applicable = false;
                    break;
                }
            }
            if (!applicable)
                continue;
            ga.pre_constraints = std::move(remaining);
            kept.push_back(std::move(ga));
        }
        actions = std::move(kept);

        // The goal keeps constant-false constraints: they are folded to a
        // constant by normalization and make the task honestly unsolvable.
        vector<GroundConstraint> remaining;
        for (GroundConstraint &c : goal_constraints) {
            optional<bool> value = try_eval_constraint(c);
            if (value && *value)
                continue;
            remaining.push_back(std::move(c));
        }
        goal_constraints = std::move(remaining);
    }

    void prune_unreachable() {
        // Propositional relaxed reachability from :init, ignoring deletes
        // and all numeric conditions.
        set<string> reachable = init_atoms;
        vector<bool> fired(actions.size(), false);
        bool changed = true;
        while (changed) {
            changed = false;
            for (size_t i = 0; i < actions.size(); ++i) {
                if (fired[i])
                    continue;
                const GroundAction &ga = actions[i];
                bool ok = true;
                for (const string &p : ga.pre_props)
                    if (!reachable.count(p)) {
                        ok = false;
                        break;
                    }
                if (!ok)
                    continue;
                fired[i] = true;
                changed = true;
                for (const string &a : ga.adds)
                    if (reachable.insert(a).second)
                        changed = true;
            }
        }
        vector<GroundAction> kept;
        for (size_t i = 0; i < actions.size(); ++i)
            if (fired[i])
                kept.push_back(std::move(actions[i]));
        actions = std::move(kept);
    }

    // ---- output construction ----

    Expr convert_expr(const GroundFluentExpr &e,
                      const map<string, int> &var_ids) const {
        switch (e.kind) {
        case GroundFluentExpr::Kind::number:
            return Expr::constant(e.number);
        case GroundFluentExpr::Kind::fluent:
            return Expr::variable(var_ids.at(e.fluent));
        case GroundFluentExpr::Kind::add:
            return Expr::binary(Expr::Kind::add,
                                convert_expr(e.children[0], var_ids),
                                convert_expr(e.children[1], var_ids));
        case GroundFluentExpr::Kind::sub:
            return Expr::binary(Expr::Kind::sub,
                                convert_expr(e.children[0], var_ids),
                                convert_expr(e.children[1], var_ids));
        case GroundFluentExpr::Kind::mul:
            return Expr::binary(Expr::Kind::mul,
                                convert_expr(e.children[0], var_ids),
                                convert_expr(e.children[1], var_ids));
        case GroundFluentExpr::Kind::div:
            return Expr::binary(Expr::Kind::div,
                                convert_expr(e.children[0], var_ids),
                                convert_expr(e.children[1], var_ids));
        }
        throw GroundingError("unreachable expression kind");
    }

    NumericTask build_output() const {
        // Propositions: everything in :init, the goal, and surviving
        // actions, with ids in lexicographic order.
        set<string> prop_names(init_atoms.begin(), init_atoms.end());
        prop_names.insert(goal_props.begin(), goal_props.end());
        for (const GroundAction &ga : actions) {
            prop_names.insert(ga.pre_props.begin(), ga.pre_props.end());
            prop_names.insert(ga.adds.begin(), ga.adds.end());
            prop_names.insert(ga.dels.begin(), ga.dels.end());
        }

        // Variables: fluents mentioned by survivors, the goal or the metric.
        set<string> var_names;
        for (const GroundAction &ga : actions) {
            for (const GroundConstraint &c : ga.pre_constraints) {
                c.lhs.collect_fluents(var_names);
                c.rhs.collect_fluents(var_names);
            }
            for (const GroundNumEffect &ne : ga.num_effects) {
                var_names.insert(ne.fluent);
                ne.rhs.collect_fluents(var_names);
            }
        }
        for (const GroundConstraint &c : goal_constraints) {
            c.lhs.collect_fluents(var_names);
            c.rhs.collect_fluents(var_names);
        }
        if (metric_expr)
            metric_expr->collect_fluents(var_names);

        NumericTask out;
        map<string, int> prop_ids, var_ids;
        for (const string &name : prop_names) {
            int id = static_cast<int>(out.props.size());
            prop_ids[name] = id;
            out.props.push_back({id, name});
        }
        for (const string &name : var_names) {
            int id = static_cast<int>(out.vars.size());
            var_ids[name] = id;
            out.vars.push_back({id, name, -1});
        }

        out.init.props = PropSet(static_cast<int>(out.props.size()));
        for (const string &a : init_atoms)
            out.init.props.set(prop_ids.at(a));
        out.init.values.reserve(out.vars.size());
        for (const NumVar &v : out.vars)
            out.init.values.push_back(init_values.at(v.name));

        for (const GroundAction &ga : actions) {
            Action a;
            a.id = static_cast<int>(out.actions.size());
            a.name = ga.name;
            for (const string &p : ga.pre_props)
                a.pre.props.push_back(prop_ids.at(p));
            sort(a.pre.props.begin(), a.pre.props.end());
            a.pre.props.erase(unique(a.pre.props.begin(), a.pre.props.end()),
                              a.pre.props.end());
            for (const GroundConstraint &c : ga.pre_constraints)
                a.pre.constraints.push_back({convert_expr(c.lhs, var_ids),
                                             c.comp,
                                             convert_expr(c.rhs, var_ids)});
            for (const string &p : ga.adds)
                a.eff.adds.push_back(prop_ids.at(p));
            for (const string &p : ga.dels)
                a.eff.dels.push_back(prop_ids.at(p));
            sort(a.eff.adds.begin(), a.eff.adds.end());
            a.eff.adds.erase(unique(a.eff.adds.begin(), a.eff.adds.end()),
                             a.eff.adds.end());
            sort(a.eff.dels.begin(), a.eff.dels.end());
            a.eff.dels.erase(unique(a.eff.dels.begin(), a.eff.dels.end()),
                             a.eff.dels.end());
            for (const GroundNumEffect &ne : ga.num_effects)
                a.eff.num_effects.push_back(
                    {var_ids.at(ne.fluent), ne.op,
                     convert_expr(ne.rhs, var_ids)});
            out.actions.push_back(std::move(a));
        }

        for (const string &g : goal_props)
            out.goal.props.push_back(prop_ids.at(g));
        sort(out.goal.props.begin(), out.goal.props.end());
        out.goal.props.erase(
            unique(out.goal.props.begin(), out.goal.props.end()),
            out.goal.props.end());
        for (const GroundConstraint &c : goal_constraints)
            out.goal.constraints.push_back(
                {convert_expr(c.lhs, var_ids), c.comp,
                 convert_expr(c.rhs, var_ids)});

        if (metric_expr)
            out.metric = Metric{task.problem.metric->first,
                                convert_expr(*metric_expr, var_ids)};
        return out;
    }
};

}  // namespace

NumericTask ground_task(const ParsedTask &parsed) {
    Grounder grounder(parsed);
    return grounder.ground();
}

}  // namespace nplan
