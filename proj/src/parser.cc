#include "parser.h"

#include <algorithm>
#include <cctype>
#include <set>
#include <unordered_set>

using namespace std;

namespace nplan {

namespace {

struct SExpr {
    bool is_atom;
    string atom;          // lowercased
    vector<SExpr> items;  // when !is_atom
    int line, col;

    const SExpr &item(size_t i) const { return items[i]; }
    size_t size() const { return items.size(); }
};

class Reader {
public:
    explicit Reader(const string &text) : text(text) {}

    vector<SExpr> read_all() {
        vector<SExpr> forms;
        skip_trivia();
        while (pos < text.size()) {
            forms.push_back(read_form());
            skip_trivia();
        }
        return forms;
    }

private:
    const string &text;
    size_t pos = 0;
    int line = 1, col = 1;

    void advance() {
        if (text[pos] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        ++pos;
    }

    void skip_trivia() {
        while (pos < text.size()) {
            char c = text[pos];
            if (isspace(static_cast<unsigned char>(c))) {
                advance();
            } else if (c == ';') {
                while (pos < text.size() && text[pos] != '\n')
                    advance();
            } else {
                break;
            }
        }
    }

    SExpr read_form() {
        skip_trivia();
        if (pos >= text.size())
            throw ParseError("unexpected end of input", line, col);
        int l = line, c = col;
        if (text[pos] == '(') {
            advance();
            SExpr list{false, "", {}, l, c};
            skip_trivia();
            while (pos < text.size() && text[pos] != ')') {
                list.items.push_back(read_form());
                skip_trivia();
            }
            if (pos >= text.size())
                throw ParseError("missing ')' for '(' opened here", l, c);
            advance();  // ')'
            return list;
        }
        if (text[pos] == ')')
            throw ParseError("unexpected ')'", l, c);
        string atom;
        while (pos < text.size() && !isspace(static_cast<unsigned char>(text[pos])) &&
               text[pos] != '(' && text[pos] != ')' && text[pos] != ';') {
            atom += static_cast<char>(
                tolower(static_cast<unsigned char>(text[pos])));
            advance();
        }
        return SExpr{true, atom, {}, l, c};
    }
};

bool is_number_token(const string &s) {
    size_t i = 0;
    if (i < s.size() && (s[i] == '-' || s[i] == '+'))
        ++i;
    bool digits = false, dot = false;
    for (; i < s.size(); ++i) {
        if (isdigit(static_cast<unsigned char>(s[i]))) {
            digits = true;
        } else if (s[i] == '.' && !dot) {
            dot = true;
        } else {
            return false;
        }
    }
    return digits;
}

class TaskParser {
public:
    ParsedTask parse(const string &domain_text, const string &problem_text) {
        ParsedTask task;
        parse_domain(domain_text, task.domain);
        parse_problem(problem_text, task.problem);
        if (task.problem.domain_name != task.domain.name)
            throw ParseError("problem requires domain '" +
                                 task.problem.domain_name + "' but got '" +
                                 task.domain.name + "'",
                             1, 1);
        return task;
    }

private:
    set<string> predicate_names;
    set<string> function_names;

    [[noreturn]] void err(const SExpr &at, const string &msg) const {
        throw ParseError(msg, at.line, at.col);
    }

    [[noreturn]] void unsupported(const SExpr &at, const string &msg) const {
        throw UnsupportedFeature(msg, at.line, at.col);
    }

    const SExpr &expect_list(const SExpr &e, const string &what) const {
        if (e.is_atom)
            err(e, "expected " + what + ", got '" + e.atom + "'");
        return e;
    }

    const string &expect_symbol(const SExpr &e, const string &what) const {
        if (!e.is_atom || e.atom.empty() || is_number_token(e.atom))
            err(e, "expected " + what);
        return e.atom;
    }

    bool head_is(const SExpr &e, const string &head) const {
        return !e.is_atom && !e.items.empty() && e.item(0).is_atom &&
               e.item(0).atom == head;
    }

    // "?x ?y - t1 ?z" with default type "object".
    vector<TypedName> parse_typed_list(const vector<SExpr> &items,
                                       size_t begin, size_t end,
                                       bool want_variables) const {
        vector<TypedName> result;
        vector<string> pending;
        for (size_t i = begin; i < end; ++i) {
            const SExpr &e = items[i];
            const string &sym = expect_symbol(e, "name in typed list");
            if (sym == "-") {
                if (i + 1 >= end)
                    err(e, "missing type after '-'");
                const string &type =
                    expect_symbol(items[i + 1], "type name");
                ++i;
                for (const string &name : pending)
                    result.push_back({name, type});
                pending.clear();
                continue;
            }
            bool is_var = sym[0] == '?';
            if (want_variables && !is_var)
                err(e, "expected ?variable, got '" + sym + "'");
            if (!want_variables && is_var)
                err(e, "expected name, got variable '" + sym + "'");
            pending.push_back(sym);
        }
        for (const string &name : pending)
            result.push_back({name, "object"});
        return result;
    }

    void parse_requirements(const SExpr &sec) const {
        static const set<string> supported = {
            ":strips", ":typing", ":fluents", ":numeric-fluents"};
        for (size_t i = 1; i < sec.size(); ++i) {
            const string &req = expect_symbol(sec.item(i), "requirement");
            if (!supported.count(req))
                unsupported(sec.item(i), "requirement " + req);
        }
    }

    void parse_types(const SExpr &sec, Domain &domain) const {
        vector<TypedName> typed =
            parse_typed_list(sec.items, 1, sec.size(), false);
        for (const TypedName &t : typed)
            domain.types.push_back({t.name, t.type});
    }

    vector<TypedName> parse_param_list(const SExpr &list) const {
        return parse_typed_list(list.items, 0, list.size(), true);
    }

    void parse_predicates(const SExpr &sec, Domain &domain) {
        for (size_t i = 1; i < sec.size(); ++i) {
            const SExpr &p = expect_list(sec.item(i), "predicate declaration");
            if (p.size() < 1)
                err(p, "empty predicate declaration");
            PredicateDef def;
            def.name = expect_symbol(p.item(0), "predicate name");
            def.params = parse_typed_list(p.items, 1, p.size(), true);
            if (!predicate_names.insert(def.name).second)
                err(p, "duplicate predicate '" + def.name + "'");
            domain.predicates.push_back(std::move(def));
        }
    }

    void parse_functions(const SExpr &sec, Domain &domain) {
        for (size_t i = 1; i < sec.size(); ++i) {
            if (sec.item(i).is_atom && sec.item(i).atom == "-") {
                // "(:functions (f ...) - number)" type annotation.
                if (i + 1 >= sec.size() ||
                    expect_symbol(sec.item(i + 1), "function type") != "number")
                    unsupported(sec.item(i), "non-numeric function type");
                ++i;
                continue;
            }
            const SExpr &f = expect_list(sec.item(i), "function declaration");
            if (f.size() < 1)
                err(f, "empty function declaration");
            FunctionDef def;
            def.name = expect_symbol(f.item(0), "function name");
            def.params = parse_typed_list(f.items, 1, f.size(), true);
            if (!function_names.insert(def.name).second)
                err(f, "duplicate function '" + def.name + "'");
            domain.functions.push_back(std::move(def));
        }
    }

    FluentTemplate parse_fluent(const SExpr &e) const {
        const SExpr &list = expect_list(e, "fluent reference");
        if (list.size() < 1)
            err(e, "empty fluent reference");
        FluentTemplate fl;
        fl.function = expect_symbol(list.item(0), "function name");
        if (!function_names.count(fl.function))
            err(list.item(0), "unknown function '" + fl.function + "'");
        for (size_t i = 1; i < list.size(); ++i)
            fl.args.push_back(expect_symbol(list.item(i), "fluent argument"));
        return fl;
    }

    ExprTemplate parse_expr(const SExpr &e) const {
        if (e.is_atom) {
            if (is_number_token(e.atom)) {
                ExprTemplate t;
                t.kind = ExprTemplate::Kind::number;
                t.number = Rational::parse(e.atom);
                return t;
            }
            err(e, "expected expression, got '" + e.atom + "'");
        }
        if (e.size() >= 1 && e.item(0).is_atom) {
            const string &head = e.item(0).atom;
            if (head == "+" || head == "-" || head == "*" || head == "/") {
                ExprTemplate::Kind kind = head == "+"   ? ExprTemplate::Kind::add
                                          : head == "-" ? ExprTemplate::Kind::sub
                                          : head == "*" ? ExprTemplate::Kind::mul
                                                        : ExprTemplate::Kind::div;
                size_t arity = e.size() - 1;
                if (arity < 2)
                    err(e, "operator '" + head + "' needs two operands");
                if (arity > 2 && (head == "-" || head == "/"))
                    err(e, "operator '" + head + "' takes exactly two operands");
                // + and * may be written n-ary; fold left.
                ExprTemplate t;
                t.kind = kind;
                t.children.push_back(parse_expr(e.item(1)));
                t.children.push_back(parse_expr(e.item(2)));
                for (size_t i = 3; i < e.size(); ++i) {
                    ExprTemplate wider;
                    wider.kind = kind;
                    wider.children.push_back(std::move(t));
                    wider.children.push_back(parse_expr(e.item(i)));
                    t = std::move(wider);
                }
                return t;
            }
        }
        ExprTemplate t;
        t.kind = ExprTemplate::Kind::fluent;
        t.fluent = parse_fluent(e);
        return t;
    }

    AtomTemplate parse_atom(const SExpr &e) const {
        const SExpr &list = expect_list(e, "atom");
        if (list.size() < 1)
            err(e, "empty atom");
        AtomTemplate atom;
        atom.predicate = expect_symbol(list.item(0), "predicate name");
        if (!predicate_names.count(atom.predicate))
            err(list.item(0), "unknown predicate '" + atom.predicate + "'");
        for (size_t i = 1; i < list.size(); ++i)
            atom.args.push_back(expect_symbol(list.item(i), "atom argument"));
        return atom;
    }

    static optional<Comparator> comparator_from(const string &s) {
        if (s == "<") return Comparator::lt;
        if (s == "<=") return Comparator::le;
        if (s == "=") return Comparator::eq;
        if (s == ">=") return Comparator::ge;
        if (s == ">") return Comparator::gt;
        return nullopt;
    }

    void parse_condition_part(const SExpr &e, ConditionTemplate &cond) const {
        const SExpr &list = expect_list(e, "condition");
        if (list.size() == 0)
            return;  // "()" — empty conjunction
        if (!list.item(0).is_atom)
            err(list, "expected condition");
        const string &head = list.item(0).atom;
        if (head == "and") {
            for (size_t i = 1; i < list.size(); ++i)
                parse_condition_part(list.item(i), cond);
            return;
        }
        if (head == "or" || head == "not" || head == "imply" ||
            head == "forall" || head == "exists" || head == "when")
            unsupported(list, "'" + head + "' in condition (conjunctive "
                              "atoms and comparisons only)");
        if (optional<Comparator> comp = comparator_from(head)) {
            if (list.size() != 3)
                err(list, "comparison needs two operands");
            cond.constraints.push_back(
                {*comp, parse_expr(list.item(1)), parse_expr(list.item(2))});
            return;
        }
        cond.atoms.push_back(parse_atom(list));
    }

    static optional<AssignOp> assign_op_from(const string &s) {
        if (s == "assign") return AssignOp::assign;
        if (s == "increase") return AssignOp::increase;
        if (s == "decrease") return AssignOp::decrease;
        return nullopt;
    }

    void parse_effect_part(const SExpr &e, EffectTemplate &eff) const {
        const SExpr &list = expect_list(e, "effect");
        if (list.size() == 0)
            return;
        if (!list.item(0).is_atom)
            err(list, "expected effect");
        const string &head = list.item(0).atom;
        if (head == "and") {
            for (size_t i = 1; i < list.size(); ++i)
                parse_effect_part(list.item(i), eff);
            return;
        }
        if (head == "when" || head == "forall" || head == "or")
            unsupported(list, "'" + head + "' in effect");
        if (head == "not") {
            if (list.size() != 2)
                err(list, "'not' takes one atom");
            eff.dels.push_back(parse_atom(list.item(1)));
            return;
        }
        if (optional<AssignOp> op = assign_op_from(head)) {
            if (list.size() != 3)
                err(list, "'" + head + "' takes a fluent and an expression");
            eff.num_effects.push_back(
                {*op, parse_fluent(list.item(1)), parse_expr(list.item(2))});
            return;
        }
        if (head == "scale-up" || head == "scale-down")
            unsupported(list, "'" + head + "' effects");
        eff.adds.push_back(parse_atom(list));
    }

    void parse_action(const SExpr &sec, Domain &domain) {
        ActionSchema schema;
        if (sec.size() < 2)
            err(sec, ":action needs a name");
        schema.name = expect_symbol(sec.item(1), "action name");
        size_t i = 2;
        bool saw_effect = false;
        while (i < sec.size()) {
            const string &key = expect_symbol(sec.item(i), "action keyword");
            if (i + 1 >= sec.size())
                err(sec.item(i), "missing value after " + key);
            const SExpr &value = sec.item(i + 1);
            if (key == ":parameters") {
                schema.params = parse_param_list(expect_list(value, "parameter list"));
            } else if (key == ":precondition") {
                parse_condition_part(value, schema.pre);
            } else if (key == ":effect") {
                parse_effect_part(value, schema.eff);
                saw_effect = true;
            } else {
                err(sec.item(i), "unknown action keyword " + key);
            }
            i += 2;
        }
        if (!saw_effect)
            err(sec, "action '" + schema.name + "' has no :effect");
        set<string> param_names;
        for (const TypedName &p : schema.params)
            if (!param_names.insert(p.name).second)
                err(sec, "duplicate parameter '" + p.name + "' in action '" +
                             schema.name + "'");
        domain.actions.push_back(std::move(schema));
    }

    void parse_domain(const string &text, Domain &domain) {
        vector<SExpr> forms = Reader(text).read_all();
        if (forms.size() != 1)
            throw ParseError("expected a single (define ...) form in domain",
                             1, 1);
        const SExpr &top = forms[0];
        if (!head_is(top, "define"))
            throw ParseError("domain file must start with (define ...)",
                             top.line, top.col);
        if (top.size() < 2 || !head_is(top.item(1), "domain") ||
            top.item(1).size() != 2)
            throw ParseError("expected (domain <name>)", top.line, top.col);
        domain.name = expect_symbol(top.item(1).item(1), "domain name");
        for (size_t i = 2; i < top.size(); ++i) {
            const SExpr &sec = expect_list(top.item(i), "domain section");
            if (sec.size() == 0 || !sec.item(0).is_atom)
                err(sec, "expected domain section");
            const string &head = sec.item(0).atom;
            if (head == ":requirements") {
                parse_requirements(sec);
            } else if (head == ":types") {
                parse_types(sec, domain);
            } else if (head == ":constants") {
                vector<TypedName> consts =
                    parse_typed_list(sec.items, 1, sec.size(), false);
                domain.constants.insert(domain.constants.end(), consts.begin(),
                                        consts.end());
            } else if (head == ":predicates") {
                parse_predicates(sec, domain);
            } else if (head == ":functions") {
                parse_functions(sec, domain);
            } else if (head == ":action") {
                parse_action(sec, domain);
            } else if (head == ":durative-action" || head == ":derived" ||
                       head == ":constraints") {
                unsupported(sec, "section " + head);
            } else {
                err(sec, "unknown domain section " + head);
            }
        }
    }

    void parse_init(const SExpr &sec, Problem &problem) const {
        for (size_t i = 1; i < sec.size(); ++i) {
            const SExpr &entry = expect_list(sec.item(i), "init entry");
            if (entry.size() == 0 || !entry.item(0).is_atom)
                err(entry, "expected init entry");
            if (entry.item(0).atom == "not")
                err(entry, "negative init literals are redundant "
                           "(closed world) and not accepted");
            if (entry.item(0).atom == "=") {
                if (entry.size() != 3)
                    err(entry, "init value entry needs (= (fluent) number)");
                FluentInit init;
                FluentTemplate fl = parse_fluent(entry.item(1));
                init.function = fl.function;
                init.args = fl.args;
                const SExpr &num = entry.item(2);
                if (!num.is_atom || !is_number_token(num.atom))
                    err(num, "initial fluent value must be a number");
                init.value = Rational::parse(num.atom);
                for (const string &arg : init.args)
                    if (!arg.empty() && arg[0] == '?')
                        err(entry, "variables not allowed in :init");
                problem.init_fluents.push_back(std::move(init));
                continue;
            }
            AtomTemplate atom = parse_atom(entry);
            for (const string &arg : atom.args)
                if (!arg.empty() && arg[0] == '?')
                    err(entry, "variables not allowed in :init");
            problem.init_atoms.push_back({atom.predicate, atom.args});
        }
    }

    void parse_problem(const string &text, Problem &problem) const {
        vector<SExpr> forms = Reader(text).read_all();
        if (forms.size() != 1)
            throw ParseError("expected a single (define ...) form in problem",
                             1, 1);
        const SExpr &top = forms[0];
        if (!head_is(top, "define"))
            throw ParseError("problem file must start with (define ...)",
                             top.line, top.col);
        if (top.size() < 2 || !head_is(top.item(1), "problem") ||
            top.item(1).size() != 2)
            throw ParseError("expected (problem <name>)", top.line, top.col);
        problem.name = expect_symbol(top.item(1).item(1), "problem name");
        bool saw_goal = false;
        for (size_t i = 2; i < top.size(); ++i) {
            const SExpr &sec = expect_list(top.item(i), "problem section");
            if (sec.size() == 0 || !sec.item(0).is_atom)
                err(sec, "expected problem section");
            const string &head = sec.item(0).atom;
            if (head == ":domain") {
                if (sec.size() != 2)
                    err(sec, "expected (:domain <name>)");
                problem.domain_name = expect_symbol(sec.item(1), "domain name");
            } else if (head == ":requirements") {
                parse_requirements(sec);
            } else if (head == ":objects") {
                problem.objects =
                    parse_typed_list(sec.items, 1, sec.size(), false);
            } else if (head == ":init") {
                parse_init(sec, problem);
            } else if (head == ":goal") {
                if (sec.size() != 2)
                    err(sec, "expected (:goal <condition>)");
                parse_condition_part(sec.item(1), problem.goal);
                saw_goal = true;
            } else if (head == ":metric") {
                if (sec.size() != 3)
                    err(sec, "expected (:metric minimize|maximize <expr>)");
                const string &dir = expect_symbol(sec.item(1), "metric direction");
                MetricDirection direction;
                if (dir == "minimize")
                    direction = MetricDirection::minimize;
                else if (dir == "maximize")
                    direction = MetricDirection::maximize;
                else
                    err(sec.item(1), "metric direction must be minimize or "
                                     "maximize");
                problem.metric = {direction, parse_expr(sec.item(2))};
            } else if (head == ":constraints" || head == ":length") {
                unsupported(sec, "section " + head);
            } else {
                err(sec, "unknown problem section " + head);
            }
        }
        if (problem.domain_name.empty())
            throw ParseError("problem has no (:domain ...) section", top.line,
                             top.col);
        if (!saw_goal)
            throw ParseError("problem has no (:goal ...) section", top.line,
                             top.col);
    }
};

}  // namespace

ParsedTask parse_task(const string &domain_text, const string &problem_text) {
    TaskParser parser;
    return parser.parse(domain_text, problem_text);
}

}  // namespace nplan
