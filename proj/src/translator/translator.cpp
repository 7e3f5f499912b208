#include "hypoteq/translator/translator.hpp"

#include <algorithm>
#include <map>
#include <optional>

#include "hypoteq/datalog/safety.hpp"
#include "hypoteq/datalog/substitution.hpp"

namespace hypoteq::translator {

using datalog::Atom;
using datalog::CompareOp;
using datalog::HeadSign;
using datalog::RuleId;
using datalog::RuleOrigin;
using datalog::Term;
using datalog::Value;
using datalog::Variable;
using namespace sql;

namespace {

// Columns of a FROM list as terms, with their types, plus the relation goals.
struct Scope {
    std::vector<std::vector<Term>> columns;
    std::vector<std::vector<ColumnType>> types;
    std::vector<Goal> base;
};

RCondition negated(const RCondition& c);

// Negation normal form: NOT only survives inside IN (as its flag).
RCondition nnf(const RCondition& c) {
    return std::visit(
        [](const auto& n) -> RCondition {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, RAnd>) {
                return RCondition{RAnd{nnf(*n.lhs), nnf(*n.rhs)}};
            } else if constexpr (std::is_same_v<T, ROr>) {
                return RCondition{ROr{nnf(*n.lhs), nnf(*n.rhs)}};
            } else if constexpr (std::is_same_v<T, RNot>) {
                return negated(*n.inner);
            } else {
                return RCondition{n};
            }
        },
        c.node);
}

RCondition negated(const RCondition& c) {
    return std::visit(
        [](const auto& n) -> RCondition {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, RAnd>) {
                return RCondition{ROr{negated(*n.lhs), negated(*n.rhs)}};
            } else if constexpr (std::is_same_v<T, ROr>) {
                return RCondition{RAnd{negated(*n.lhs), negated(*n.rhs)}};
            } else if constexpr (std::is_same_v<T, RNot>) {
                return nnf(*n.inner);
            } else if constexpr (std::is_same_v<T, RCompare>) {
                return RCondition{RCompare{n.lhs, datalog::negate(n.op), n.rhs}};
            } else {
                RIn in = n;
                in.negated = !in.negated;
                return RCondition{std::move(in)};
            }
        },
        c.node);
}

void flatten_and(const RCondition& c, std::vector<RCondition>& out) {
    if (const auto* a = std::get_if<RAnd>(&c.node)) {
        flatten_and(*a->lhs, out);
        flatten_and(*a->rhs, out);
    } else {
        out.push_back(c);
    }
}

Term operand_term(const BoundOperand& o, const std::vector<std::vector<Term>>& columns) {
    if (const auto* v = std::get_if<Value>(&o)) return *v;
    const auto& c = std::get<BoundColumn>(o);
    return columns[c.relation][c.column];
}

ColumnType::Kind value_kind(const Value& v) {
    if (v.is_int()) return ColumnType::Kind::Int;
    if (v.is_float()) return ColumnType::Kind::Float;
    return ColumnType::Kind::String;
}

ColumnType::Kind operand_kind(const BoundOperand& o, const Scope& s) {
    if (const auto* v = std::get_if<Value>(&o)) return value_kind(*v);
    const auto& c = std::get<BoundColumn>(o);
    return s.types[c.relation][c.column].kind;
}

void add_distinct_vars(const Term& t, std::vector<Term>& out) {
    if (!datalog::is_variable(t)) return;
    for (const auto& x : out)
        if (x == t) return;
    out.push_back(t);
}

std::vector<Term> distinct_vars(const std::vector<Goal>& goals) {
    std::vector<Term> out;
    for (const auto& g : goals) {
        if (!g.is_atom()) continue;
        for (const auto& t : g.as_atom().args) add_distinct_vars(t, out);
    }
    return out;
}

// Union-find over variable names for equality conjuncts.
struct Classes {
    std::map<std::string, std::string> parent;
    std::map<std::string, Value> constant;
    std::vector<Goal> conflicts;

    std::string find(const std::string& v) {
        auto it = parent.find(v);
        if (it == parent.end() || it->second == v) return v;
        std::string root = find(it->second);
        parent[v] = root;
        return root;
    }

    void bind(const std::string& v, const Value& c) {
        std::string r = find(v);
        auto it = constant.find(r);
        if (it == constant.end()) constant.emplace(r, c);
        else if (!(it->second == c)) conflicts.push_back(Goal::compare(CompareOp::Eq, it->second, c));
    }

    void unite(const std::string& a, const std::string& b) {
        std::string ra = find(a), rb = find(b);
        if (ra == rb) return;
        parent[ra] = ra;
        parent[rb] = ra;
        auto cb = constant.find(rb);
        if (cb != constant.end()) {
            Value v = cb->second;
            constant.erase(cb);
            bind(ra, v);
        }
    }

    datalog::Substitution substitution(const std::vector<std::string>& vars) {
        datalog::Substitution s;
        for (const auto& v : vars) {
            std::string r = find(v);
            auto c = constant.find(r);
            if (c != constant.end()) s[v] = c->second;
            else if (r != v) s[v] = Variable{r};
        }
        return s;
    }
};

}  // namespace

struct Translator::Impl {
    Translator& t;

    Rule make_rule(Atom head, std::vector<Goal> body) {
        return Rule{HeadSign::Regular, std::move(head), std::move(body), t.next_id()};
    }

    std::vector<Rule> query(const std::string& name, const RQuery& q) {
        return std::visit([&](const auto& n) { return node(name, n, q); }, q.node);
    }

    std::vector<Term> fresh_vars(std::size_t n) {
        std::vector<Term> out;
        for (std::size_t i = 0; i < n; ++i) out.push_back(t.fresh_var());
        return out;
    }

    // ---- SELECT ---------------------------------------------------------

    std::vector<Rule> node(const std::string& name, const RSelect& s, const RQuery&) {
        std::vector<Rule> aux;
        Scope scope;
        for (const auto& rel : s.from) {
            auto vars = fresh_vars(rel.schema.arity());
            GoalWithRules g = t.sqlrel_to_dl(rel, vars);
            scope.columns.push_back(vars);
            std::vector<ColumnType> types;
            for (const auto& c : rel.schema.columns) types.push_back(c.type);
            scope.types.push_back(std::move(types));
            for (auto& goal : g.goals) scope.base.push_back(std::move(goal));
            for (auto& r : g.rules) aux.push_back(std::move(r));
        }
        Atom head{name, {}};
        for (const auto& item : s.projection) head.args.push_back(operand_term(item, scope.columns));
        Rule main = make_rule(std::move(head), scope.base);
        if (s.where) apply_condition(main, scope, nnf(*s.where), aux);
        std::vector<Rule> out{std::move(main)};
        for (auto& r : aux) out.push_back(std::move(r));
        return out;
    }

    // Equalities become shared variables or constants; everything else is
    // appended to the rule body.
    void apply_condition(Rule& rule, Scope scope, const RCondition& cond, std::vector<Rule>& aux) {
        std::vector<RCondition> conjuncts;
        flatten_and(cond, conjuncts);
        Classes classes;
        std::vector<RCondition> rest;
        for (const auto& c : conjuncts) {
            const auto* cmp = std::get_if<RCompare>(&c.node);
            if (!cmp || cmp->op != CompareOp::Eq || scope.types.empty() ||
                operand_kind(cmp->lhs, scope) != operand_kind(cmp->rhs, scope)) {
                rest.push_back(c);
                continue;
            }
            Term l = operand_term(cmp->lhs, scope.columns);
            Term r = operand_term(cmp->rhs, scope.columns);
            bool lv = datalog::is_variable(l), rv = datalog::is_variable(r);
            if (lv && rv) {
                classes.unite(datalog::as_variable(l).name, datalog::as_variable(r).name);
            } else if (lv || rv) {
                classes.bind(datalog::as_variable(lv ? l : r).name, datalog::as_constant(lv ? r : l));
            } else {
                rest.push_back(c);
            }
        }
        auto theta = classes.substitution(datalog::variables_of(rule));
        rule = datalog::apply_substitution(rule, theta);
        for (auto& cols : scope.columns)
            for (auto& term : cols) term = datalog::apply_substitution(term, theta);
        for (auto& g : scope.base) g = datalog::apply_substitution(g, theta);
        for (auto& g : classes.conflicts) rule.body.push_back(g);
        for (const auto& c : rest) {
            GoalWithRules g = conjunct(c, scope);
            for (auto& goal : g.goals) rule.body.push_back(std::move(goal));
            for (auto& r : g.rules) aux.push_back(std::move(r));
        }
    }

    GoalWithRules conjunct(const RCondition& c, const Scope& scope) {
        GoalWithRules out;
        if (const auto* cmp = std::get_if<RCompare>(&c.node)) {
            out.goals.push_back(Goal::compare(cmp->op, operand_term(cmp->lhs, scope.columns),
                                              operand_term(cmp->rhs, scope.columns)));
        } else if (const auto* in = std::get_if<RIn>(&c.node)) {
            std::string sub = t.fresh_goal();
            t.auxiliary_.insert(sub);
            out.rules = query(sub, *in->query);
            Atom member{sub, {}};
            for (const auto& o : in->lhs) member.args.push_back(operand_term(o, scope.columns));
            if (in->negated) {
                out.goals.push_back(Goal::negation(Goal::atom(member)));
            } else {
                // Semi-join: keep the row once if its values occur in the
                // subquery, whatever their multiplicity there.
                std::string missing = t.fresh_goal();
                t.auxiliary_.insert(missing);
                std::vector<Term> vars;
                for (const auto& a : member.args) add_distinct_vars(a, vars);
                Atom head{missing, vars};
                std::vector<Goal> body = scope.base;
                body.push_back(Goal::negation(Goal::atom(member)));
                out.rules.push_back(make_rule(head, std::move(body)));
                out.goals.push_back(Goal::negation(Goal::atom(head)));
            }
        } else if (std::holds_alternative<ROr>(c.node)) {
            std::string name = t.fresh_goal();
            t.auxiliary_.insert(name);
            // Rows with no satisfied disjunct; the row itself is then kept
            // once by negation, whatever the multiplicity of its values.
            Atom head{name, distinct_vars(scope.base)};
            Rule r = make_rule(head, scope.base);
            std::vector<Rule> aux;
            apply_condition(r, scope, nnf(negated(c)), aux);
            out.rules.push_back(std::move(r));
            for (auto& a : aux) out.rules.push_back(std::move(a));
            out.goals.push_back(Goal::negation(Goal::atom(head)));
        } else {
            // AND/NOT never reach here after nnf + flatten.
            throw Error("InternalError", "unexpected condition shape");
        }
        return out;
    }

    // ---- UNION ALL ------------------------------------------------------

    std::vector<Rule> node(const std::string& name, const RUnionAll& u, const RQuery&) {
        auto out = query(name, *u.left);
        auto right = query(name, *u.right);
        for (auto& r : right) out.push_back(std::move(r));
        return out;
    }

    // ---- WITH / ASSUME --------------------------------------------------

    std::vector<Rule> hypothetical(const std::string& name, std::vector<Rule> antecedent,
                                   const RQuery& body, std::size_t arity) {
        std::string s = t.fresh_goal();
        t.auxiliary_.insert(s);
        auto vars = fresh_vars(arity);
        Goal impl = Goal::implication(std::move(antecedent), Goal::atom(Atom{s, vars}));
        std::vector<Rule> out{make_rule(Atom{name, vars}, {std::move(impl)})};
        for (auto& r : query(s, body)) out.push_back(std::move(r));
        return out;
    }

    std::vector<Rule> node(const std::string& name, const RWith& w, const RQuery& q) {
        std::vector<Rule> antecedent;
        for (const auto& def : w.defs) {
            std::string pred = t.predicate(def.binding);
            for (auto& r : query(pred, *def.query)) antecedent.push_back(std::move(r));
        }
        return hypothetical(name, std::move(antecedent), *w.body, q.schema.arity());
    }

    std::vector<Rule> node(const std::string& name, const RAssume& a, const RQuery& q) {
        std::vector<Rule> antecedent;
        for (const auto& as : a.assumptions) {
            std::string pred = t.predicate(as.target);
            bool saved = t.in_assumption_;
            t.in_assumption_ = true;
            std::vector<Rule> rules;
            try {
                rules = query(pred, *as.source);
            } catch (...) {
                t.in_assumption_ = saved;
                throw;
            }
            t.in_assumption_ = saved;
            for (auto& r : rules) {
                if (as.polarity == Polarity::NotIn && r.head.predicate == pred)
                    r.sign = HeadSign::Restricting;
                antecedent.push_back(std::move(r));
            }
        }
        return hypothetical(name, std::move(antecedent), *a.body, q.schema.arity());
    }
};

Translator::Translator(const ResolvedQuery& q, std::set<std::string> reserved)
    : q_(q), used_(std::move(reserved)) {
    used_.insert("answer");
    for (BindingId b = 0; b < q.bindings.size(); ++b) {
        if (q.bindings[b].kind == Binding::Kind::Table) {
            used_.insert(q.bindings[b].name);
            names_[b] = q.bindings[b].name;
        }
    }
}

std::string Translator::fresh_goal() {
    std::string name;
    do {
        name = "goal" + std::to_string(++goal_counter_);
    } while (used_.count(name));
    used_.insert(name);
    return name;
}

Term Translator::fresh_var() { return Variable{"V" + std::to_string(++var_counter_)}; }

RuleId Translator::next_id() {
    return RuleId{in_assumption_ ? RuleOrigin::Assumption : RuleOrigin::Translator, ++rule_counter_};
}

std::string Translator::predicate(BindingId b) {
    auto it = names_.find(b);
    if (it != names_.end()) return it->second;
    const std::string& wanted = q_.bindings.at(b).name;
    std::string name = used_.count(wanted) ? fresh_goal() : wanted;
    used_.insert(name);
    names_[b] = name;
    return name;
}

Translation Translator::sql_to_dl(const std::string& name) {
    used_.insert(name);
    Translation out;
    out.program.rules = sql_to_dl(name, q_.root);
    out.answer = name;
    out.arity = q_.root.schema.arity();
    out.schema = q_.root.schema;
    out.schema.relation = name;
    out.auxiliary = auxiliary_;
    return out;
}

std::vector<Rule> Translator::sql_to_dl(const std::string& name, const RQuery& q) {
    Impl impl{*this};
    return impl.query(name, q);
}

GoalWithRules Translator::sqlrel_to_dl(const RRelRef& rel, const std::vector<Term>& vars) {
    GoalWithRules out;
    if (const auto* b = std::get_if<BindingId>(&rel.source)) {
        out.goals.push_back(Goal::atom(Atom{predicate(*b), vars}));
        return out;
    }
    std::string name = fresh_goal();
    auxiliary_.insert(name);
    out.rules = sql_to_dl(name, *std::get<Box<RQuery>>(rel.source));
    out.goals.push_back(Goal::atom(Atom{name, vars}));
    return out;
}

GoalWithRules Translator::sqlcond_to_dl(const RCondition& c,
                                        const std::vector<std::vector<Term>>& columns,
                                        const std::vector<Goal>& base) {
    Impl impl{*this};
    Scope scope;
    scope.columns = columns;
    scope.base = base;
    GoalWithRules out;
    std::vector<RCondition> conjuncts;
    flatten_and(nnf(c), conjuncts);
    for (const auto& cj : conjuncts) {
        GoalWithRules g = impl.conjunct(cj, scope);
        for (auto& goal : g.goals) out.goals.push_back(std::move(goal));
        for (auto& r : g.rules) out.rules.push_back(std::move(r));
    }
    return out;
}

void safety_check(const Translation& t) { datalog::require_safe(t.program); }

Translation compile(const Query& q, const Catalog& catalog, const CompileOptions& options) {
    ResolvedQuery rq = resolve(q, catalog);
    Translator tr(rq, options.reserved);
    Translation t = tr.sql_to_dl(options.answer);
    t = options.simplify ? fold_unfold(std::move(t)) : normalize(std::move(t));
    safety_check(t);
    return t;
}

}  // namespace hypoteq::translator
