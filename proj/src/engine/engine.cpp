#include "hypoteq/engine/engine.hpp"

#include <deque>
#include <functional>
#include <optional>
#include <unordered_map>
#include <unordered_set>

#include "hypoteq/datalog/parser.hpp"
#include "hypoteq/datalog/printer.hpp"
#include "hypoteq/datalog/safety.hpp"
#include "hypoteq/datalog/wellformed.hpp"
#include "hypoteq/error.hpp"

namespace hypoteq::engine {

using datalog::CompareOp;
using datalog::Comparison;
using datalog::Implication;
using datalog::Negation;
using datalog::Term;
using datalog::TupleHash;
using datalog::Variable;

bool eval_comparison(CompareOp op, const Value& lhs, const Value& rhs) {
    int cmp;
    if (lhs.is_numeric() && rhs.is_numeric()) {
        if (lhs.is_int() && rhs.is_int()) {
            cmp = lhs.as_int() < rhs.as_int() ? -1 : (lhs.as_int() > rhs.as_int() ? 1 : 0);
        } else {
            double a = lhs.as_number(), b = rhs.as_number();
            cmp = a < b ? -1 : (a > b ? 1 : 0);
        }
    } else if (lhs.is_string() && rhs.is_string()) {
        int c = lhs.as_string().compare(rhs.as_string());
        cmp = c < 0 ? -1 : (c > 0 ? 1 : 0);
    } else {
        throw type_error("cannot compare " + datalog::to_string(lhs) + " with " +
                         datalog::to_string(rhs));
    }
    switch (op) {
        case CompareOp::Eq: return cmp == 0;
        case CompareOp::Ne: return cmp != 0;
        case CompareOp::Lt: return cmp < 0;
        case CompareOp::Le: return cmp <= 0;
        case CompareOp::Gt: return cmp > 0;
        case CompareOp::Ge: return cmp >= 0;
    }
    return false;
}

namespace {

struct Occurrence {
    FactId id;
    Label label;
};

struct Entry {
    Tuple tuple;
    std::vector<Occurrence> occ;
};

struct Relation {
    std::deque<Entry> entries;
    std::unordered_map<Tuple, std::size_t, TupleHash> index;
    // Tuples removed by restricting rules. Their entries stay for regular_meaning.
    std::unordered_set<Tuple, TupleHash> restricted;
    bool complete = false;

    Entry& entry(const Tuple& t, bool* created = nullptr) {
        auto it = index.find(t);
        if (it != index.end()) {
            if (created) *created = false;
            return entries[it->second];
        }
        index.emplace(t, entries.size());
        entries.push_back(Entry{t, {}});
        if (created) *created = true;
        return entries.back();
    }
};

struct Context {
    ContextId id = 0;
    std::optional<ContextId> parent;
    std::map<std::string, std::vector<const Rule*>> own;
    std::map<std::string, Relation> rels;
    std::set<std::size_t> in_progress;
    std::map<const void*, ContextId> children;
};

using Bindings = std::map<std::string, Value>;
using Support = std::vector<const Entry*>;
using Cont = std::function<bool()>;

}  // namespace

struct Engine::State {
    const db::DatabaseInstance& db;
    std::deque<Rule> owned;
    std::vector<const Rule*> top;
    std::map<std::string, std::size_t> arity;
    DependencyGraph graph;
    Stratification strat;
    std::map<std::string, std::set<std::string>> reach_cache;
    std::deque<Context> contexts;
    FactId next_id = 1;
    std::uint64_t aux_seq = 0;

    explicit State(const db::DatabaseInstance& d) : db(d) {}

    // ---- static checks ------------------------------------------------

    void check_rules(const std::vector<const Rule*>& rules) {
        auto known = arity;
        for (const Rule* r : rules) {
            datalog::for_each_atom(*r, [&](const Atom& a) {
                auto [it, inserted] = known.emplace(a.predicate, a.arity());
                if (!inserted && it->second != a.arity())
                    throw ArityMismatch(a.predicate, a.arity(), it->second);
            });
        }
        for (const Rule* r : rules) {
            if (auto bad = datalog::find_unsafe(*r)) {
                std::string vars;
                for (const auto& v : bad->variables) vars += (vars.empty() ? "" : ", ") + v;
                throw Error("UnsafeRule", "unsafe rule " +
                                              datalog::to_string(bad->rule,
                                                                 datalog::Layout::SingleLine) +
                                              " (variables: " + vars + ")");
            }
        }
        DependencyGraph g = graph;
        for (const Rule* r : rules) g.add_rule(*r);
        Stratification st = stratify(g);
        arity = std::move(known);
        graph = std::move(g);
        strat = std::move(st);
        reach_cache.clear();
    }

    const std::set<std::string>& reach(const std::string& p) {
        auto it = reach_cache.find(p);
        if (it != reach_cache.end()) return it->second;
        std::set<std::string> seen{p};
        std::vector<std::string> stack{p};
        while (!stack.empty()) {
            std::string cur = stack.back();
            stack.pop_back();
            auto e = graph.edges.find(cur);
            if (e == graph.edges.end()) continue;
            for (const auto& [next, neg] : e->second) {
                if (seen.insert(next).second) stack.push_back(next);
            }
        }
        return reach_cache.emplace(p, std::move(seen)).first->second;
    }

    // ---- contexts -----------------------------------------------------

    ContextId new_context(std::optional<ContextId> parent, const std::vector<const Rule*>& rules) {
        Context c;
        c.id = contexts.size();
        c.parent = parent;
        for (const Rule* r : rules) c.own[r->head.predicate].push_back(r);
        contexts.push_back(std::move(c));
        return contexts.back().id;
    }

    bool in_chain(ContextId c, const Rule* r) const {
        for (std::optional<ContextId> cur = c; cur; cur = contexts[*cur].parent) {
            auto it = contexts[*cur].own.find(r->head.predicate);
            if (it == contexts[*cur].own.end()) continue;
            for (const Rule* x : it->second)
                if (x == r) return true;
        }
        return false;
    }

    ContextId child(ContextId c, const Implication* impl) {
        auto found = contexts[c].children.find(impl);
        if (found != contexts[c].children.end()) return found->second;
        std::vector<const Rule*> fresh;
        for (const Rule& r : impl->antecedent)
            if (!in_chain(c, &r)) fresh.push_back(&r);
        ContextId id = fresh.empty() ? c : new_context(c, fresh);
        contexts[c].children[impl] = id;
        return id;
    }

    bool needs_local(const std::string& p, const Context& c) {
        if (!c.parent) return true;
        for (const auto& q : reach(p))
            if (c.own.count(q)) return true;
        return false;
    }

    ContextId owner(const std::string& p, ContextId c) {
        while (!needs_local(p, contexts[c])) c = *contexts[c].parent;
        return c;
    }

    std::vector<const Rule*> rules_for(const std::string& p, ContextId c) const {
        std::vector<const Rule*> out;
        for (std::optional<ContextId> cur = c; cur; cur = contexts[*cur].parent) {
            auto it = contexts[*cur].own.find(p);
            if (it != contexts[*cur].own.end())
                out.insert(out.end(), it->second.begin(), it->second.end());
        }
        return out;
    }

    // ---- relations ----------------------------------------------------

    Relation& relation(const std::string& p, ContextId requester) {
        ContextId c = owner(p, requester);
        Context& ctx = contexts[c];
        auto comp = strat.component_of.find(p);
        if (comp == strat.component_of.end()) {
            Relation& r = ctx.rels[p];
            r.complete = true;
            return r;
        }
        auto it = ctx.rels.find(p);
        if (it != ctx.rels.end() && it->second.complete) return it->second;
        if (ctx.in_progress.count(comp->second)) {
            if (c != requester || !strat.recursive.count(comp->second))
                throw unsupported_feature("recursion through an embedded implication involving '" +
                                          p + "'");
            return ctx.rels[p];
        }
        evaluate_component(comp->second, c);
        return ctx.rels.at(p);
    }

    struct ProgressGuard {
        std::set<std::size_t>& set;
        std::size_t id;
        ~ProgressGuard() { set.erase(id); }
    };

    Label stored_label(std::uint64_t row) const { return Label{RuleId{}, row, {}}; }

    void evaluate_component(std::size_t comp, ContextId c) {
        contexts[c].in_progress.insert(comp);
        ProgressGuard guard{contexts[c].in_progress, comp};
        bool recursive = strat.recursive.count(comp) != 0;

        std::vector<std::string> members;
        for (const auto& m : strat.components[comp]) {
            auto it = contexts[c].rels.find(m);
            if (it == contexts[c].rels.end() || !it->second.complete) members.push_back(m);
        }
        for (const auto& m : members) {
            contexts[c].rels[m] = Relation{};
            std::unordered_set<Tuple, TupleHash> restricted;
            for (const Rule* r : rules_for(m, c)) {
                if (!r->restricting()) continue;
                solve_rule(*r, c, [&](const Bindings& b, const Support&) {
                    restricted.insert(instantiate(r->head, b));
                });
            }
            Relation& rel = contexts[c].rels[m];
            rel.restricted = std::move(restricted);
            if (const db::Table* t = db.table(m)) {
                for (const auto& row : t->rows) {
                    bool created = false;
                    Entry& e = rel.entry(row.values, &created);
                    if (recursive && !created) continue;
                    e.occ.push_back(Occurrence{next_id++, stored_label(row.label)});
                }
            }
        }

        if (!recursive) {
            for (const auto& m : members) {
                for (const Rule* r : rules_for(m, c)) {
                    if (r->restricting()) continue;
                    solve_rule(*r, c, [&](const Bindings& b, const Support& sup) {
                        Relation& rel = contexts[c].rels[m];
                        Entry& e = rel.entry(instantiate(r->head, b));
                        std::vector<FactId> ids;
                        add_products(e, *r, sup, 0, ids);
                    });
                }
            }
        } else {
            for (bool changed = true; changed;) {
                changed = false;
                for (const auto& m : members) {
                    for (const Rule* r : rules_for(m, c)) {
                        if (r->restricting()) continue;
                        solve_rule(*r, c, [&](const Bindings& b, const Support& sup) {
                            Relation& rel = contexts[c].rels[m];
                            Tuple t = instantiate(r->head, b);
                            if (rel.index.count(t)) return;
                            std::vector<FactId> ids;
                            for (const Entry* s : sup) ids.push_back(s->occ.front().id);
                            Entry& e = rel.entry(t);
                            e.occ.push_back(Occurrence{next_id++, Label{r->id, 0, std::move(ids)}});
                            changed = true;
                        });
                    }
                }
            }
        }
        for (const auto& m : members) contexts[c].rels[m].complete = true;
    }

    void add_products(Entry& e, const Rule& r, const Support& sup, std::size_t i,
                      std::vector<FactId>& ids) {
        if (i == sup.size()) {
            e.occ.push_back(Occurrence{next_id++, Label{r.id, 0, ids}});
            return;
        }
        for (const auto& o : sup[i]->occ) {
            ids.push_back(o.id);
            add_products(e, r, sup, i + 1, ids);
            ids.pop_back();
        }
    }

    // ---- goals --------------------------------------------------------

    static std::optional<Value> value_of(const Term& t, const Bindings& b) {
        if (!datalog::is_variable(t)) return datalog::as_constant(t);
        const auto& v = datalog::as_variable(t);
        if (v.anonymous()) return std::nullopt;
        auto it = b.find(v.name);
        if (it == b.end()) return std::nullopt;
        return it->second;
    }

    static Tuple instantiate(const Atom& a, const Bindings& b) {
        Tuple t;
        t.reserve(a.args.size());
        for (const auto& arg : a.args) {
            auto v = value_of(arg, b);
            if (!v)
                throw Error("UnsafeRule", "head " + datalog::to_string(a) + " is not ground");
            t.push_back(std::move(*v));
        }
        return t;
    }

    static bool match(const Atom& a, const Tuple& t, Bindings& b, std::vector<std::string>& bound) {
        for (std::size_t i = 0; i < a.args.size(); ++i) {
            const Term& arg = a.args[i];
            if (!datalog::is_variable(arg)) {
                if (!(datalog::as_constant(arg) == t[i])) return false;
                continue;
            }
            const auto& v = datalog::as_variable(arg);
            if (v.anonymous()) continue;
            auto it = b.find(v.name);
            if (it != b.end()) {
                if (!(it->second == t[i])) return false;
                continue;
            }
            b.emplace(v.name, t[i]);
            bound.push_back(v.name);
        }
        return true;
    }

    static bool pending(const std::string& v, const std::vector<const Goal*>& goals,
                        const std::vector<char>& used, std::size_t self, const Atom* head) {
        if (head) {
            for (const auto& x : datalog::variables_of(*head))
                if (x == v) return true;
        }
        for (std::size_t i = 0; i < goals.size(); ++i) {
            if (i == self || used[i]) continue;
            for (const auto& x : datalog::variables_of(*goals[i]))
                if (x == v) return true;
        }
        return false;
    }

    static std::size_t choose(const std::vector<const Goal*>& goals, const std::vector<char>& used,
                              const Bindings& b, const Atom* head) {
        bool any = false;
        for (std::size_t i = 0; i < goals.size(); ++i) {
            if (used[i]) continue;
            any = true;
            const Goal& g = *goals[i];
            if (const auto* c = std::get_if<Comparison>(&g.node)) {
                bool l = value_of(c->lhs, b).has_value();
                bool r = value_of(c->rhs, b).has_value();
                if (l && r) return i;
                if (c->op == CompareOp::Eq && (l || r)) {
                    const Term& other = l ? c->rhs : c->lhs;
                    if (datalog::is_variable(other) && !datalog::as_variable(other).anonymous())
                        return i;
                }
            } else if (const auto* n = std::get_if<Negation>(&g.node)) {
                bool ready = true;
                for (const auto& v : datalog::variables_of(*n->inner)) {
                    if (!b.count(v) && pending(v, goals, used, i, head)) {
                        ready = false;
                        break;
                    }
                }
                if (ready) return i;
            }
        }
        if (!any) return goals.size();
        for (std::size_t i = 0; i < goals.size(); ++i) {
            if (!used[i] && (goals[i]->is_atom() || goals[i]->is_implication())) return i;
        }
        for (std::size_t i = 0; i < goals.size(); ++i) {
            if (!used[i])
                throw Error("UnsafeRule", "goal " + datalog::to_string(*goals[i]) +
                                              " cannot be evaluated: unbound variables");
        }
        return goals.size();
    }

    bool solve(ContextId c, const std::vector<const Goal*>& goals, std::vector<char>& used,
               Bindings& b, Support& sup, const Atom* head, const Cont& k) {
        std::size_t pick = choose(goals, used, b, head);
        if (pick == goals.size()) return k();
        used[pick] = 1;
        bool stop = false;
        const Goal& g = *goals[pick];
        if (const auto* a = std::get_if<Atom>(&g.node)) {
            Relation& rel = relation(a->predicate, c);
            for (std::size_t i = 0; i < rel.entries.size() && !stop; ++i) {
                const Entry& e = rel.entries[i];
                if (!rel.restricted.empty() && rel.restricted.count(e.tuple)) continue;
                std::vector<std::string> bound;
                if (match(*a, e.tuple, b, bound)) {
                    sup.push_back(&e);
                    stop = solve(c, goals, used, b, sup, head, k);
                    sup.pop_back();
                }
                for (const auto& v : bound) b.erase(v);
            }
        } else if (const auto* cmp = std::get_if<Comparison>(&g.node)) {
            auto l = value_of(cmp->lhs, b);
            auto r = value_of(cmp->rhs, b);
            if (l && r) {
                if (eval_comparison(cmp->op, *l, *r)) stop = solve(c, goals, used, b, sup, head, k);
            } else {
                const Term& free = l ? cmp->rhs : cmp->lhs;
                const std::string& name = datalog::as_variable(free).name;
                b.emplace(name, l ? *l : *r);
                stop = solve(c, goals, used, b, sup, head, k);
                b.erase(name);
            }
        } else if (const auto* n = std::get_if<Negation>(&g.node)) {
            if (!has_solution(c, *n->inner, b)) stop = solve(c, goals, used, b, sup, head, k);
        } else {
            const auto& impl = std::get<Implication>(g.node);
            ContextId ch = child(c, &impl);
            std::vector<const Goal*> inner{impl.consequent.get()};
            std::vector<char> inner_used(1, 0);
            stop = solve(ch, inner, inner_used, b, sup, nullptr,
                         [&] { return solve(c, goals, used, b, sup, head, k); });
        }
        used[pick] = 0;
        return stop;
    }

    bool has_solution(ContextId c, const Goal& g, const Bindings& b) {
        Bindings local = b;
        Support sup;
        std::vector<const Goal*> goals{&g};
        std::vector<char> used(1, 0);
        return solve(c, goals, used, local, sup, nullptr, [] { return true; });
    }

    void solve_rule(const Rule& r, ContextId c,
                    const std::function<void(const Bindings&, const Support&)>& emit) {
        std::vector<const Goal*> goals;
        for (const auto& g : r.body) goals.push_back(&g);
        std::vector<char> used(goals.size(), 0);
        Bindings b;
        Support sup;
        solve(c, goals, used, b, sup, &r.head, [&] {
            emit(b, sup);
            return false;
        });
    }

    // ---- results ------------------------------------------------------

    std::vector<LabeledFact> facts(const Atom& pattern, ContextId c, bool include_restricted) {
        ContextId own = owner(pattern.predicate, c);
        Relation& rel = relation(pattern.predicate, c);
        std::vector<LabeledFact> out;
        for (const auto& e : rel.entries) {
            if (!include_restricted && rel.restricted.count(e.tuple)) continue;
            if (e.tuple.size() != pattern.args.size()) continue;
            Bindings b;
            std::vector<std::string> bound;
            if (!match(pattern, e.tuple, b, bound)) continue;
            for (const auto& o : e.occ) {
                Atom fact{pattern.predicate, {}};
                for (const auto& v : e.tuple) fact.args.push_back(v);
                out.push_back(LabeledFact{std::move(fact), o.label, o.id, own});
            }
        }
        return out;
    }

    Atom open_pattern(const std::string& pred) const {
        Atom a{pred, {}};
        auto it = arity.find(pred);
        std::size_t n = it == arity.end() ? 0 : it->second;
        for (std::size_t i = 0; i < n; ++i) a.args.push_back(Variable{"_"});
        return a;
    }
};

Engine::Engine(const db::DatabaseInstance& db, Program extra) : s_(std::make_unique<State>(db)) {
    for (const auto& [name, n] : db.arities()) s_->arity[name] = n;
    for (const auto& [name, t] : db.tables()) s_->graph.nodes.insert(name);
    for (auto& r : extra.rules) s_->owned.push_back(std::move(r));
    for (const auto& r : db.rules()) s_->top.push_back(&r);
    for (const auto& r : s_->owned) s_->top.push_back(&r);
    s_->check_rules(s_->top);
    s_->new_context(std::nullopt, s_->top);
}

Engine::~Engine() = default;

const Stratification& Engine::stratification() const { return s_->strat; }

std::size_t Engine::context_count() const { return s_->contexts.size(); }

std::vector<LabeledFact> Engine::solve(const Atom& goal, ContextId ctx) {
    return s_->facts(goal, ctx, false);
}

ContextId Engine::assume(ContextId ctx, std::vector<Rule> rules) {
    if (ctx >= s_->contexts.size()) throw Error("InvalidContext", "no such context");
    std::vector<const Rule*> ptrs;
    std::size_t first = s_->owned.size();
    for (auto& r : rules) s_->owned.push_back(std::move(r));
    for (std::size_t i = first; i < s_->owned.size(); ++i) ptrs.push_back(&s_->owned[i]);
    try {
        s_->check_rules(ptrs);
    } catch (...) {
        s_->owned.resize(first);
        throw;
    }
    return s_->new_context(ctx, ptrs);
}

std::vector<LabeledFact> Engine::eval_implication(std::vector<Rule> ante, const Goal& conseq,
                                                  ContextId ctx) {
    if (ante.empty()) throw Error("NotWellFormed", "implication without antecedent");
    auto conseq_vars = datalog::variables_of(conseq);
    for (const auto& r : ante) {
        for (const auto& v : datalog::variables_of(r)) {
            for (const auto& w : conseq_vars) {
                if (v == w)
                    throw Error("NotWellFormed",
                                "assumed rule shares variable " + v + " with the consequent");
            }
        }
    }
    auto violations = datalog::check_wellformed(Program{ante});
    if (!violations.empty()) throw Error("NotWellFormed", violations.front().message);
    if (conseq.is_atom()) {
        ContextId child = assume(ctx, std::move(ante));
        return solve(conseq.as_atom(), child);
    }
    Atom head{"$consequent" + std::to_string(++s_->aux_seq), {}};
    for (const auto& v : conseq_vars) {
        if (!Variable{v}.underscored()) head.args.push_back(Variable{v});
    }
    ante.push_back(Rule{datalog::HeadSign::Regular, head, {conseq},
                        RuleId{datalog::RuleOrigin::Assumption, 0}});
    ContextId child = assume(ctx, std::move(ante));
    return solve(head, child);
}

std::vector<LabeledFact> Engine::regular_meaning(const std::string& pred, ContextId ctx) {
    return s_->facts(s_->open_pattern(pred), ctx, true);
}

std::vector<LabeledFact> Engine::restricted_meaning(const std::string& pred, ContextId ctx) {
    return s_->facts(s_->open_pattern(pred), ctx, false);
}

}  // namespace hypoteq::engine
