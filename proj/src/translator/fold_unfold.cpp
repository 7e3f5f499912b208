#include <algorithm>
#include <functional>
#include <map>
#include <optional>

#include "hypoteq/datalog/substitution.hpp"
#include "hypoteq/translator/translator.hpp"

namespace hypoteq::translator {

using datalog::Atom;
using datalog::Implication;
using datalog::Negation;
using datalog::Substitution;
using datalog::Term;
using datalog::Variable;

namespace {

// ---- unification --------------------------------------------------------

Term walk(const Term& t, const Substitution& s) {
    Term cur = t;
    while (datalog::is_variable(cur)) {
        auto it = s.find(datalog::as_variable(cur).name);
        if (it == s.end()) break;
        cur = it->second;
    }
    return cur;
}

bool unify(const Atom& a, const Atom& b, Substitution& s) {
    if (a.predicate != b.predicate || a.arity() != b.arity()) return false;
    for (std::size_t i = 0; i < a.args.size(); ++i) {
        Term x = walk(a.args[i], s), y = walk(b.args[i], s);
        if (x == y) continue;
        if (datalog::is_variable(x)) {
            if (datalog::as_variable(x).anonymous()) continue;
            s[datalog::as_variable(x).name] = y;
        } else if (datalog::is_variable(y)) {
            if (datalog::as_variable(y).anonymous()) continue;
            s[datalog::as_variable(y).name] = x;
        } else {
            return false;
        }
    }
    return true;
}

Substitution resolved(const Substitution& s) {
    Substitution out;
    for (const auto& [v, t] : s) out[v] = walk(t, s);
    return out;
}

// One-way: instantiate `pattern` into `target` without touching target vars.
bool match(const Atom& pattern, const Atom& target, Substitution& s) {
    if (pattern.predicate != target.predicate || pattern.arity() != target.arity()) return false;
    for (std::size_t i = 0; i < pattern.args.size(); ++i) {
        const Term& p = pattern.args[i];
        const Term& t = target.args[i];
        if (!datalog::is_variable(p)) {
            if (!(p == t)) return false;
            continue;
        }
        const auto& name = datalog::as_variable(p).name;
        auto it = s.find(name);
        if (it == s.end()) s[name] = t;
        else if (!(it->second == t)) return false;
    }
    return true;
}

// ---- program walking ----------------------------------------------------

void each_rule_list(std::vector<Rule>& rules,
                    const std::function<void(std::vector<Rule>&)>& f);

void each_goal_list(Goal& g, const std::function<void(std::vector<Rule>&)>& f) {
    if (auto* imp = std::get_if<Implication>(&g.node)) {
        each_rule_list(imp->antecedent, f);
        Goal c = *imp->consequent;
        each_goal_list(c, f);
        imp->consequent = std::make_shared<const Goal>(std::move(c));
    } else if (auto* n = std::get_if<Negation>(&g.node)) {
        Goal inner = *n->inner;
        each_goal_list(inner, f);
        n->inner = std::make_shared<const Goal>(std::move(inner));
    }
}

void each_rule_list(std::vector<Rule>& rules,
                    const std::function<void(std::vector<Rule>&)>& f) {
    f(rules);
    for (auto& r : rules)
        for (auto& g : r.body) each_goal_list(g, f);
}

void count_uses(const Goal& g, std::map<std::string, int>& uses) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Atom>) {
                ++uses[n.predicate];
            } else if constexpr (std::is_same_v<T, Negation>) {
                count_uses(*n.inner, uses);
            } else if constexpr (std::is_same_v<T, Implication>) {
                for (const auto& r : n.antecedent)
                    for (const auto& b : r.body) count_uses(b, uses);
                count_uses(*n.consequent, uses);
            }
        },
        g.node);
}

std::map<std::string, int> uses_of(const std::vector<Rule>& rules) {
    std::map<std::string, int> uses;
    for (const auto& r : rules)
        for (const auto& g : r.body) count_uses(g, uses);
    return uses;
}

void definitions(const std::vector<Rule>& rules, std::map<std::string, std::vector<const Rule*>>& out) {
    for (const auto& r : rules) {
        out[r.head.predicate].push_back(&r);
        for (const auto& g : r.body) {
            std::function<void(const Goal&)> visit = [&](const Goal& goal) {
                if (const auto* imp = std::get_if<Implication>(&goal.node)) {
                    definitions(imp->antecedent, out);
                    visit(*imp->consequent);
                } else if (const auto* n = std::get_if<Negation>(&goal.node)) {
                    visit(*n->inner);
                }
            };
            visit(g);
        }
    }
}

bool mentions(const Rule& r, const std::string& pred) {
    bool found = false;
    for (const auto& g : r.body) {
        datalog::for_each_atom(g, [&](const Atom& a) { found = found || a.predicate == pred; });
    }
    return found;
}

class Unfolder {
public:
    Unfolder(const std::string& pred, Rule def, std::size_t& counter)
        : pred_(pred), def_(std::move(def)), counter_(counter) {}

    bool changed() const { return changed_; }

    void rewrite(std::vector<Rule>& rules) {
        for (auto& r : rules) rewrite_rule(r);
    }

private:
    Rule renamed_apart() {
        Substitution s;
        for (const auto& v : datalog::variables_of(def_)) {
            std::string prefix = Variable{v}.underscored() ? "_U" : "U";
            s[v] = Variable{prefix + std::to_string(++counter_)};
        }
        return datalog::apply_substitution(def_, s);
    }

    void rewrite_rule(Rule& r) {
        for (std::size_t i = 0; i < r.body.size(); ++i) {
            Goal& g = r.body[i];
            if (const auto* a = std::get_if<Atom>(&g.node)) {
                if (a->predicate != pred_) continue;
                Rule d = renamed_apart();
                Substitution s;
                if (!unify(d.head, *a, s)) continue;
                s = resolved(s);
                std::vector<Goal> body(r.body.begin(), r.body.begin() + i);
                for (const auto& b : d.body) body.push_back(b);
                body.insert(body.end(), r.body.begin() + i + 1, r.body.end());
                r.body = std::move(body);
                r = datalog::apply_substitution(r, s);
                changed_ = true;
                i = static_cast<std::size_t>(-1);
                continue;
            }
            if (auto replacement = negated_use(g)) {
                g = std::move(*replacement);
                changed_ = true;
                continue;
            }
            if (auto* imp = std::get_if<Implication>(&g.node)) {
                for (auto& ante : imp->antecedent) rewrite_rule(ante);
                const Goal& c = *imp->consequent;
                if (const auto* a = std::get_if<Atom>(&c.node);
                    a && a->predicate == pred_ && def_.body.size() == 1) {
                    Rule d = renamed_apart();
                    Substitution s;
                    if (unify(d.head, *a, s)) {
                        s = resolved(s);
                        imp->consequent = std::make_shared<const Goal>(d.body.front());
                        r = datalog::apply_substitution(r, s);
                        changed_ = true;
                    }
                } else if (auto replacement = negated_use(c)) {
                    imp->consequent = std::make_shared<const Goal>(std::move(*replacement));
                    changed_ = true;
                }
            }
        }
    }

    // not p(t) with p(X) :- q(X,Y) becomes not q(t,_Y).
    std::optional<Goal> negated_use(const Goal& g) {
        const auto* n = std::get_if<Negation>(&g.node);
        if (!n) return std::nullopt;
        const auto* a = std::get_if<Atom>(&n->inner->node);
        if (!a || a->predicate != pred_) return std::nullopt;
        if (def_.body.size() != 1 || !def_.body.front().is_atom()) return std::nullopt;
        Substitution s;
        if (!match(def_.head, *a, s)) return std::nullopt;
        for (const auto& v : datalog::variables_of(def_.body.front())) {
            if (!s.count(v)) s[v] = Variable{"_U" + std::to_string(++counter_)};
        }
        return Goal::negation(datalog::apply_substitution(def_.body.front(), s));
    }

    std::string pred_;
    Rule def_;
    bool changed_ = false;
    std::size_t& counter_;
};

std::string variable_name(std::size_t i) {
    std::string out(1, static_cast<char>('A' + i % 26));
    if (i >= 26) out += std::to_string(i / 26);
    return out;
}

Rule rename_variables(const Rule& r) {
    auto counts = datalog::variable_occurrences(r);
    Substitution s;
    std::size_t i = 0;
    for (const auto& v : datalog::variables_of(r)) {
        std::string name = variable_name(i++);
        if (Variable{v}.underscored() || counts[v] == 1) name = "_" + name;
        s[v] = Variable{name};
    }
    return datalog::apply_substitution(r, s);
}

void drop_unused(Translation& t) {
    for (bool changed = true; changed;) {
        changed = false;
        std::map<std::string, int> uses;
        each_rule_list(t.program.rules, [&](std::vector<Rule>& rules) {
            for (const auto& [p, n] : uses_of(rules)) uses[p] += n;
        });
        // each_rule_list visits nested lists; uses_of counts nested bodies
        // again from the outer list, which only over-counts.
        each_rule_list(t.program.rules, [&](std::vector<Rule>& rules) {
            auto before = rules.size();
            rules.erase(std::remove_if(rules.begin(), rules.end(),
                                       [&](const Rule& r) {
                                           return r.head.predicate != t.answer &&
                                                  t.auxiliary.count(r.head.predicate) &&
                                                  !uses.count(r.head.predicate);
                                       }),
                        rules.end());
            changed = changed || rules.size() != before;
        });
    }
}

}  // namespace

Translation normalize(Translation t) {
    std::vector<Rule> ordered;
    for (const auto& r : t.program.rules)
        if (r.head.predicate == t.answer) ordered.push_back(rename_variables(r));
    for (const auto& r : t.program.rules)
        if (r.head.predicate != t.answer) ordered.push_back(rename_variables(r));
    t.program.rules = std::move(ordered);
    return t;
}

Translation fold_unfold(Translation t) {
    std::size_t counter = 0;
    for (bool progress = true; progress;) {
        progress = false;
        for (const auto& pred : t.auxiliary) {
            // Rewriting replaces nested rule lists, so definitions are
            // collected afresh for every predicate.
            std::map<std::string, std::vector<const Rule*>> defs;
            definitions(t.program.rules, defs);
            auto it = defs.find(pred);
            if (it == defs.end() || it->second.size() != 1) continue;
            Rule def = *it->second.front();
            if (def.restricting() || mentions(def, pred)) continue;
            Unfolder u(pred, std::move(def), counter);
            each_rule_list(t.program.rules, [&](std::vector<Rule>& rules) {
                for (auto& r : rules) {
                    if (r.head.predicate == pred) continue;
                    std::vector<Rule> one{r};
                    u.rewrite(one);
                    r = std::move(one.front());
                }
            });
            if (u.changed()) {
                drop_unused(t);
                progress = true;
                break;
            }
        }
    }
    drop_unused(t);
    return normalize(std::move(t));
}

}  // namespace hypoteq::translator
