#include "hypoteq/datalog/safety.hpp"

#include <map>
#include <set>

#include "hypoteq/datalog/printer.hpp"

namespace hypoteq::datalog {

namespace {

using VarSet = std::set<std::string>;

void add_term(const Term& t, VarSet& out) {
    if (is_variable(t) && !as_variable(t).anonymous()) out.insert(as_variable(t).name);
}

// Variables of a goal at its own level: antecedent rules have local scope.
void scope_vars(const Goal& g, VarSet& out) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Atom>) {
                for (const auto& t : n.args) add_term(t, out);
            } else if constexpr (std::is_same_v<T, Negation>) {
                scope_vars(*n.inner, out);
            } else if constexpr (std::is_same_v<T, Implication>) {
                scope_vars(*n.consequent, out);
            } else {
                add_term(n.lhs, out);
                add_term(n.rhs, out);
            }
        },
        g.node);
}

void count_scope(const Goal& g, std::map<std::string, int>& out) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            auto term = [&](const Term& t) {
                if (is_variable(t) && !as_variable(t).anonymous()) ++out[as_variable(t).name];
            };
            if constexpr (std::is_same_v<T, Atom>) {
                for (const auto& t : n.args) term(t);
            } else if constexpr (std::is_same_v<T, Negation>) {
                count_scope(*n.inner, out);
            } else if constexpr (std::is_same_v<T, Implication>) {
                count_scope(*n.consequent, out);
            } else {
                term(n.lhs);
                term(n.rhs);
            }
        },
        g.node);
}

// Variables a goal binds when it succeeds.
void binders(const Goal& g, VarSet& out) {
    if (g.is_atom()) {
        for (const auto& t : g.as_atom().args) add_term(t, out);
    } else if (g.is_implication()) {
        binders(*g.as_implication().consequent, out);
    }
}

void propagate_equalities(const Goal& g, VarSet& bound, bool& changed) {
    if (g.is_implication()) {
        propagate_equalities(*g.as_implication().consequent, bound, changed);
        return;
    }
    if (!g.is_comparison()) return;
    const auto& c = g.as_comparison();
    if (c.op != CompareOp::Eq) return;
    auto is_bound = [&](const Term& t) {
        return !is_variable(t) || bound.count(as_variable(t).name) > 0;
    };
    auto bind = [&](const Term& t) {
        if (is_variable(t) && !as_variable(t).anonymous() &&
            bound.insert(as_variable(t).name).second)
            changed = true;
    };
    if (is_bound(c.lhs)) bind(c.rhs);
    if (is_bound(c.rhs)) bind(c.lhs);
}

// Collects variables that must be bound for goal `g` to be evaluable.
void requirements(const Goal& g, const VarSet& bound, const std::map<std::string, int>& total,
                  VarSet& unsafe) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Negation>) {
                VarSet inner;
                scope_vars(*n.inner, inner);
                std::map<std::string, int> local;
                count_scope(*n.inner, local);
                for (const auto& v : inner) {
                    if (bound.count(v)) continue;
                    bool existential = v.front() == '_' && local[v] == total.at(v);
                    if (!existential) unsafe.insert(v);
                }
            } else if constexpr (std::is_same_v<T, Implication>) {
                requirements(*n.consequent, bound, total, unsafe);
            } else if constexpr (std::is_same_v<T, Comparison>) {
                VarSet vs;
                add_term(n.lhs, vs);
                add_term(n.rhs, vs);
                for (const auto& v : vs)
                    if (!bound.count(v)) unsafe.insert(v);
            }
        },
        g.node);
}

std::optional<UnsafeRule> check_rule(const Rule& r) {
    VarSet unsafe;
    for (const auto& t : r.head.args)
        if (is_variable(t) && as_variable(t).anonymous()) unsafe.insert("_");

    VarSet bound;
    for (const auto& g : r.body) binders(g, bound);
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& g : r.body) propagate_equalities(g, bound, changed);
    }

    std::map<std::string, int> total;
    for (const auto& t : r.head.args)
        if (is_variable(t) && !as_variable(t).anonymous()) ++total[as_variable(t).name];
    for (const auto& g : r.body) count_scope(g, total);

    for (const auto& t : r.head.args) {
        if (is_variable(t) && !as_variable(t).anonymous() && !bound.count(as_variable(t).name))
            unsafe.insert(as_variable(t).name);
    }
    for (const auto& g : r.body) requirements(g, bound, total, unsafe);
    if (!unsafe.empty()) return UnsafeRule{r, {unsafe.begin(), unsafe.end()}};
    return std::nullopt;
}

std::optional<UnsafeRule> check_nested(const Goal& g) {
    if (g.is_negation()) return check_nested(*g.as_negation().inner);
    if (!g.is_implication()) return std::nullopt;
    const auto& imp = g.as_implication();
    for (const auto& r : imp.antecedent)
        if (auto u = find_unsafe(r)) return u;
    return check_nested(*imp.consequent);
}

}  // namespace

std::optional<UnsafeRule> find_unsafe(const Rule& r) {
    if (auto u = check_rule(r)) return u;
    for (const auto& g : r.body)
        if (auto u = check_nested(g)) return u;
    return std::nullopt;
}

std::optional<UnsafeRule> find_unsafe(const Program& p) {
    for (const auto& r : p.rules)
        if (auto u = find_unsafe(r)) return u;
    return std::nullopt;
}

void require_safe(const Program& p) {
    if (auto u = find_unsafe(p)) {
        std::string vars;
        for (const auto& v : u->variables) vars += (vars.empty() ? "" : ",") + v;
        throw Error("UnsafeRule", "unsafe rule '" + to_string(u->rule, Layout::SingleLine) +
                                      "': variables {" + vars + "} are not range-restricted");
    }
}

}  // namespace hypoteq::datalog
