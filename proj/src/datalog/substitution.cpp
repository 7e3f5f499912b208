#include "hypoteq/datalog/substitution.hpp"

namespace hypoteq::datalog {

Term apply_substitution(const Term& t, const Substitution& s) {
    if (!is_variable(t)) return t;
    auto it = s.find(as_variable(t).name);
    return it == s.end() ? t : it->second;
}

Atom apply_substitution(const Atom& a, const Substitution& s) {
    Atom out{a.predicate, {}};
    out.args.reserve(a.args.size());
    for (const auto& t : a.args) out.args.push_back(apply_substitution(t, s));
    return out;
}

Goal apply_substitution(const Goal& g, const Substitution& s) {
    return std::visit(
        [&](const auto& n) -> Goal {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Atom>) {
                return Goal::atom(apply_substitution(n, s));
            } else if constexpr (std::is_same_v<T, Negation>) {
                return Goal::negation(apply_substitution(*n.inner, s));
            } else if constexpr (std::is_same_v<T, Implication>) {
                std::vector<Rule> ante;
                ante.reserve(n.antecedent.size());
                for (const auto& r : n.antecedent) ante.push_back(apply_substitution(r, s));
                return Goal::implication(std::move(ante), apply_substitution(*n.consequent, s));
            } else {
                return Goal::compare(n.op, apply_substitution(n.lhs, s),
                                     apply_substitution(n.rhs, s));
            }
        },
        g.node);
}

Rule apply_substitution(const Rule& r, const Substitution& s) {
    Rule out;
    out.sign = r.sign;
    out.id = r.id;
    out.head = apply_substitution(r.head, s);
    out.body.reserve(r.body.size());
    for (const auto& g : r.body) out.body.push_back(apply_substitution(g, s));
    return out;
}

Substitution compose(const Substitution& a, const Substitution& b) {
    Substitution out;
    for (const auto& [name, term] : a) out.emplace(name, apply_substitution(term, b));
    for (const auto& [name, term] : b) out.emplace(name, term);
    return out;
}

}  // namespace hypoteq::datalog
