#include "hypoteq/datalog/ast.hpp"

#include <algorithm>

namespace hypoteq::datalog {

CompareOp negate(CompareOp op) {
    switch (op) {
        case CompareOp::Eq: return CompareOp::Ne;
        case CompareOp::Ne: return CompareOp::Eq;
        case CompareOp::Lt: return CompareOp::Ge;
        case CompareOp::Le: return CompareOp::Gt;
        case CompareOp::Gt: return CompareOp::Le;
        case CompareOp::Ge: return CompareOp::Lt;
    }
    return op;
}

CompareOp mirror(CompareOp op) {
    switch (op) {
        case CompareOp::Lt: return CompareOp::Gt;
        case CompareOp::Le: return CompareOp::Ge;
        case CompareOp::Gt: return CompareOp::Lt;
        case CompareOp::Ge: return CompareOp::Le;
        default: return op;
    }
}

const char* datalog_spelling(CompareOp op) {
    switch (op) {
        case CompareOp::Eq: return "=";
        case CompareOp::Ne: return "\\=";
        case CompareOp::Lt: return "<";
        case CompareOp::Le: return "=<";
        case CompareOp::Gt: return ">";
        case CompareOp::Ge: return ">=";
    }
    return "?";
}

Goal Goal::negation(Goal inner) {
    return Goal{Negation{std::make_shared<const Goal>(std::move(inner))}};
}

Goal Goal::implication(std::vector<Rule> antecedent, Goal consequent) {
    return Goal{Implication{std::move(antecedent),
                            std::make_shared<const Goal>(std::move(consequent))}};
}

bool operator==(const Negation& a, const Negation& b) { return *a.inner == *b.inner; }

bool operator==(const Implication& a, const Implication& b) {
    return a.antecedent == b.antecedent && *a.consequent == *b.consequent;
}

bool operator==(const Goal& a, const Goal& b) { return a.node == b.node; }

bool operator==(const Rule& a, const Rule& b) {
    return a.sign == b.sign && a.head == b.head && a.body == b.body;
}

bool operator==(const Program& a, const Program& b) { return a.rules == b.rules; }

void for_each_atom(const Goal& g, const std::function<void(const Atom&)>& f) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Atom>) {
                f(n);
            } else if constexpr (std::is_same_v<T, Negation>) {
                for_each_atom(*n.inner, f);
            } else if constexpr (std::is_same_v<T, Implication>) {
                for (const auto& r : n.antecedent) for_each_atom(r, f);
                for_each_atom(*n.consequent, f);
            }
        },
        g.node);
}

void for_each_atom(const Rule& r, const std::function<void(const Atom&)>& f) {
    f(r.head);
    for (const auto& g : r.body) for_each_atom(g, f);
}

namespace {

void nested_rules(const Goal& g, const std::function<void(const Rule&)>& f) {
    if (g.is_negation()) {
        nested_rules(*g.as_negation().inner, f);
    } else if (g.is_implication()) {
        const auto& imp = g.as_implication();
        for (const auto& r : imp.antecedent) {
            f(r);
            for_each_nested_rule(r, f);
        }
        nested_rules(*imp.consequent, f);
    }
}

void collect_term(const Term& t, std::vector<std::string>& out) {
    if (!is_variable(t)) return;
    const auto& v = as_variable(t);
    if (v.anonymous()) return;
    if (std::find(out.begin(), out.end(), v.name) == out.end()) out.push_back(v.name);
}

void collect_goal(const Goal& g, std::vector<std::string>& out);

void collect_rule(const Rule& r, std::vector<std::string>& out) {
    for (const auto& t : r.head.args) collect_term(t, out);
    for (const auto& g : r.body) collect_goal(g, out);
}

void collect_goal(const Goal& g, std::vector<std::string>& out) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Atom>) {
                for (const auto& t : n.args) collect_term(t, out);
            } else if constexpr (std::is_same_v<T, Negation>) {
                collect_goal(*n.inner, out);
            } else if constexpr (std::is_same_v<T, Implication>) {
                for (const auto& r : n.antecedent) collect_rule(r, out);
                collect_goal(*n.consequent, out);
            } else {
                collect_term(n.lhs, out);
                collect_term(n.rhs, out);
            }
        },
        g.node);
}

void count_term(const Term& t, std::map<std::string, int>& out) {
    if (is_variable(t) && !as_variable(t).anonymous()) ++out[as_variable(t).name];
}

void count_goal(const Goal& g, std::map<std::string, int>& out);

void count_rule(const Rule& r, std::map<std::string, int>& out) {
    for (const auto& t : r.head.args) count_term(t, out);
    for (const auto& g : r.body) count_goal(g, out);
}

void count_goal(const Goal& g, std::map<std::string, int>& out) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Atom>) {
                for (const auto& t : n.args) count_term(t, out);
            } else if constexpr (std::is_same_v<T, Negation>) {
                count_goal(*n.inner, out);
            } else if constexpr (std::is_same_v<T, Implication>) {
                for (const auto& r : n.antecedent) count_rule(r, out);
                count_goal(*n.consequent, out);
            } else {
                count_term(n.lhs, out);
                count_term(n.rhs, out);
            }
        },
        g.node);
}

}  // namespace

void for_each_nested_rule(const Rule& r, const std::function<void(const Rule&)>& f) {
    for (const auto& g : r.body) nested_rules(g, f);
}

std::vector<std::string> variables_of(const Rule& r) {
    std::vector<std::string> out;
    collect_rule(r, out);
    return out;
}

std::vector<std::string> variables_of(const Goal& g) {
    std::vector<std::string> out;
    collect_goal(g, out);
    return out;
}

std::vector<std::string> variables_of(const Atom& a) {
    std::vector<std::string> out;
    for (const auto& t : a.args) collect_term(t, out);
    return out;
}

std::map<std::string, int> variable_occurrences(const Rule& r) {
    std::map<std::string, int> out;
    count_rule(r, out);
    return out;
}

bool is_ground(const Atom& a) {
    return std::none_of(a.args.begin(), a.args.end(), is_variable);
}

}  // namespace hypoteq::datalog
