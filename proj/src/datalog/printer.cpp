#include "hypoteq/datalog/printer.hpp"

namespace hypoteq::datalog {

std::string to_string(const Term& t) {
    if (is_variable(t)) return as_variable(t).name;
    return to_string(as_constant(t));
}

std::string to_string(const Atom& a) {
    std::string out = a.predicate;
    if (a.args.empty()) return out;
    out += '(';
    for (std::size_t i = 0; i < a.args.size(); ++i) {
        if (i) out += ',';
        out += to_string(a.args[i]);
    }
    return out + ')';
}

namespace {

std::string clause_text(const Rule& r);

std::string antecedent_text(const std::vector<Rule>& rules) {
    std::string out;
    for (std::size_t i = 0; i < rules.size(); ++i) {
        if (i) out += " /\\ ";
        if (rules[i].is_fact()) out += clause_text(rules[i]);
        else out += "(" + clause_text(rules[i]) + ")";
    }
    return out;
}

std::string goal_text(const Goal& g) {
    return std::visit(
        [](const auto& n) -> std::string {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Atom>) {
                return to_string(n);
            } else if constexpr (std::is_same_v<T, Negation>) {
                const Goal& inner = *n.inner;
                if (inner.is_atom() || inner.is_comparison()) return "not " + goal_text(inner);
                return "not (" + goal_text(inner) + ")";
            } else if constexpr (std::is_same_v<T, Implication>) {
                return antecedent_text(n.antecedent) + " => " + goal_text(*n.consequent);
            } else {
                return to_string(n.lhs) + " " + datalog_spelling(n.op) + " " + to_string(n.rhs);
            }
        },
        g.node);
}

// Clause without the terminating period.
std::string clause_text(const Rule& r) {
    std::string out = r.restricting() ? "-" : "";
    out += to_string(r.head);
    if (r.body.empty()) return out;
    out += " :- ";
    for (std::size_t i = 0; i < r.body.size(); ++i) {
        if (i) out += ", ";
        out += goal_text(r.body[i]);
    }
    return out;
}

// Session layout: facts share a line, each rule with a body gets its own.
std::string antecedent_lines(const std::vector<Rule>& rules) {
    std::string out;
    bool line_open = false;
    for (std::size_t i = 0; i < rules.size(); ++i) {
        bool fact = rules[i].is_fact();
        if (i) out += (fact && line_open) ? " /\\ " : " /\\\n  ";
        out += fact ? clause_text(rules[i]) : "(" + clause_text(rules[i]) + ")";
        line_open = fact;
    }
    return out;
}

bool has_implication(const Rule& r) {
    for (const auto& g : r.body)
        if (g.is_implication()) return true;
    return false;
}

}  // namespace

std::string to_string(const Goal& g) { return goal_text(g); }

std::string to_string(const Rule& r, Layout layout) {
    if (layout == Layout::SingleLine || !has_implication(r)) return clause_text(r) + ".";
    std::string out = r.restricting() ? "-" : "";
    out += to_string(r.head) + " :-";
    for (std::size_t i = 0; i < r.body.size(); ++i) {
        out += i ? ",\n  " : "\n  ";
        const Goal& g = r.body[i];
        if (g.is_implication()) {
            const auto& imp = g.as_implication();
            out += antecedent_lines(imp.antecedent) + "\n  =>\n  " + goal_text(*imp.consequent);
        } else {
            out += goal_text(g);
        }
    }
    return out + ".";
}

std::string to_string(const Program& p, Layout layout) {
    std::string out;
    for (const auto& r : p.rules) out += to_string(r, layout) + "\n";
    return out;
}

}  // namespace hypoteq::datalog
