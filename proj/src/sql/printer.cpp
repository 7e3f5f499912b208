#include <cctype>
#include <set>

#include "hypoteq/sql/parser.hpp"

namespace hypoteq::sql {

namespace {

std::string ident(const std::string& s) {
    static const std::set<std::string> keywords = {
        "select", "from", "where", "union", "all",    "with",   "as",     "assume", "in",
        "not",    "and",  "or",    "create", "table", "insert", "into",   "values", "drop",
        "group",  "order", "by",   "having", "distinct", "join", "on",    "exists", "limit",
        "intersect", "except", "inner", "left", "right", "outer", "full", "cross", "natural",
        "null", "is", "between", "like", "case", "when", "then", "else", "end", "view"};
    bool simple = !s.empty() && (std::islower(static_cast<unsigned char>(s[0])) || s[0] == '_');
    for (char c : s)
        if (!(std::islower(static_cast<unsigned char>(c)) ||
              std::isdigit(static_cast<unsigned char>(c)) || c == '_' || c == '$'))
            simple = false;
    if (simple && !keywords.count(s)) return s;
    std::string out = "\"";
    for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

std::string operand(const Operand& o) {
    if (const auto* c = std::get_if<ColumnRef>(&o))
        return c->qualifier ? ident(*c->qualifier) + "." + ident(c->name) : ident(c->name);
    return datalog::to_sql_literal(std::get<Value>(o));
}

const char* op_text(CompareOp op) {
    switch (op) {
        case CompareOp::Eq: return "=";
        case CompareOp::Ne: return "<>";
        case CompareOp::Lt: return "<";
        case CompareOp::Le: return "<=";
        case CompareOp::Gt: return ">";
        case CompareOp::Ge: return ">=";
    }
    return "?";
}

std::string column_list(const std::vector<std::string>& cols) {
    std::string out = "(";
    for (std::size_t i = 0; i < cols.size(); ++i) out += (i ? ", " : "") + ident(cols[i]);
    return out + ")";
}

std::string query_text(const Query& q);

std::string condition_text(const Condition& c) {
    return std::visit(
        [](const auto& n) -> std::string {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Compare>) {
                return operand(n.lhs) + " " + op_text(n.op) + " " + operand(n.rhs);
            } else if constexpr (std::is_same_v<T, And>) {
                return "(" + condition_text(*n.lhs) + " AND " + condition_text(*n.rhs) + ")";
            } else if constexpr (std::is_same_v<T, Or>) {
                return "(" + condition_text(*n.lhs) + " OR " + condition_text(*n.rhs) + ")";
            } else if constexpr (std::is_same_v<T, Not>) {
                return "NOT (" + condition_text(*n.inner) + ")";
            } else {
                std::string lhs;
                if (n.lhs.size() == 1) {
                    lhs = operand(n.lhs[0]);
                } else {
                    lhs = "(";
                    for (std::size_t i = 0; i < n.lhs.size(); ++i)
                        lhs += (i ? ", " : "") + operand(n.lhs[i]);
                    lhs += ")";
                }
                return lhs + (n.negated ? " NOT IN (" : " IN (") + query_text(*n.query) + ")";
            }
        },
        c.node);
}

std::string select_text(const Select& s) {
    std::string out = "SELECT ";
    for (std::size_t i = 0; i < s.items.size(); ++i) {
        if (i) out += ", ";
        const auto& item = s.items[i];
        if (const auto* star = std::get_if<Star>(&item.item)) {
            out += star->qualifier ? ident(*star->qualifier) + ".*" : "*";
        } else {
            out += operand(std::get<Operand>(item.item));
        }
        if (item.alias) out += " AS " + ident(*item.alias);
    }
    if (!s.from.empty()) {
        out += " FROM ";
        for (std::size_t i = 0; i < s.from.size(); ++i) {
            if (i) out += ", ";
            const auto& r = s.from[i];
            if (const auto* name = std::get_if<std::string>(&r.source)) out += ident(*name);
            else out += "(" + query_text(*std::get<Box<Query>>(r.source)) + ")";
            if (r.alias) out += " AS " + ident(*r.alias);
        }
        if (s.where) out += " WHERE " + condition_text(*s.where);
    }
    return out;
}

std::string query_text(const Query& q) {
    return std::visit(
        [](const auto& n) -> std::string {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Select>) {
                return select_text(n);
            } else if constexpr (std::is_same_v<T, UnionAll>) {
                auto side = [](const Query& s, bool right) {
                    bool plain = std::holds_alternative<Select>(s.node) ||
                                 (!right && std::holds_alternative<UnionAll>(s.node));
                    return plain ? query_text(s) : "(" + query_text(s) + ")";
                };
                return side(*n.left, false) + " UNION ALL " + side(*n.right, true);
            } else if constexpr (std::is_same_v<T, With>) {
                std::string out = "WITH ";
                for (std::size_t i = 0; i < n.defs.size(); ++i) {
                    const auto& d = n.defs[i];
                    if (i) out += ", ";
                    out += ident(d.name);
                    if (d.columns) out += column_list(*d.columns);
                    out += " AS (" + query_text(*d.query) + ")";
                }
                return out + " " + query_text(*n.body);
            } else {
                std::string out = "ASSUME ";
                for (std::size_t i = 0; i < n.assumptions.size(); ++i) {
                    const auto& a = n.assumptions[i];
                    if (i) out += ", ";
                    out += "(" + query_text(*a.source) + ")";
                    out += a.polarity == Polarity::NotIn ? " NOT IN " : " IN ";
                    out += ident(a.target);
                    if (a.columns) out += column_list(*a.columns);
                }
                return out + " " + query_text(*n.body);
            }
        },
        q.node);
}

}  // namespace

std::string to_sql(const Query& q) { return query_text(q); }

std::string to_sql(const Condition& c) { return condition_text(c); }

std::string to_sql(const Statement& s) {
    return std::visit(
        [](const auto& n) -> std::string {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Query>) {
                return query_text(n);
            } else if constexpr (std::is_same_v<T, CreateTable>) {
                std::string out = "CREATE TABLE " + ident(n.name) + "(";
                for (std::size_t i = 0; i < n.columns.size(); ++i)
                    out += (i ? ", " : "") + ident(n.columns[i].first) + " " +
                           n.columns[i].second.spelling;
                return out + ")";
            } else if constexpr (std::is_same_v<T, Insert>) {
                std::string out = "INSERT INTO " + ident(n.table) + " VALUES ";
                for (std::size_t r = 0; r < n.rows.size(); ++r) {
                    out += r ? ", (" : "(";
                    for (std::size_t i = 0; i < n.rows[r].size(); ++i)
                        out += (i ? ", " : "") + datalog::to_sql_literal(n.rows[r][i]);
                    out += ")";
                }
                return out;
            } else {
                return "DROP TABLE " + ident(n.name);
            }
        },
        s);
}

}  // namespace hypoteq::sql
