#include "hypoteq/sql/parser.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>

#include "hypoteq/error.hpp"

namespace hypoteq::sql {

namespace {

enum class Tok { Ident, QuotedIdent, Int, Float, String, Symbol, End };

struct Token {
    Tok kind;
    std::string text;  // lowercased for identifiers
    SourcePosition pos;
};

const std::set<std::string>& reserved() {
    static const std::set<std::string> words = {
        "select", "from",   "where",  "union",  "all",      "with",    "as",     "assume",
        "in",     "not",    "and",    "or",     "create",   "table",   "insert", "into",
        "values", "drop",   "group",  "order",  "by",       "having",  "distinct", "join",
        "on",     "exists", "limit",  "intersect", "except", "inner",  "left",   "right",
        "outer",  "full",   "cross",  "natural", "null",    "is",      "between", "like",
        "case",   "when",   "then",   "else",   "end",      "view"};
    return words;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::vector<Token> lex(std::string_view src) {
    std::vector<Token> out;
    std::size_t i = 0, line = 1, col = 1;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    static const char* symbols[] = {"<>", "<=", ">=", "!=", "||", "(", ")", ",", ";", ".",
                                    "*",  "=",  "<",  ">",  "+",  "-", "/"};
    while (i < src.size()) {
        char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '-' && i + 1 < src.size() && src[i + 1] == '-') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        SourcePosition pos{line, col};
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' ||
                    src[j] == '$'))
                ++j;
            out.push_back({Tok::Ident, lower(std::string(src.substr(i, j - i))), pos});
            advance(j - i);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            Tok kind = Tok::Int;
            if (j + 1 < src.size() && src[j] == '.' &&
                std::isdigit(static_cast<unsigned char>(src[j + 1]))) {
                kind = Tok::Float;
                ++j;
                while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            }
            if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
                std::size_t k = j + 1;
                if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
                if (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) {
                    kind = Tok::Float;
                    j = k;
                    while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
                }
            }
            out.push_back({kind, std::string(src.substr(i, j - i)), pos});
            advance(j - i);
            continue;
        }
        if (c == '\'' || c == '"') {
            std::string text;
            std::size_t j = i + 1;
            bool closed = false;
            while (j < src.size()) {
                if (src[j] == c) {
                    if (j + 1 < src.size() && src[j + 1] == c) {
                        text += c;
                        j += 2;
                        continue;
                    }
                    closed = true;
                    ++j;
                    break;
                }
                text += src[j++];
            }
            if (!closed) throw SyntaxError(pos, "closing quote", "end of input");
            out.push_back({c == '\'' ? Tok::String : Tok::QuotedIdent, text, pos});
            advance(j - i);
            continue;
        }
        bool matched = false;
        for (const char* s : symbols) {
            std::string_view sv(s);
            if (src.substr(i, sv.size()) == sv) {
                out.push_back({Tok::Symbol, std::string(sv), pos});
                advance(sv.size());
                matched = true;
                break;
            }
        }
        if (!matched) throw SyntaxError(pos, "a token", std::string("'") + c + "'");
    }
    out.push_back({Tok::End, "", {line, col}});
    return out;
}

std::string describe(const Token& t) {
    switch (t.kind) {
        case Tok::End: return "end of input";
        case Tok::String: return "'" + t.text + "'";
        default: return "'" + t.text + "'";
    }
}

class Parser {
public:
    explicit Parser(std::string_view text) : toks_(lex(text)) {}

    Statement statement() {
        Statement out = [&]() -> Statement {
            if (is_kw("create")) return create();
            if (is_kw("insert")) return insert();
            if (is_kw("drop")) return drop();
            return query();
        }();
        finish();
        return out;
    }

    Query only_query() {
        Query q = query();
        finish();
        return q;
    }

private:
    const Token& peek(std::size_t k = 0) const {
        return toks_[std::min(pos_ + k, toks_.size() - 1)];
    }
    bool is_kw(std::string_view kw, std::size_t k = 0) const {
        return peek(k).kind == Tok::Ident && peek(k).text == kw;
    }
    bool is_sym(std::string_view s, std::size_t k = 0) const {
        return peek(k).kind == Tok::Symbol && peek(k).text == s;
    }

    [[noreturn]] void fail(const std::string& expected) const {
        throw SyntaxError(peek().pos, expected, describe(peek()));
    }

    void expect_kw(std::string_view kw) {
        if (!is_kw(kw)) fail(lower(std::string(kw)));
        ++pos_;
    }
    void expect_sym(std::string_view s) {
        if (!is_sym(s)) fail("'" + std::string(s) + "'");
        ++pos_;
    }

    void finish() {
        if (is_sym(";")) ++pos_;
        if (peek().kind != Tok::End) {
            reject_unsupported();
            fail("end of statement");
        }
    }

    // Called where the supported grammar ends; turns known out-of-scope
    // constructs into UnsupportedFeature instead of a plain syntax error.
    void reject_unsupported() const {
        const Token& t = peek();
        if (t.kind == Tok::Ident) {
            static const std::set<std::string> clauses = {
                "group", "order", "having", "limit", "join", "inner", "left", "right",
                "outer", "full", "cross", "natural", "intersect", "except", "on",
                "is", "between", "like", "exists"};
            if (clauses.count(t.text)) throw unsupported_feature(t.text);
            if (t.text == "union") throw unsupported_feature("UNION without ALL");
        }
        if (t.kind == Tok::Symbol &&
            (t.text == "+" || t.text == "-" || t.text == "*" || t.text == "/" || t.text == "||"))
            throw unsupported_feature("arithmetic expressions");
    }

    std::string identifier(const std::string& what) {
        const Token& t = peek();
        if (t.kind == Tok::QuotedIdent) {
            ++pos_;
            return t.text;
        }
        if (t.kind != Tok::Ident || reserved().count(t.text)) fail(what);
        ++pos_;
        return t.text;
    }

    bool at_identifier() const {
        const Token& t = peek();
        return t.kind == Tok::QuotedIdent || (t.kind == Tok::Ident && !reserved().count(t.text));
    }

    std::vector<std::string> column_list() {
        std::vector<std::string> cols;
        expect_sym("(");
        cols.push_back(identifier("column name"));
        while (is_sym(",")) {
            ++pos_;
            cols.push_back(identifier("column name"));
        }
        expect_sym(")");
        return cols;
    }

    // ---- queries --------------------------------------------------------

    Query query() {
        if (is_kw("with")) return with();
        if (is_kw("assume")) return assume();
        return union_query();
    }

    Query with() {
        expect_kw("with");
        if (is_kw("recursive")) throw unsupported_feature("recursive WITH");
        With w{{}, Query{}};
        do {
            if (!w.defs.empty()) ++pos_;
            ViewDef def{identifier("view name"), std::nullopt, Query{}};
            if (is_sym("(")) def.columns = column_list();
            expect_kw("as");
            expect_sym("(");
            def.query = query();
            expect_sym(")");
            w.defs.push_back(std::move(def));
        } while (is_sym(","));
        w.body = query();
        return Query{std::move(w)};
    }

    Query assume() {
        expect_kw("assume");
        Assume a{{}, Query{}};
        do {
            if (!a.assumptions.empty()) ++pos_;
            Assumption as{Query{}, Polarity::In, {}, std::nullopt};
            if (is_sym("(")) {
                ++pos_;
                as.source = query();
                expect_sym(")");
            } else {
                as.source = union_query();
            }
            if (is_kw("not")) {
                ++pos_;
                as.polarity = Polarity::NotIn;
            }
            expect_kw("in");
            as.target = identifier("relation name");
            if (is_sym("(")) as.columns = column_list();
            a.assumptions.push_back(std::move(as));
        } while (is_sym(","));
        a.body = query();
        return Query{std::move(a)};
    }

    Query union_query() {
        Query left = primary_query();
        while (is_kw("union")) {
            if (!is_kw("all", 1)) throw unsupported_feature("UNION without ALL");
            pos_ += 2;
            Query right = primary_query();
            left = Query{UnionAll{std::move(left), std::move(right)}};
        }
        return left;
    }

    Query primary_query() {
        if (is_sym("(")) {
            ++pos_;
            Query q = query();
            expect_sym(")");
            return q;
        }
        return select();
    }

    Query select() {
        expect_kw("select");
        if (is_kw("distinct")) throw unsupported_feature("distinct");
        if (is_kw("all")) ++pos_;
        Select s;
        s.items.push_back(select_item());
        while (is_sym(",")) {
            ++pos_;
            s.items.push_back(select_item());
        }
        if (is_kw("from")) {
            ++pos_;
            s.from.push_back(rel_ref());
            while (is_sym(",")) {
                ++pos_;
                s.from.push_back(rel_ref());
            }
            if (is_kw("where")) {
                ++pos_;
                s.where = condition();
            }
        }
        static const std::set<std::string> trailing = {
            "group", "order", "having", "limit", "join", "inner", "left", "right",
            "outer", "full", "cross", "natural"};
        if (peek().kind == Tok::Ident && trailing.count(peek().text))
            throw unsupported_feature(peek().text);
        return Query{std::move(s)};
    }

    SelectItem select_item() {
        SelectItem item{Star{}, std::nullopt};
        if (is_sym("*")) {
            ++pos_;
            return item;
        }
        if (at_identifier() && is_sym(".", 1) && is_sym("*", 2)) {
            std::string q = identifier("relation");
            pos_ += 2;
            item.item = Star{q};
            return item;
        }
        if (is_sym("(")) throw unsupported_feature("scalar subquery in SELECT list");
        item.item = operand();
        if (is_sym("+") || is_sym("-") || is_sym("*") || is_sym("/") || is_sym("||"))
            throw unsupported_feature("arithmetic expressions");
        if (is_kw("as")) {
            ++pos_;
            item.alias = identifier("column alias");
        } else if (at_identifier()) {
            item.alias = identifier("column alias");
        }
        return item;
    }

    RelRef rel_ref() {
        RelRef r{std::string{}, std::nullopt};
        if (is_sym("(")) {
            ++pos_;
            r.source = Box<Query>(query());
            expect_sym(")");
        } else {
            r.source = identifier("relation name");
        }
        if (is_kw("as")) {
            ++pos_;
            r.alias = identifier("alias");
        } else if (at_identifier()) {
            r.alias = identifier("alias");
        }
        return r;
    }

    // ---- conditions -----------------------------------------------------

    Condition condition() {
        Condition lhs = conjunction();
        while (is_kw("or")) {
            ++pos_;
            Condition rhs = conjunction();
            lhs = Condition{Or{std::move(lhs), std::move(rhs)}};
        }
        return lhs;
    }

    Condition conjunction() {
        Condition lhs = negation();
        while (is_kw("and")) {
            ++pos_;
            Condition rhs = negation();
            lhs = Condition{And{std::move(lhs), std::move(rhs)}};
        }
        return lhs;
    }

    Condition negation() {
        if (is_kw("not")) {
            ++pos_;
            return Condition{Not{negation()}};
        }
        return predicate();
    }

    Condition predicate() {
        if (is_kw("exists")) throw unsupported_feature("exists");
        if (is_sym("(")) {
            std::size_t save = pos_;
            try {
                ++pos_;
                std::vector<Operand> tuple{operand()};
                while (is_sym(",")) {
                    ++pos_;
                    tuple.push_back(operand());
                }
                expect_sym(")");
                if (is_kw("in") || (is_kw("not") && is_kw("in", 1))) return in_tail(tuple);
            } catch (const SyntaxError&) {
            }
            pos_ = save;
            ++pos_;
            Condition inner = condition();
            expect_sym(")");
            return inner;
        }
        Operand lhs = operand();
        if ((is_kw("in") || (is_kw("not") && is_kw("in", 1)))) return in_tail({lhs});
        if (is_kw("is") || is_kw("between") || is_kw("like"))
            throw unsupported_feature(peek().text);
        CompareOp op = compare_op();
        Operand rhs = operand();
        return Condition{Compare{std::move(lhs), op, std::move(rhs)}};
    }

    Condition in_tail(std::vector<Operand> lhs) {
        bool negated = false;
        if (is_kw("not")) {
            ++pos_;
            negated = true;
        }
        expect_kw("in");
        expect_sym("(");
        if (!is_kw("select") && !is_kw("with") && !is_kw("assume") && !is_sym("("))
            throw unsupported_feature("IN with a value list");
        Query q = query();
        expect_sym(")");
        return Condition{InSubquery{std::move(lhs), std::move(q), negated}};
    }

    CompareOp compare_op() {
        if (peek().kind == Tok::Symbol) {
            const std::string& s = peek().text;
            CompareOp op;
            bool ok = true;
            if (s == "=") op = CompareOp::Eq;
            else if (s == "<>" || s == "!=") op = CompareOp::Ne;
            else if (s == "<") op = CompareOp::Lt;
            else if (s == "<=") op = CompareOp::Le;
            else if (s == ">") op = CompareOp::Gt;
            else if (s == ">=") op = CompareOp::Ge;
            else ok = false;
            if (ok) {
                ++pos_;
                return op;
            }
        }
        reject_unsupported();
        fail("comparison operator");
    }

    Operand operand() {
        const Token& t = peek();
        bool negative = false;
        if (is_sym("-") && (peek(1).kind == Tok::Int || peek(1).kind == Tok::Float)) {
            negative = true;
            ++pos_;
        }
        const Token& v = peek();
        if (v.kind == Tok::Int) {
            std::int64_t x = 0;
            auto [p, ec] = std::from_chars(v.text.data(), v.text.data() + v.text.size(), x);
            if (ec != std::errc()) fail("integer in range");
            ++pos_;
            return Value(negative ? -x : x);
        }
        if (v.kind == Tok::Float) {
            double x = std::stod(v.text);
            ++pos_;
            return Value(negative ? -x : x);
        }
        if (negative) fail("number");
        if (t.kind == Tok::String) {
            ++pos_;
            return Value(t.text);
        }
        if (t.kind == Tok::Ident && t.text == "null") throw unsupported_feature("NULL");
        if (t.kind == Tok::Ident && is_sym("(", 1) && !reserved().count(t.text)) {
            static const std::set<std::string> aggregates = {"count", "sum", "avg", "min", "max"};
            if (aggregates.count(t.text)) throw unsupported_feature("aggregate function " + t.text);
            throw unsupported_feature("function call " + t.text);
        }
        if (is_sym("(") && (is_kw("select", 1))) throw unsupported_feature("scalar subquery");
        std::string first = identifier("column, literal or '('");
        if (is_sym(".")) {
            ++pos_;
            std::string second = identifier("column name");
            return ColumnRef{first, second};
        }
        return ColumnRef{std::nullopt, first};
    }

    // ---- DDL ------------------------------------------------------------

    Statement create() {
        expect_kw("create");
        if (is_kw("view") || (is_kw("or"))) throw unsupported_feature("create view");
        expect_kw("table");
        CreateTable ct{identifier("table name"), {}};
        expect_sym("(");
        do {
            if (!ct.columns.empty()) ++pos_;
            std::string name = identifier("column name");
            ct.columns.emplace_back(std::move(name), type_name());
        } while (is_sym(","));
        expect_sym(")");
        return ct;
    }

    ColumnType type_name() {
        const Token& t = peek();
        if (t.kind != Tok::Ident) fail("type name");
        std::string spelling = t.text;
        SourcePosition pos = t.pos;
        ++pos_;
        if (is_sym("(")) {
            ++pos_;
            if (peek().kind != Tok::Int) fail("type length");
            spelling += "(" + peek().text + ")";
            ++pos_;
            expect_sym(")");
        }
        auto type = ColumnType::parse(spelling);
        if (!type) throw SyntaxError(pos, "type name", "'" + spelling + "'");
        return *type;
    }

    Statement insert() {
        expect_kw("insert");
        expect_kw("into");
        Insert ins{identifier("table name"), {}};
        if (is_kw("select")) throw unsupported_feature("INSERT ... SELECT");
        expect_kw("values");
        do {
            if (!ins.rows.empty()) ++pos_;
            expect_sym("(");
            datalog::Tuple row;
            do {
                if (!row.empty()) ++pos_;
                Operand o = operand();
                if (!std::holds_alternative<Value>(o)) fail("literal value");
                row.push_back(std::get<Value>(o));
            } while (is_sym(","));
            expect_sym(")");
            ins.rows.push_back(std::move(row));
        } while (is_sym(","));
        return ins;
    }

    Statement drop() {
        expect_kw("drop");
        expect_kw("table");
        return DropTable{identifier("table name")};
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

}  // namespace

Statement parse_sql(std::string_view text) { return Parser(text).statement(); }

Query parse_query(std::string_view text) { return Parser(text).only_query(); }

bool looks_like_sql(std::string_view text) {
    std::size_t i = 0;
    while (i < text.size() && (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == '('))
        ++i;
    std::size_t j = i;
    while (j < text.size() && std::isalpha(static_cast<unsigned char>(text[j]))) ++j;
    std::string word = lower(std::string(text.substr(i, j - i)));
    static const std::set<std::string> starters = {"select", "with",   "assume", "create",
                                                   "insert", "drop"};
    return starters.count(word) > 0;
}

}  // namespace hypoteq::sql
