#include "hypoteq/datalog/parser.hpp"

#include <cctype>
#include <charconv>
#include <map>

#include "hypoteq/error.hpp"

namespace hypoteq::datalog {

namespace {

enum class Tok { Ident, Var, Int, Float, String, Punct, End };

struct Token {
    Tok kind;
    std::string text;
    SourcePosition pos;
};

std::string describe(const Token& t) {
    if (t.kind == Tok::End) return "end of input";
    return "'" + t.text + "'";
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
    static const char* puncts[] = {":-", "=>", "/\\", "\\=", "=<", ">=", "<=", "<>", "!=",
                                   "(",  ")",  ",",   ".",   "-",  "=",  "<",  ">"};
    while (i < src.size()) {
        char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '%') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        if (c == '/' && i + 1 < src.size() && src[i + 1] == '*') {
            advance(2);
            while (i + 1 < src.size() && !(src[i] == '*' && src[i + 1] == '/')) advance(1);
            advance(2);
            continue;
        }
        SourcePosition pos{line, col};
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
                ++j;
            Tok kind = (std::isupper(static_cast<unsigned char>(c)) || c == '_') ? Tok::Var
                                                                                 : Tok::Ident;
            out.push_back({kind, std::string(src.substr(i, j - i)), pos});
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
        if (c == '\'') {
            std::string text;
            std::size_t j = i + 1;
            bool closed = false;
            while (j < src.size()) {
                if (src[j] == '\'') {
                    if (j + 1 < src.size() && src[j + 1] == '\'') {
                        text += '\'';
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
            out.push_back({Tok::String, text, pos});
            advance(j - i);
            continue;
        }
        bool matched = false;
        for (const char* p : puncts) {
            std::string_view pv(p);
            if (src.substr(i, pv.size()) == pv) {
                out.push_back({Tok::Punct, std::string(pv), pos});
                advance(pv.size());
                matched = true;
                break;
            }
        }
        if (!matched) throw SyntaxError(pos, "a token", std::string("'") + c + "'");
    }
    out.push_back({Tok::End, "", {line, col}});
    return out;
}

class Parser {
public:
    explicit Parser(std::string_view text) : toks_(lex(text)) {}

    Program program() {
        Program p;
        while (!at_end()) {
            p.rules.push_back(rule());
            expect(".");
        }
        return p;
    }

    std::vector<Goal> goals() {
        std::vector<Goal> out = body();
        if (is_punct(".")) ++pos_;
        if (!at_end()) fail("',' or end of query");
        return out;
    }

private:
    const Token& peek(std::size_t k = 0) const {
        return toks_[std::min(pos_ + k, toks_.size() - 1)];
    }
    bool at_end() const { return peek().kind == Tok::End; }
    bool is_punct(std::string_view p, std::size_t k = 0) const {
        return peek(k).kind == Tok::Punct && peek(k).text == p;
    }
    bool is_compare_op(std::size_t k = 0) const {
        static const char* ops[] = {"=", "\\=", "<", "=<", ">", ">=", "<=", "<>", "!="};
        for (const char* o : ops)
            if (is_punct(o, k)) return true;
        return false;
    }

    [[noreturn]] void fail(const std::string& expected) const {
        throw SyntaxError(peek().pos, expected, describe(peek()));
    }

    void expect(std::string_view p) {
        if (!is_punct(p)) fail("'" + std::string(p) + "'");
        ++pos_;
    }

    Rule rule() {
        Rule r;
        if (is_punct("-")) {
            ++pos_;
            r.sign = HeadSign::Restricting;
        }
        r.head = atom();
        if (is_punct(":-")) {
            ++pos_;
            r.body = body();
        }
        return r;
    }

    std::vector<Goal> body() {
        std::vector<Goal> out;
        out.push_back(goal());
        while (is_punct(",")) {
            ++pos_;
            out.push_back(goal());
        }
        return out;
    }

    Goal goal() {
        std::size_t save = pos_;
        try {
            std::vector<Rule> ante = antecedent();
            if (is_punct("=>")) {
                ++pos_;
                return Goal::implication(std::move(ante), goal());
            }
        } catch (const SyntaxError&) {
        }
        pos_ = save;
        return simple_goal();
    }

    std::vector<Rule> antecedent() {
        std::vector<Rule> out;
        antecedent_element(out);
        while (is_punct("/\\")) {
            ++pos_;
            antecedent_element(out);
        }
        return out;
    }

    void antecedent_element(std::vector<Rule>& out) {
        if (is_punct("(")) {
            ++pos_;
            out.push_back(rule());
            while (is_punct(",") || is_punct("/\\")) {
                ++pos_;
                out.push_back(rule());
            }
            expect(")");
            return;
        }
        Rule r;
        if (is_punct("-")) {
            ++pos_;
            r.sign = HeadSign::Restricting;
        }
        r.head = atom();
        out.push_back(std::move(r));
    }

    Goal simple_goal() {
        const Token& t = peek();
        if (t.kind == Tok::Ident && t.text == "not" && !is_punct("(", 1) && !is_compare_op(1)) {
            ++pos_;
            return Goal::negation(simple_goal());
        }
        if (t.kind == Tok::Ident && t.text == "not" && is_punct("(", 1)) {
            ++pos_;
            ++pos_;
            Goal inner = goal();
            expect(")");
            return Goal::negation(std::move(inner));
        }
        if (is_punct("(")) {
            ++pos_;
            Goal inner = goal();
            expect(")");
            return inner;
        }
        bool term_start = t.kind == Tok::Var || t.kind == Tok::Int || t.kind == Tok::Float ||
                          t.kind == Tok::String || is_punct("-") ||
                          (t.kind == Tok::Ident && is_compare_op(1));
        if (term_start) {
            Term lhs = term();
            CompareOp op = compare_op();
            Term rhs = term();
            return Goal::compare(op, std::move(lhs), std::move(rhs));
        }
        return Goal::atom(atom());
    }

    CompareOp compare_op() {
        const std::string& s = peek().text;
        if (peek().kind != Tok::Punct) fail("comparison operator");
        CompareOp op;
        if (s == "=") op = CompareOp::Eq;
        else if (s == "\\=" || s == "<>" || s == "!=") op = CompareOp::Ne;
        else if (s == "<") op = CompareOp::Lt;
        else if (s == "=<" || s == "<=") op = CompareOp::Le;
        else if (s == ">") op = CompareOp::Gt;
        else if (s == ">=") op = CompareOp::Ge;
        else fail("comparison operator");
        ++pos_;
        return op;
    }

    Atom atom() {
        if (peek().kind != Tok::Ident) fail("predicate name");
        Atom a;
        a.predicate = peek().text;
        ++pos_;
        if (is_punct("(")) {
            ++pos_;
            a.args.push_back(term());
            while (is_punct(",")) {
                ++pos_;
                a.args.push_back(term());
            }
            expect(")");
        }
        return a;
    }

    Term term() {
        bool negative = false;
        if (is_punct("-")) {
            negative = true;
            ++pos_;
            if (peek().kind != Tok::Int && peek().kind != Tok::Float) fail("number");
        }
        const Token& t = peek();
        switch (t.kind) {
            case Tok::Var:
                ++pos_;
                return Variable{t.text};
            case Tok::Ident:
                ++pos_;
                return Value(t.text);
            case Tok::String:
                ++pos_;
                return Value(t.text);
            case Tok::Int: {
                std::int64_t v = 0;
                auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
                if (ec != std::errc()) fail("integer in range");
                ++pos_;
                return Value(negative ? -v : v);
            }
            case Tok::Float: {
                double v = std::stod(t.text);
                ++pos_;
                return Value(negative ? -v : v);
            }
            default:
                fail("term");
        }
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

void assign_ids(Rule& r, RuleId& next);

void assign_ids(Goal& g, RuleId& next) {
    if (auto* n = std::get_if<Negation>(&g.node)) {
        Goal inner = *n->inner;
        assign_ids(inner, next);
        n->inner = std::make_shared<const Goal>(std::move(inner));
    } else if (auto* imp = std::get_if<Implication>(&g.node)) {
        for (auto& r : imp->antecedent) assign_ids(r, next);
        Goal cons = *imp->consequent;
        assign_ids(cons, next);
        imp->consequent = std::make_shared<const Goal>(std::move(cons));
    }
}

void assign_ids(Rule& r, RuleId& next) {
    r.id = next;
    ++next.seq;
    for (auto& g : r.body) assign_ids(g, next);
}

}  // namespace

void check_arities(const Program& p) {
    std::map<std::string, std::size_t> arity;
    auto visit = [&](const Atom& a) {
        auto [it, inserted] = arity.emplace(a.predicate, a.arity());
        if (!inserted && it->second != a.arity())
            throw ArityMismatch(a.predicate, a.arity(), it->second);
    };
    for (const auto& r : p.rules) for_each_atom(r, visit);
}

Program parse_datalog(std::string_view text, RuleId first_id) {
    Program p = Parser(text).program();
    check_arities(p);
    RuleId next = first_id;
    for (auto& r : p.rules) assign_ids(r, next);
    return p;
}

std::vector<Goal> parse_goals(std::string_view text) {
    auto goals = Parser(text).goals();
    Program probe;
    Rule holder;
    holder.head = Atom{"$query", {}};
    holder.body = goals;
    probe.rules.push_back(holder);
    check_arities(probe);
    return goals;
}

}  // namespace hypoteq::datalog
