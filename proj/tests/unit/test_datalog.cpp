#include <gtest/gtest.h>

#include "hypoteq/datalog/parser.hpp"
#include "hypoteq/datalog/printer.hpp"
#include "hypoteq/datalog/safety.hpp"
#include "hypoteq/datalog/substitution.hpp"
#include "hypoteq/datalog/wellformed.hpp"
#include "hypoteq/error.hpp"

using namespace hypoteq;
using namespace hypoteq::datalog;

namespace {

Rule one(const std::string& text) {
    auto p = parse_datalog(text);
    EXPECT_EQ(p.rules.size(), 1u);
    return p.rules.front();
}

std::string kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    return "";
}

}  // namespace

TEST(Value, DisplaySpelling) {
    EXPECT_EQ(to_string(Value("adam")), "adam");
    EXPECT_EQ(to_string(Value("Adam")), "'Adam'");
    EXPECT_EQ(to_string(Value("it's")), "'it''s'");
    EXPECT_EQ(to_string(Value(3)), "3");
    EXPECT_EQ(to_string(Value(1.0)), "1.0");
    EXPECT_EQ(to_string(Value(2.5)), "2.5");
}

TEST(Value, IntAndFloatAreDistinctConstants) {
    EXPECT_FALSE(Value(1) == Value(1.0));
    EXPECT_TRUE(Value(1) < Value("a"));
    EXPECT_TRUE(Value(1) < Value(1.5));
}

TEST(Parser, FactsRulesAndNegation) {
    auto p = parse_datalog("student(adam). answer(A) :- student(A), not take(A,_B).");
    ASSERT_EQ(p.rules.size(), 2u);
    EXPECT_TRUE(p.rules[0].is_fact());
    const Rule& r = p.rules[1];
    EXPECT_EQ(r.head.predicate, "answer");
    ASSERT_EQ(r.body.size(), 2u);
    EXPECT_TRUE(r.body[1].is_negation());
}

TEST(Parser, RestrictingRuleAndImplication) {
    Rule r = one("answer(A) :- -student(adam) /\\ take(adam,lp) /\\ (grad(B) :- student(B), take(B,lp)) => grad(A).");
    ASSERT_EQ(r.body.size(), 1u);
    ASSERT_TRUE(r.body[0].is_implication());
    const auto& imp = r.body[0].as_implication();
    ASSERT_EQ(imp.antecedent.size(), 3u);
    EXPECT_TRUE(imp.antecedent[0].restricting());
    EXPECT_TRUE(imp.antecedent[1].is_fact());
    EXPECT_EQ(imp.antecedent[2].body.size(), 2u);
    EXPECT_EQ(to_string(*imp.consequent), "grad(A)");
}

TEST(Parser, CommaBetweenAntecedentElements) {
    Rule a = one("p(X) :- (q(1), r(2)) => s(X).");
    Rule b = one("p(X) :- q(1) /\\ r(2) => s(X).");
    EXPECT_EQ(a, b);
}

TEST(Parser, RuleIdsInTextOrder) {
    auto p = parse_datalog("p(X) :- (q(Y) :- r(Y)) => q(X). s(1).", {RuleOrigin::User, 10});
    EXPECT_EQ(p.rules[0].id.seq, 10u);
    EXPECT_EQ(p.rules[0].body[0].as_implication().antecedent[0].id.seq, 11u);
    EXPECT_EQ(p.rules[1].id.seq, 12u);
}

TEST(Parser, ComparisonSpellings) {
    Rule r = one("p(X) :- q(X), X \\= 1, X =< 3, X >= 0, X < 9, X > -1, X = X.");
    EXPECT_EQ(to_string(r, Layout::SingleLine), "p(X) :- q(X), X \\= 1, X =< 3, X >= 0, X < 9, X > -1, X = X.");
}

TEST(Parser, QuotedAndNumericConstants) {
    Rule r = one("p('Hello world', 42, 1.5, -3, bare).");
    ASSERT_EQ(r.head.args.size(), 5u);
    EXPECT_EQ(as_constant(r.head.args[0]), Value("Hello world"));
    EXPECT_EQ(as_constant(r.head.args[1]), Value(42));
    EXPECT_EQ(as_constant(r.head.args[2]), Value(1.5));
    EXPECT_EQ(as_constant(r.head.args[3]), Value(-3));
    EXPECT_EQ(as_constant(r.head.args[4]), Value("bare"));
}

TEST(Parser, CommentsAreSkipped) {
    auto p = parse_datalog("% a comment\np(1). /* block */ q(2).");
    EXPECT_EQ(p.rules.size(), 2u);
}

TEST(Parser, SyntaxErrorCarriesPosition) {
    try {
        parse_datalog("p(X) :- q(X)\nr(1).");
        FAIL();
    } catch (const SyntaxError& e) {
        EXPECT_EQ(e.position().line, 2u);
        EXPECT_EQ(e.position().column, 1u);
    }
    EXPECT_EQ(kind_of([] { parse_datalog("p(X :- q."); }), "SyntaxError");
}

TEST(Parser, ArityMismatchIsRejected) {
    EXPECT_EQ(kind_of([] { parse_datalog("p(1). p(1,2)."); }), "ArityMismatch");
    EXPECT_EQ(kind_of([] { parse_datalog("p(X) :- q(X), (q(1,2)) => q(X)."); }), "ArityMismatch");
}

TEST(Parser, Goals) {
    auto g = parse_goals("student(X), not take(X,_Y).");
    ASSERT_EQ(g.size(), 2u);
    EXPECT_TRUE(g[0].is_atom());
    EXPECT_TRUE(g[1].is_negation());
}

TEST(Printer, SessionLayoutSplitsImplications) {
    Rule r = one("answer(A) :- -student(adam) /\\ take(adam,lp) /\\ take(scott,db) /\\ (grad(B) :- student(B), take(B,lp), take(B,db)) => grad(A).");
    EXPECT_EQ(to_string(r, Layout::Session),
              "answer(A) :-\n"
              "  -student(adam) /\\ take(adam,lp) /\\ take(scott,db) /\\\n"
              "  (grad(B) :- student(B), take(B,lp), take(B,db))\n"
              "  =>\n"
              "  grad(A).");
    EXPECT_EQ(to_string(r, Layout::SingleLine),
              "answer(A) :- -student(adam) /\\ take(adam,lp) /\\ take(scott,db) /\\ "
              "(grad(B) :- student(B), take(B,lp), take(B,db)) => grad(A).");
}

TEST(Printer, PlainRulesStayOnOneLine) {
    Rule r = one("answer(A) :- student(A), not take(A,_B).");
    EXPECT_EQ(to_string(r), "answer(A) :- student(A), not take(A,_B).");
}

TEST(Substitution, AppliesThroughNestedRules) {
    Rule r = one("p(X) :- (q(X) :- r(Y)) => q(X).");
    Substitution s{{"X", Value(1)}};
    EXPECT_EQ(to_string(apply_substitution(r, s), Layout::SingleLine), "p(1) :- (q(1) :- r(Y)) => q(1).");
}

TEST(Variables, FirstOccurrenceOrder) {
    Rule r = one("p(B,A) :- q(A,C), not r(C,_D).");
    EXPECT_EQ(variables_of(r), (std::vector<std::string>{"B", "A", "C", "_D"}));
    auto counts = variable_occurrences(r);
    EXPECT_EQ(counts["A"], 2);
    EXPECT_EQ(counts["_D"], 1);
}

TEST(Safety, UnderscoredNegationIsSafe) {
    EXPECT_FALSE(find_unsafe(one("answer(A) :- student(A), not take(A,_B).")));
}

TEST(Safety, ClassicalUnsafeRulesAreRejected) {
    EXPECT_TRUE(find_unsafe(one("p(X) :- not q(X).")));
    EXPECT_TRUE(find_unsafe(one("p(X,Y) :- q(X).")));
    EXPECT_TRUE(find_unsafe(one("p(X) :- q(X), X < Y.")));
    EXPECT_TRUE(find_unsafe(one("p(X) :- q(X), not r(X,Y).")));
    EXPECT_TRUE(find_unsafe(one("p(X).")));
    EXPECT_EQ(kind_of([] { require_safe(parse_datalog("p(X) :- not q(X).")); }), "UnsafeRule");
}

TEST(Safety, UnderscoredVariableSharedOutsideNegationIsNotExistential) {
    // _B also occurs in a comparison, so it must be bound positively.
    EXPECT_TRUE(find_unsafe(one("p(A) :- s(A), not t(A,_B), _B > 1.")));
}

TEST(Safety, AntecedentRulesAreChecked) {
    EXPECT_TRUE(find_unsafe(one("p(X) :- s(X), (q(Y) :- not r(Y)) => q(X).")));
    EXPECT_FALSE(find_unsafe(one("p(X) :- (q(Y) :- r(Y)) => q(X).")));
}

TEST(WellFormed, SharedVariablesBetweenAntecedentAndRuleAreReported) {
    EXPECT_TRUE(check_wellformed(parse_datalog("p(X) :- (q(Y) :- r(Y)) => q(X).")).empty());
    auto v = check_wellformed(parse_datalog("p(X) :- s(X), (q(X) :- r(X)) => q(X)."));
    ASSERT_FALSE(v.empty());
    EXPECT_EQ(v.front().kind, Violation::Kind::SharedVariable);
}

TEST(RoundTrip, ParsePrintParse) {
    const char* programs[] = {
        "answer(A) :- student(A), not take(A,_B).",
        "answer(A) :- (grad(B) :- student(B), take(B,db), take(B,lp)) => grad(A).",
        "answer(A) :- -student(adam) /\\ take(adam,lp) /\\ take(scott,db) /\\ (grad(B) :- student(B), take(B,lp), take(B,db)) => grad(A).",
        "p('X y', 1.5, -2) :- q(_), X = 'a''b'.",
    };
    for (const char* text : programs) {
        Program p = parse_datalog(text);
        for (Layout l : {Layout::Session, Layout::SingleLine}) {
            EXPECT_EQ(parse_datalog(to_string(p, l)), p) << text;
        }
    }
}
