#include <gtest/gtest.h>

#include "hypoteq/datalog/parser.hpp"
#include "hypoteq/engine/engine.hpp"
#include "hypoteq/engine/stratify.hpp"
#include "hypoteq/error.hpp"
#include "support.hpp"

using namespace hypoteq;
using namespace hypoteq::engine;
namespace ht = hypoteq::testing;

namespace {

std::map<Tuple, std::size_t> facts(const std::vector<LabeledFact>& fs) {
    std::vector<Tuple> rows;
    for (const auto& f : fs) {
        Tuple t;
        for (const auto& a : f.fact.args) t.push_back(datalog::as_constant(a));
        rows.push_back(t);
    }
    return ht::counts(rows);
}

std::map<Tuple, std::size_t> solve(const std::string& program, const std::string& goal,
                                   const db::DatabaseInstance& db = {}) {
    Engine e(db, datalog::parse_datalog(program));
    auto g = datalog::parse_goals(goal);
    return facts(e.solve(g.front().as_atom()));
}

std::string kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    return "";
}

using C = std::map<Tuple, std::size_t>;

const db::DatabaseInstance kEmpty;

}  // namespace

TEST(Engine, StoredRowsAndRules) {
    auto db = ht::session_instance();
    EXPECT_EQ(solve("answer(A) :- student(A), not take(A,_B).", "answer(X)", db), (C{{{"bob"}, 1}}));
}

TEST(Engine, BagSemanticsCountsDerivations) {
    EXPECT_EQ(solve("p(1). p(1). q(X) :- p(X), p(Y).", "q(X)"), (C{{{1}, 4}}));
    EXPECT_EQ(solve("p(1). p(2). r(1). r(1). q(X) :- p(X), not r(X).", "q(X)"), (C{{{2}, 1}}));
}

TEST(Engine, ConstantsInGoal) {
    EXPECT_EQ(solve("p(1,a). p(2,b).", "p(2,X)"), (C{{{2, "b"}, 1}}));
}

TEST(Engine, ImplicationAddsFactsInAChildContext) {
    auto db = ht::session_instance();
    auto r = solve("q(X) :- (student(zed)) => student(X).", "q(X)", db);
    EXPECT_EQ(r.size(), 5u);
    EXPECT_EQ(r.count({"zed"}), 1u);
    // the root context is untouched
    EXPECT_EQ(solve("q(X) :- (student(zed)) => student(X).", "student(X)", db).size(), 4u);
}

TEST(Engine, AssumedFactAlreadyPresentIsAnExtraOccurrence) {
    auto db = ht::session_instance();
    auto r = solve("q(X) :- (student(bob)) => student(X).", "q(X)", db);
    EXPECT_EQ(r.at({"bob"}), 2u);
}

TEST(Engine, RestrictingRuleRemovesEveryOccurrence) {
    EXPECT_EQ(solve("p(1). p(1). p(2). q(X) :- (-p(1)) => p(X).", "q(X)"), (C{{{2}, 1}}));
}

TEST(Engine, RestrictingRuleWithBody) {
    auto db = ht::session_instance();
    auto r = solve("q(X) :- (-student(Y) :- take(Y,lp)) => student(X).", "q(X)", db);
    EXPECT_EQ(r, (C{{{"adam"}, 1}, {{"bob"}, 1}}));
}

TEST(Engine, RegularAndRestrictedMeaning) {
    Engine e(kEmpty, datalog::parse_datalog("p(1). p(2). s(2). -p(X) :- s(X)."));
    EXPECT_EQ(facts(e.regular_meaning("p")), (C{{{1}, 1}, {{2}, 1}}));
    EXPECT_EQ(facts(e.restricted_meaning("p")), (C{{{1}, 1}}));
}

TEST(Engine, NestedImplicationsSeeOuterAssumptions) {
    EXPECT_EQ(solve("s(X) :- (r(1)) => t(X). t(X) :- (r(2)) => r(X).",
                    "s(X)"),
              (C{{{1}, 1}, {{2}, 1}}));
}

TEST(Engine, ExplicitContexts) {
    Engine e(kEmpty, datalog::parse_datalog("p(1)."));
    ContextId c = e.assume(e.root(), datalog::parse_datalog("p(2).").rules);
    EXPECT_EQ(facts(e.solve({"p", {datalog::var("X")}}, c)).size(), 2u);
    EXPECT_EQ(facts(e.solve({"p", {datalog::var("X")}})).size(), 1u);
    auto out = e.eval_implication(datalog::parse_datalog("p(3).").rules,
                                  datalog::parse_goals("p(X)").front());
    EXPECT_EQ(facts(out), (C{{{1}, 1}, {{3}, 1}}));
}

TEST(Engine, Recursion) {
    EXPECT_EQ(solve("e(1,2). e(2,3). e(3,1). t(X,Y) :- e(X,Y). t(X,Z) :- e(X,Y), t(Y,Z).", "t(1,X)").size(), 3u);
}

TEST(Engine, NotStratifiable) {
    EXPECT_EQ(kind_of([] { Engine e(kEmpty, datalog::parse_datalog("p(1) :- not p(1).")); }), "NotStratifiable");
    EXPECT_EQ(kind_of([] { Engine e(kEmpty, datalog::parse_datalog("s(1). p(X) :- s(X), not q(X). q(X) :- s(X), not p(X).")); }),
              "NotStratifiable");
    EXPECT_EQ(kind_of([] { Engine e(kEmpty, datalog::parse_datalog("s(1). p(X) :- s(X), (-q(X) :- p(X)) => q(X).")); }),
              "NotStratifiable");
}

TEST(Engine, UnsafeRulesAreRejected) {
    EXPECT_EQ(kind_of([] { Engine e(kEmpty, datalog::parse_datalog("p(X) :- not q(X).")); }), "UnsafeRule");
}

TEST(Engine, Strata) {
    Engine e(kEmpty, datalog::parse_datalog("a(1). b(X) :- a(X). c(X) :- a(X), not b(X)."));
    const auto& s = e.stratification();
    EXPECT_LT(s.level.at("b"), s.level.at("c"));
    EXPECT_LE(s.level.at("a"), s.level.at("b"));
}

TEST(Engine, Comparisons) {
    using datalog::CompareOp;
    EXPECT_TRUE(eval_comparison(CompareOp::Eq, Value(1), Value(1.0)));
    EXPECT_TRUE(eval_comparison(CompareOp::Lt, Value(1), Value(1.5)));
    EXPECT_TRUE(eval_comparison(CompareOp::Ne, Value("a"), Value("b")));
    EXPECT_TRUE(eval_comparison(CompareOp::Ge, Value("b"), Value("a")));
    EXPECT_FALSE(eval_comparison(CompareOp::Gt, Value(2), Value(2)));
    EXPECT_EQ(kind_of([] { eval_comparison(CompareOp::Eq, Value(1), Value("1")); }), "TypeError");
}

TEST(Engine, ComparisonBindsFreeVariable) {
    EXPECT_EQ(solve("p(1). p(2). q(X,Y) :- p(X), Y = X.", "q(X,Y)"), (C{{{1, 1}, 1}, {{2, 2}, 1}}));
}

TEST(Engine, LabelsTraceDerivations) {
    auto db = ht::session_instance();
    Engine e(db, datalog::parse_datalog("q(X) :- student(X)."));
    auto out = e.solve({"q", {datalog::var("X")}});
    ASSERT_EQ(out.size(), 4u);
    for (const auto& f : out) EXPECT_EQ(f.label.body.size(), 1u);
    auto rows = e.solve({"student", {datalog::var("X")}});
    for (const auto& f : rows) EXPECT_NE(f.label.row, 0u);
}
