#include <gtest/gtest.h>

#include "hypoteq/datalog/printer.hpp"
#include "hypoteq/datalog/safety.hpp"
#include "hypoteq/error.hpp"
#include "hypoteq/sql/parser.hpp"
#include "hypoteq/sql/resolver.hpp"
#include "hypoteq/translator/translator.hpp"
#include "support.hpp"

using namespace hypoteq;
using namespace hypoteq::translator;
namespace ht = hypoteq::testing;

namespace {

Translation compiled(const std::string& sql, bool simplify = true, const std::string& type = "varchar(30)") {
    CompileOptions o;
    o.simplify = simplify;
    return compile(sql::parse_query(sql), ht::session_instance(type).catalog(), o);
}

std::string text(const Translation& t) {
    auto s = datalog::to_string(t.program, datalog::Layout::SingleLine);
    while (!s.empty() && s.back() == '\n') s.pop_back();
    return s;
}

const char* kNotIn = "select * from student where name not in (select name from take)";
const char* kWith =
    "with grad(name) as (select student.name from student, take t1, take t2 "
    "where student.name=t1.name and t1.name=t2.name and t1.title='db' and t2.title='lp') "
    "select * from grad";
const char* kAssume =
    "assume (select 'adam') not in student, "
    "(select 'adam','lp' union all select 'scott','db') in take, "
    "(select student.name from student, take t1, take t2 where student.name=t1.name and "
    "t1.name=t2.name and t1.title='lp' and t2.title='db') in grad(name) "
    "select * from grad";

}  // namespace

TEST(Translator, NotInCompilesToNegation) {
    auto t = compiled(kNotIn, true, "string");
    EXPECT_EQ(text(t), "answer(A) :- student(A), not take(A,_B).");
    EXPECT_EQ(t.schema.display(t.answer), "answer(student.name:string)");
}

TEST(Translator, WithCompilesToImplication) {
    auto t = compiled(kWith);
    EXPECT_EQ(text(t), "answer(A) :- (grad(B) :- student(B), take(B,db), take(B,lp)) => grad(A).");
    EXPECT_EQ(t.schema.display(t.answer), "answer(grad.name:varchar(30))");
}

TEST(Translator, AssumeCompilesToRestrictingAndAddedFacts) {
    auto t = compiled(kAssume);
    EXPECT_EQ(text(t),
              "answer(A) :- -student(adam) /\\ take(adam,lp) /\\ take(scott,db) /\\ "
              "(grad(B) :- student(B), take(B,lp), take(B,db)) => grad(A).");
}

TEST(Translator, UnsimplifiedOutputIsSafeAndKeepsAuxiliaries) {
    for (const char* q : {kNotIn, kWith, kAssume}) {
        auto t = compiled(q, false);
        EXPECT_FALSE(datalog::find_unsafe(t.program)) << q;
        EXPECT_GE(t.program.rules.size(), compiled(q).program.rules.size()) << q;
    }
}

TEST(Translator, EqualitiesBecomeSharedVariablesAndConstants) {
    auto t = compiled("select t.name from take t where t.title = 'db'");
    EXPECT_EQ(text(t), "answer(A) :- take(A,db).");
    t = compiled("select t1.name from take t1, take t2 where t1.name = t2.name and t1.title <> t2.title");
    EXPECT_EQ(text(t), "answer(A) :- take(A,B), take(A,C), B \\= C.");
}

TEST(Translator, OrIsADoubleNegation) {
    auto t = compiled("select name from take where title = 'db' or name = 'adam'");
    ASSERT_EQ(t.program.rules.size(), 2u);
    const auto& top = t.program.rules[0];
    EXPECT_EQ(top.head.predicate, "answer");
    ASSERT_EQ(top.body.size(), 2u);
    EXPECT_TRUE(top.body[1].is_negation());
    // the auxiliary keeps rows satisfying neither disjunct
    EXPECT_EQ(ht::counts(ht::engine_answer(ht::session_instance(), "select name from take where title = 'db' or name = 'adam'")),
              ht::counts({{"adam"}, {"pete"}}));
}

TEST(Translator, PositiveInIsASemiJoin) {
    auto db = ht::session_instance();
    db.insert("take", {"adam", "lp"});
    auto rows = ht::engine_answer(db, "select name from student where name in (select name from take)");
    // adam appears twice in take but once in the answer
    EXPECT_EQ(ht::counts(rows), ht::counts({{"adam"}, {"pete"}, {"scott"}}));
}

TEST(Translator, UnionAllKeepsDuplicates) {
    auto t = compiled("select name from student union all select name from take");
    EXPECT_EQ(t.arity, 1u);
    EXPECT_EQ(ht::engine_answer(ht::session_instance(), "select name from student union all select name from take").size(), 8u);
}

TEST(Translator, ReservedPredicatesAreNotRedefined) {
    CompileOptions o;
    o.reserved = {"grad"};
    auto t = compile(sql::parse_query(kWith), ht::session_instance().catalog(), o);
    for (const auto& r : t.program.rules) EXPECT_NE(r.head.predicate, "grad");
    EXPECT_EQ(t.schema.display(t.answer), "answer(grad.name:varchar(30))");
}

TEST(Translator, SubqueryInFromAndNestedAssume) {
    auto t = compiled("select x.name from (select name from take where title = 'lp') x");
    EXPECT_EQ(text(t), "answer(A) :- take(A,lp).");
    t = compiled("assume select 'zed' in student assume select 'zed','db' in take select * from take");
    EXPECT_EQ(t.arity, 2u);
}

TEST(Translator, FoldUnfoldPreservesMeaningOnSessions) {
    auto db = ht::session_instance();
    for (const char* q : {kNotIn, kWith, kAssume}) {
        EXPECT_EQ(ht::counts(ht::engine_answer(db, q, true)), ht::counts(ht::engine_answer(db, q, false))) << q;
    }
}

TEST(Translator, FreshNamesAvoidCatalogAndAnswer) {
    auto t = compiled("with answer(n) as (select name from student) select * from answer");
    EXPECT_EQ(t.program.rules.front().head.predicate, "answer");
    EXPECT_EQ(t.schema.display(t.answer), "answer(answer.n:varchar(30))");
    EXPECT_EQ(ht::engine_answer(ht::session_instance(), "with answer(n) as (select name from student) select * from answer").size(), 4u);
}
