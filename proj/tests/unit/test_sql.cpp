#include <gtest/gtest.h>

#include "hypoteq/error.hpp"
#include "hypoteq/sql/parser.hpp"
#include "hypoteq/sql/resolver.hpp"
#include "support.hpp"

using namespace hypoteq;
using namespace hypoteq::sql;

namespace {

std::string kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    return "";
}

Catalog base() { return hypoteq::testing::session_instance("string").catalog(); }

Schema schema_of(const std::string& sql) { return infer_schema(resolve(parse_query(sql), base())); }

}  // namespace

TEST(SqlParser, KeywordsAreCaseInsensitiveAndIdentifiersLowered) {
    EXPECT_EQ(parse_query("SELECT * FROM Student"), parse_query("select * from student"));
}

TEST(SqlParser, StatementKinds) {
    EXPECT_TRUE(std::holds_alternative<CreateTable>(parse_sql("create table t(a int, b varchar(30));")));
    EXPECT_TRUE(std::holds_alternative<Insert>(parse_sql("insert into t values (1,'x'), (2,'y')")));
    EXPECT_TRUE(std::holds_alternative<DropTable>(parse_sql("drop table t")));
    EXPECT_TRUE(std::holds_alternative<Query>(parse_sql("select 1")));
    auto ct = std::get<CreateTable>(parse_sql("create table t(a int, b varchar(30))"));
    EXPECT_EQ(ct.columns[1].second.spelling, "varchar(30)");
    EXPECT_EQ(ct.columns[1].second.kind, ColumnType::Kind::String);
}

TEST(SqlParser, LooksLikeSql) {
    EXPECT_TRUE(looks_like_sql("  select 1"));
    EXPECT_TRUE(looks_like_sql("(select 1) union all (select 2)"));
    EXPECT_TRUE(looks_like_sql("ASSUME select 1 in r select * from r"));
    EXPECT_FALSE(looks_like_sql("student(X)"));
}

TEST(SqlParser, UnsupportedSql) {
    EXPECT_EQ(kind_of([] { parse_query("select distinct name from student"); }), "UnsupportedFeature");
    EXPECT_EQ(kind_of([] { parse_query("select name from student group by name"); }), "UnsupportedFeature");
    EXPECT_EQ(kind_of([] { parse_query("select name from student union select name from take"); }),
              "UnsupportedFeature");
    EXPECT_EQ(kind_of([] { parse_query("select * from student where name in ('a','b')"); }),
              "UnsupportedFeature");
}

TEST(SqlParser, SyntaxErrorPosition) {
    try {
        parse_query("select *\nfrom");
        FAIL();
    } catch (const SyntaxError& e) {
        EXPECT_EQ(e.position().line, 2u);
    }
}

TEST(SqlParser, AssumeSyntax) {
    auto q = parse_query(
        "assume (select 'adam') not in student, select 1, 2 in r(a, b) select * from r");
    const auto& a = std::get<Assume>(q.node);
    ASSERT_EQ(a.assumptions.size(), 2u);
    EXPECT_EQ(a.assumptions[0].polarity, Polarity::NotIn);
    EXPECT_EQ(a.assumptions[0].target, "student");
    EXPECT_EQ(a.assumptions[1].polarity, Polarity::In);
    ASSERT_TRUE(a.assumptions[1].columns);
    EXPECT_EQ(*a.assumptions[1].columns, (std::vector<std::string>{"a", "b"}));
}

TEST(SqlParser, RoundTrip) {
    const char* queries[] = {
        "select * from student where name not in (select name from take)",
        "with grad(name) as (select student.name from student, take t1, take t2 where "
        "student.name=t1.name and t1.name=t2.name and t1.title='db' and t2.title='lp') select * from grad",
        "assume (select 'adam') not in student, (select 'adam','lp' union all select 'scott','db') in take, "
        "(select student.name from student, take t1, take t2 where student.name=t1.name and "
        "t1.name=t2.name and t1.title='lp' and t2.title='db') in grad(name) select * from grad",
        "assume select 1 in r(a), (assume select 2 in r(a) select * from r) in s select * from r, s",
        "select a.name as n, 'x' from student a where not (a.name = 'bob' or a.name <> 'x') and (a.name, a.name) in (select name, title from take)",
    };
    for (const char* text : queries) {
        Query q = parse_query(text);
        EXPECT_EQ(parse_query(to_sql(q)), q) << text;
    }
}

TEST(Resolver, SchemaAndProvenance) {
    EXPECT_EQ(schema_of("select * from student").display("answer"), "answer(student.name:string)");
    EXPECT_EQ(schema_of("select t.title from take t").display("answer"), "answer(take.title:string)");
    auto s = schema_of("select name as who, 1 from student");
    EXPECT_EQ(s.columns[0].name, "who");
    EXPECT_EQ(s.columns[1].type.kind, ColumnType::Kind::Int);
}

TEST(Resolver, ViewProvenance) {
    auto s = schema_of("with grad(name) as (select name from student) select * from grad");
    EXPECT_EQ(s.display("answer"), "answer(grad.name:string)");
}

TEST(Resolver, Errors) {
    auto cat = base();
    auto err = [&](const std::string& sql) { return kind_of([&] { resolve(parse_query(sql), cat); }); };
    EXPECT_EQ(err("select * from nosuch"), "UnknownRelation");
    EXPECT_EQ(err("select nosuch from student"), "UnknownColumn");
    EXPECT_EQ(err("select name from student, take"), "AmbiguousColumn");
    EXPECT_EQ(err("select * from student s, take s"), "DuplicateAlias");
    EXPECT_EQ(err("select * from student where name = 1"), "TypeMismatch");
    EXPECT_EQ(err("select * from student where name in (select name, title from take)"), "ArityMismatch");
    EXPECT_EQ(err("select name from student union all select name, title from take"), "ArityMismatch");
    EXPECT_EQ(err("with v(a) as (select 1), v(b) as (select 2) select * from v"), "DuplicateName");
    EXPECT_EQ(err("with v(a, a) as (select 1, 2) select * from v"), "DuplicateColumn");
    EXPECT_EQ(err("with v(a, b) as (select 1) select * from v"), "ArityMismatch");
    EXPECT_EQ(err("assume select 1 in student select * from student"), "TypeMismatch");
}

TEST(Resolver, CorrelatedSubqueryIsUnsupported) {
    EXPECT_EQ(kind_of([] {
                  resolve(parse_query("select * from student s where s.name in "
                                      "(select t.name from take t where t.name = s.name)"),
                          base());
              }),
              "UnsupportedFeature");
}

TEST(Resolver, RecursiveAssumptionIsUnsupported) {
    EXPECT_EQ(kind_of([] {
                  resolve(parse_query("assume (select name from student) in student select * from student"), base());
              }),
              "UnsupportedFeature");
    EXPECT_EQ(kind_of([] {
                  resolve(parse_query("with v(n) as (select name from student) "
                                      "assume (select n from v) in student select * from student"),
                          base());
              }),
              "UnsupportedFeature");
}

TEST(Resolver, ViewsAreLocalToTheirQuery) {
    EXPECT_EQ(kind_of([] {
                  resolve(parse_query("select * from student where name in "
                                      "(with v(n) as (select name from take) select n from v) "
                                      "union all select n from v"),
                          base());
              }),
              "UnknownRelation");
}

TEST(Resolver, AssumptionTargetsMayBeNew) {
    auto s = schema_of("assume (select 'x') in fresh(c) select * from fresh");
    EXPECT_EQ(s.arity(), 1u);
    EXPECT_EQ(s.columns[0].name, "c");
}
