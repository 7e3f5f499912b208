#include <gtest/gtest.h>

#include "hypoteq/datalog/parser.hpp"
#include "hypoteq/datalog/printer.hpp"
#include "hypoteq/service/storage.hpp"
#include "hypoteq/sql/parser.hpp"
#include "hypoteq/translator/translator.hpp"
#include "support.hpp"

using namespace hypoteq;
using namespace hypoteq::testing;

namespace {

const char* kQueries[] = {
    "select * from student where name not in\n  (select name from take)",
    "with grad(name) as\n  (select student.name\n   from student, take t1, take t2\n   where student.name=t1.name\n"
    "     and t1.name=t2.name\n     and t1.title='db' and t2.title='lp')\nselect * from grad",
    "assume\n  (select 'adam') not in student,\n  (select 'adam','lp' union all select 'scott','db')\n    in take,\n"
    "  (select student.name from student, take t1, take t2\n    where student.name=t1.name and t1.name=t2.name and\n"
    "          t1.title='lp' and t2.title='db') in grad(name)\nselect * from grad",
    "ASSUME SELECT 1 IN r(a), (ASSUME SELECT 2 IN r(a) SELECT * FROM r) IN s SELECT * FROM r, s",
};

const char* kPrograms[] = {
    "answer(A) :- student(A), not take(A,_B).",
    "answer(A) :-\n  (grad(B) :- student(B), take(B,db), take(B,lp))\n  =>\n  grad(A).",
    "answer(A) :-\n  -student(adam) /\\ take(adam,lp) /\\ take(scott,db) /\\\n"
    "  (grad(B) :- student(B), take(B,lp), take(B,db))\n  =>\n  grad(A).",
};

}  // namespace

TEST(RoundTrip, GoldenDatalogPrograms) {
    for (const char* text : kPrograms) {
        auto p = datalog::parse_datalog(text);
        EXPECT_EQ(datalog::to_string(p.rules.front(), datalog::Layout::Session), text);
        for (auto layout : {datalog::Layout::Session, datalog::Layout::SingleLine})
            EXPECT_EQ(datalog::parse_datalog(datalog::to_string(p, layout)), p) << text;
    }
}

TEST(RoundTrip, CompiledProgramsOfGoldenQueries) {
    auto db = session_instance();
    for (const char* sql : kQueries) {
        auto q = sql::parse_query(sql);
        auto catalog = db.catalog();
        for (bool simplify : {true, false}) {
            translator::CompileOptions o;
            o.simplify = simplify;
            auto t = translator::compile(q, catalog, o);
            EXPECT_EQ(datalog::parse_datalog(datalog::to_string(t.program)), t.program) << sql;
        }
    }
}

TEST(RoundTrip, GoldenSqlQueries) {
    for (const char* text : kQueries) {
        auto q = sql::parse_query(text);
        auto printed = sql::to_sql(q);
        EXPECT_EQ(sql::parse_query(printed), q) << text;
        EXPECT_EQ(sql::to_sql(sql::parse_query(printed)), printed) << text;
    }
}

TEST(RoundTrip, GeneratedSqlQueries) {
    Generator gen(99);
    for (int i = 0; i < 300; ++i) {
        auto text = gen.query();
        auto q = sql::parse_query(text);
        EXPECT_EQ(sql::parse_query(sql::to_sql(q)), q) << text;
    }
}

TEST(RoundTrip, Statements) {
    for (const char* text : {"create table student(name varchar(30))", "create table m(x int, y float, z string)",
                             "insert into take values ('adam', 'db'), ('it''s', 'x')", "drop table take"}) {
        auto st = sql::parse_sql(text);
        EXPECT_EQ(sql::parse_sql(sql::to_sql(st)), st) << text;
    }
}

TEST(RoundTrip, SaveLoadIdentity) {
    auto db = session_instance();
    db.insert("take", {"pete", "db"});
    db.create_table(Schema{"m", {Column{"x", ColumnType::integer(), ""}, Column{"y", ColumnType::floating(), ""},
                                 Column{"z", ColumnType::string(), ""}}});
    db.insert("m", {-1, 2.5, "Hello 'world'"});
    db.insert("m", {7, 1.0, "%@ not a label"});
    for (auto& r : datalog::parse_datalog("grad(X) :- (take(X,lp)) => take(X,db), take(X,lp). "
                                          "h(X) :- (-student(Y) :- take(Y,db)) => student(X).")
                       .rules)
        db.add_rule(r);
    auto text = service::dump_database(db);
    auto back = service::read_database(text);
    EXPECT_EQ(back, db);
    EXPECT_EQ(service::dump_database(back), text);
}

TEST(RoundTrip, GeneratedInstances) {
    Generator gen(5);
    for (int i = 0; i < 100; ++i) {
        auto db = gen.instance();
        EXPECT_EQ(service::read_database(service::dump_database(db)), db);
    }
}
