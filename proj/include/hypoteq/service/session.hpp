#pragma once

#include <map>
#include <string>
#include <vector>

#include "hypoteq/datalog/ast.hpp"
#include "hypoteq/db/instance.hpp"
#include "hypoteq/sql/ast.hpp"
#include "hypoteq/translator/translator.hpp"

namespace hypoteq::service {

using datalog::Tuple;

struct Session {
    db::DatabaseInstance database;
    std::map<std::string, bool> flags{{"show_compilations", false}};
    std::vector<std::string> history;
    bool quit = false;

    bool flag(const std::string& name) const;
};

struct Output {
    std::string text;
    bool ok = true;
};

/// Result of one SQL query: the translation and every answer occurrence,
/// sorted by tuple.
struct QueryResult {
    translator::Translation translation;
    std::vector<Tuple> rows;
};

/// Compiles and solves `q` against `db` without changing it.
QueryResult run_query(const db::DatabaseInstance& db, const sql::Query& q);

/// Translation only.
translator::Translation compile_query(const db::DatabaseInstance& db, const sql::Query& q);

/// Datalog conjunctive query; a single atom answers with its own instances,
/// anything else through `answer(V1,...)` over the named variables.
struct DatalogResult {
    std::string relation;
    std::vector<Tuple> rows;
};
DatalogResult run_datalog_query(const db::DatabaseInstance& db, const std::string& goals,
                                const datalog::Program& extra = {});

/// Adds clauses to `db`: ground facts on tables become rows, the rest rules.
/// The program as a whole must stay safe and stratifiable.
void assert_clauses(db::DatabaseInstance& db, const datalog::Program& p);

/// `:-type(p(a:int,b:varchar(30)))`
Schema parse_type_directive(const std::string& text);

// Display helpers used by the REPL and the HTTP API.
std::string compiled_text(const datalog::Program& p);
std::string answer_text(const std::string& relation, const std::vector<Tuple>& rows);
std::string info_text(std::size_t n);

/// One line or statement at the prompt: a `/command`, a SQL statement, a
/// `:-type` directive or a Datalog query. Errors are rendered into the
/// output and never change the session.
Output repl_eval(const std::string& line, Session& s);

/// Splits script text into statements. A statement ends at `;`, at a blank
/// line, after a command line, after a Datalog clause ending in `.`, or
/// before a line that starts a new statement when the text so far parses.
std::vector<std::string> split_statements(const std::string& text);

/// True for a command, a directive, or text that parses as one statement.
bool is_complete_statement(const std::string& text);

struct ScriptResult {
    std::string output;
    std::size_t errors = 0;
};

/// Throws Error("IOError") when the file cannot be read. Stops at the first
/// failing statement unless `keep_going`.
ScriptResult run_script(const std::string& path, Session& s, bool keep_going = false);
ScriptResult run_script_text(const std::string& text, Session& s, bool keep_going = false);

}  // namespace hypoteq::service
