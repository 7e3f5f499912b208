#include "hypoteq/service/session.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "hypoteq/datalog/parser.hpp"
#include "hypoteq/datalog/printer.hpp"
#include "hypoteq/datalog/safety.hpp"
#include "hypoteq/engine/engine.hpp"
#include "hypoteq/error.hpp"
#include "hypoteq/service/storage.hpp"
#include "hypoteq/sql/parser.hpp"

namespace hypoteq::service {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool starts_with(const std::string& s, const std::string& prefix) {
    return s.compare(0, prefix.size(), prefix) == 0;
}

Tuple tuple_of(const datalog::Atom& a) {
    Tuple t;
    for (const auto& arg : a.args) t.push_back(datalog::as_constant(arg));
    return t;
}

std::vector<Tuple> solve_rows(engine::Engine& e, const std::string& pred, std::size_t arity) {
    datalog::Atom g{pred, {}};
    for (std::size_t i = 0; i < arity; ++i) g.args.push_back(datalog::var("X" + std::to_string(i)));
    std::vector<Tuple> rows;
    for (const auto& f : e.solve(g)) rows.push_back(tuple_of(f.fact));
    std::sort(rows.begin(), rows.end());
    return rows;
}

std::string error_text(const Error& e) { return "Error: " + e.kind() + ": " + e.what() + "\n"; }

std::string help_text() {
    return "Commands:\n"
           "  /show_compilations on|off   display compiled Datalog for SQL queries\n"
           "  /assert CLAUSE              add a fact or rule\n"
           "  /listing                    facts and rules\n"
           "  /dbschema                   tables and rule-defined predicates\n"
           "  /save_db FILE, /load_db FILE\n"
           "  /sql TEXT, /datalog GOALS   force the input language\n"
           "  /history, /help, /quit\n"
           "Input that is not a command is SQL when it starts with a SQL keyword,\n"
           "a type directive when it starts with :-type, and a Datalog query otherwise.\n";
}

}  // namespace

bool Session::flag(const std::string& name) const {
    auto it = flags.find(name);
    return it != flags.end() && it->second;
}

translator::Translation compile_query(const db::DatabaseInstance& db, const sql::Query& q) {
    translator::CompileOptions opt;
    for (const auto& [p, _] : db.arities())
        if (p != opt.answer) opt.reserved.insert(p);
    return translator::compile(q, db.catalog(), opt);
}

QueryResult run_query(const db::DatabaseInstance& db, const sql::Query& q) {
    QueryResult out{compile_query(db, q), {}};
    engine::Engine e(db, out.translation.program);
    out.rows = solve_rows(e, out.translation.answer, out.translation.arity);
    return out;
}

DatalogResult run_datalog_query(const db::DatabaseInstance& db, const std::string& text,
                                const datalog::Program& extra) {
    auto goals = datalog::parse_goals(text);
    if (goals.empty()) throw Error("InvalidQuery", "empty query");
    datalog::Program p = extra;
    auto known = db.arities();
    for (const auto& r : p.rules)
        datalog::for_each_atom(r, [&](const datalog::Atom& a) { known.emplace(a.predicate, a.arity()); });
    for (const auto& g : goals) {
        datalog::for_each_atom(g, [&](const datalog::Atom& a) {
            auto it = known.find(a.predicate);
            if (it == known.end()) throw unknown_relation(a.predicate);
            if (it->second != a.arity()) throw ArityMismatch(a.predicate, a.arity(), it->second);
        });
    }
    if (goals.size() == 1 && goals.front().is_atom()) {
        const auto& atom = goals.front().as_atom();
        engine::Engine e(db, p);
        std::vector<Tuple> rows;
        for (const auto& f : e.solve(atom)) rows.push_back(tuple_of(f.fact));
        std::sort(rows.begin(), rows.end());
        return DatalogResult{atom.predicate, std::move(rows)};
    }
    datalog::Rule answer;
    answer.head.predicate = "answer";
    for (const auto& g : goals)
        for (const auto& v : datalog::variables_of(g))
            if (!datalog::Variable{v}.underscored() &&
                std::find(answer.head.args.begin(), answer.head.args.end(), datalog::var(v)) ==
                    answer.head.args.end())
                answer.head.args.push_back(datalog::var(v));
    answer.body = std::move(goals);
    answer.id = datalog::RuleId{datalog::RuleOrigin::Translator, 1};
    if (known.count("answer")) throw Error("RelationExists", "predicate 'answer' is reserved");
    p.rules.push_back(answer);
    engine::Engine e(db, p);
    return DatalogResult{"answer", solve_rows(e, "answer", answer.head.arity())};
}

void assert_clauses(db::DatabaseInstance& db, const datalog::Program& p) {
    db::DatabaseInstance next = db;
    for (const auto& r : p.rules) {
        if (r.is_fact() && !r.restricting() && next.has_table(r.head.predicate)) {
            if (!datalog::is_ground(r.head))
                throw Error("UnsafeRule", "fact '" + datalog::to_string(r.head) + "' is not ground");
            next.insert(r.head.predicate, tuple_of(r.head));
        } else {
            next.add_rule(r);
        }
    }
    engine::Engine check(next);
    db = std::move(next);
}

Schema parse_type_directive(const std::string& text) {
    std::string t = trim(text);
    if (!starts_with(t, ":-")) throw Error("InvalidDirective", "expected ':-type(...)'");
    t = trim(t.substr(2));
    if (!t.empty() && t.back() == '.') t = trim(t.substr(0, t.size() - 1));
    if (!starts_with(t, "type(") || t.back() != ')')
        throw Error("InvalidDirective", "expected ':-type(relation(column:type,...))'");
    t = trim(t.substr(5, t.size() - 6));
    auto open = t.find('(');
    if (open == std::string::npos || t.back() != ')')
        throw Error("InvalidDirective", "expected relation(column:type,...)");
    Schema schema;
    schema.relation = trim(t.substr(0, open));
    if (!datalog::is_bare_atom(schema.relation))
        throw Error("InvalidDirective", "bad relation name '" + schema.relation + "'");
    std::string cols = t.substr(open + 1, t.size() - open - 2);
    std::vector<std::string> parts;
    int depth = 0;
    std::string cur;
    for (char c : cols) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == ',' && depth == 0) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    for (const auto& part : parts) {
        auto colon = part.find(':');
        if (colon == std::string::npos)
            throw Error("InvalidDirective", "expected column:type, found '" + trim(part) + "'");
        std::string name = trim(part.substr(0, colon));
        std::string type = trim(part.substr(colon + 1));
        auto ct = ColumnType::parse(type);
        if (!ct) throw Error("UnknownType", "unknown type '" + type + "'");
        schema.columns.push_back(Column{name, *ct, ""});
    }
    return schema;
}

std::string compiled_text(const datalog::Program& p) {
    std::string out;
    for (const auto& r : p.rules) out += "  " + datalog::to_string(r, datalog::Layout::Session) + "\n";
    return out;
}

std::string answer_text(const std::string& relation, const std::vector<Tuple>& rows) {
    if (rows.empty()) return "{}";
    std::string out = "{ ";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i) out += ", ";
        datalog::Atom a{relation, {}};
        for (const auto& v : rows[i]) a.args.push_back(v);
        out += datalog::to_string(a);
    }
    return out + " }";
}

std::string info_text(std::size_t n) {
    return "Info: " + std::to_string(n) + (n == 1 ? " tuple" : " tuples") + " computed.";
}

namespace {

std::string eval_sql(const std::string& text, Session& s) {
    sql::Statement st = sql::parse_sql(text);
    return std::visit(
        [&](const auto& n) -> std::string {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, sql::Query>) {
                auto r = run_query(s.database, n);
                std::string out;
                if (s.flag("show_compilations"))
                    out += "Info: SQL statement compiled to:\n" + compiled_text(r.translation.program);
                out += r.translation.schema.display() + " ->\n";
                out += answer_text(r.translation.answer, r.rows) + "\n";
                return out + info_text(r.rows.size()) + "\n";
            } else if constexpr (std::is_same_v<T, sql::CreateTable>) {
                Schema schema{n.name, {}};
                for (const auto& [col, type] : n.columns) schema.columns.push_back(Column{col, type, ""});
                s.database.create_table(std::move(schema));
                return "";
            } else if constexpr (std::is_same_v<T, sql::Insert>) {
                db::DatabaseInstance next = s.database;
                for (const auto& row : n.rows) next.insert(n.table, row);
                s.database = std::move(next);
                return "";
            } else {
                for (const auto& r : s.database.rules()) {
                    bool used = false;
                    datalog::for_each_atom(r, [&](const datalog::Atom& a) { used = used || a.predicate == n.name; });
                    if (used)
                        throw Error("RelationInUse", "relation '" + n.name + "' is used by rules");
                }
                s.database.drop_table(n.name);
                return "";
            }
        },
        st);
}

std::string eval_datalog_query(const std::string& text, Session& s) {
    auto r = run_datalog_query(s.database, text);
    return answer_text(r.relation, r.rows) + "\n" + info_text(r.rows.size()) + "\n";
}

std::string listing(const db::DatabaseInstance& db) {
    std::string out;
    for (const auto& [name, t] : db.tables()) {
        for (const auto& row : t.rows) {
            datalog::Atom a{name, {}};
            for (const auto& v : row.values) a.args.push_back(v);
            out += datalog::to_string(a) + ".\n";
        }
    }
    for (const auto& r : db.rules()) out += datalog::to_string(r, datalog::Layout::SingleLine) + "\n";
    return out;
}

std::string dbschema(const db::DatabaseInstance& db) {
    std::string out;
    for (const auto& [name, t] : db.tables()) out += "table " + t.schema.display() + "\n";
    std::map<std::string, std::size_t> heads;
    for (const auto& r : db.rules())
        if (!db.has_table(r.head.predicate)) heads[r.head.predicate] = r.head.arity();
    for (const auto& [p, n] : heads) out += "rules " + p + "/" + std::to_string(n) + "\n";
    return out;
}

std::string eval_command(const std::string& line, Session& s) {
    auto space = line.find_first_of(" \t");
    std::string cmd = line.substr(0, space);
    std::string arg = space == std::string::npos ? "" : trim(line.substr(space));
    if (cmd == "/show_compilations") {
        if (arg == "on" || arg == "off") s.flags["show_compilations"] = arg == "on";
        else if (!arg.empty()) throw Error("InvalidCommand", "expected on or off");
        return std::string("Info: show_compilations is ") +
               (s.flag("show_compilations") ? "on" : "off") + ".\n";
    }
    if (cmd == "/assert") {
        std::string clause = arg;
        if (clause.empty() || clause.back() != '.') clause += '.';
        assert_clauses(s.database, datalog::parse_datalog(clause, {datalog::RuleOrigin::User,
                                                                   s.database.next_rule_seq()}));
        return "";
    }
    if (cmd == "/listing") return listing(s.database);
    if (cmd == "/dbschema") return dbschema(s.database);
    if (cmd == "/save_db") {
        if (arg.empty()) throw Error("InvalidCommand", "/save_db needs a file name");
        save_db(arg, s.database);
        return "Info: database saved to " + arg + ".\n";
    }
    if (cmd == "/load_db") {
        if (arg.empty()) throw Error("InvalidCommand", "/load_db needs a file name");
        s.database = load_db(arg);
        return "Info: database loaded from " + arg + ".\n";
    }
    if (cmd == "/open_db")
        throw unsupported_feature("/open_db (connections to external databases)");
    if (cmd == "/sql") return eval_sql(arg, s);
    if (cmd == "/datalog") return eval_datalog_query(arg, s);
    if (cmd == "/history") {
        std::string out;
        for (std::size_t i = 0; i < s.history.size(); ++i)
            out += std::to_string(i + 1) + "  " + s.history[i] + "\n";
        return out;
    }
    if (cmd == "/help") return help_text();
    if (cmd == "/quit" || cmd == "/exit") {
        s.quit = true;
        return "";
    }
    throw Error("UnknownCommand", "unknown command '" + cmd + "'");
}

}  // namespace

Output repl_eval(const std::string& input, Session& s) {
    std::string line = trim(input);
    if (!line.empty() && line.back() == ';') line = trim(line.substr(0, line.size() - 1));
    if (line.empty()) return {};
    s.history.push_back(line);
    try {
        if (line.front() == '/') return {eval_command(line, s), true};
        if (starts_with(line, ":-")) {
            s.database.create_table(parse_type_directive(line));
            return {};
        }
        if (sql::looks_like_sql(line)) return {eval_sql(line, s), true};
        return {eval_datalog_query(line, s), true};
    } catch (const Error& e) {
        return {error_text(e), false};
    }
}

namespace {

}  // namespace

bool is_complete_statement(const std::string& text) {
    std::string t = trim(text);
    if (t.empty()) return false;
    if (t.front() == '/' || starts_with(t, ":-")) return true;
    try {
        if (sql::looks_like_sql(t)) sql::parse_sql(t);
        else datalog::parse_goals(t);
        return true;
    } catch (const Error&) {
        return false;
    }
}

namespace {

bool starts_statement(const std::string& line) {
    return line.front() == '/' || starts_with(line, ":-") || sql::looks_like_sql(line);
}

}  // namespace

std::vector<std::string> split_statements(const std::string& text) {
    std::vector<std::string> out;
    std::string buf;
    bool quoted = false;
    auto flush = [&] {
        std::string t = trim(buf);
        if (!t.empty()) out.push_back(t);
        buf.clear();
    };
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::string t = trim(line);
        if (!quoted) {
            if (t.empty()) {
                flush();
                continue;
            }
            if (starts_with(t, "%") || starts_with(t, "--")) continue;
            if (!trim(buf).empty() && starts_statement(t) && is_complete_statement(buf)) flush();
            if (trim(buf).empty() && t.front() == '/') {
                out.push_back(t);
                continue;
            }
        }
        for (char c : line) {
            if (c == '\'') quoted = !quoted;
            if (c == ';' && !quoted) {
                flush();
                continue;
            }
            buf += c;
        }
        buf += '\n';
        std::string b = trim(buf);
        if (!quoted && !b.empty() && b.back() == '.' && !sql::looks_like_sql(b)) flush();
    }
    flush();
    return out;
}

ScriptResult run_script_text(const std::string& text, Session& s, bool keep_going) {
    ScriptResult r;
    for (const auto& st : split_statements(text)) {
        Output o = repl_eval(st, s);
        r.output += o.text;
        if (!o.ok) {
            ++r.errors;
            if (!keep_going) break;
        }
        if (s.quit) break;
    }
    return r;
}

ScriptResult run_script(const std::string& path, Session& s, bool keep_going) {
    std::ifstream f(path);
    if (!f) throw Error("IOError", "cannot read '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return run_script_text(ss.str(), s, keep_going);
}

}  // namespace hypoteq::service
