#include "hypoteq/service/http_api.hpp"

#include "httplib.h"

#include "hypoteq/datalog/parser.hpp"
#include "hypoteq/datalog/printer.hpp"
#include "hypoteq/error.hpp"
#include "hypoteq/service/session.hpp"
#include "hypoteq/sql/parser.hpp"

namespace hypoteq::service {

using nlohmann::json;

namespace {

json value_json(const datalog::Value& v) {
    if (v.is_int()) return v.as_int();
    if (v.is_float()) return v.as_float();
    return v.as_string();
}

json schema_json(const Schema& s) {
    json cols = json::array();
    for (const auto& c : s.columns)
        cols.push_back({{"name", c.name}, {"type", c.type.spelling}, {"provenance", c.provenance}});
    return {{"relation", s.relation}, {"display", s.display()}, {"columns", cols}};
}

// rows: every occurrence; multiplicities: one entry per distinct row.
void rows_json(json& out, const std::vector<Tuple>& rows) {
    json all = json::array(), counted = json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        json r = json::array();
        for (const auto& v : rows[i]) r.push_back(value_json(v));
        all.push_back(r);
        if (i && rows[i] == rows[i - 1]) counted.back()["count"] = counted.back()["count"].get<int>() + 1;
        else counted.push_back({{"row", r}, {"count", 1}});
    }
    out["rows"] = all;
    out["multiplicities"] = counted;
}

ApiResponse failure(const Error& e) {
    json err = {{"kind", e.kind()}, {"message", e.what()}};
    if (const auto* se = dynamic_cast<const SyntaxError*>(&e)) {
        err["line"] = se->position().line;
        err["column"] = se->position().column;
    }
    int status = (e.kind() == "RelationExists" || e.kind() == "DuplicateLabel" ||
                  e.kind() == "WriteConflict")
                     ? 409
                     : 400;
    return {status, {{"error", err}}};
}

json parse_body(const std::string& body) {
    json j = json::parse(body, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw Error("InvalidRequest", "body must be a JSON object");
    return j;
}

std::string field(const json& j, const char* name) {
    auto it = j.find(name);
    if (it == j.end() || !it->is_string())
        throw Error("InvalidRequest", std::string("missing string field '") + name + "'");
    return it->get<std::string>();
}

template <class F>
ApiResponse guarded(F&& f) {
    try {
        return f();
    } catch (const Error& e) {
        return failure(e);
    }
}

std::string rules_text(const datalog::Program& p) {
    std::string out;
    for (const auto& r : p.rules) out += datalog::to_string(r, datalog::Layout::Session) + "\n";
    return out;
}

}  // namespace

Api::Api(db::DatabaseInstance db) : db_(std::make_shared<const db::DatabaseInstance>(std::move(db))) {}

std::shared_ptr<const db::DatabaseInstance> Api::snapshot() const {
    std::lock_guard lock(snapshot_mutex_);
    return db_;
}

std::uint64_t Api::version() const {
    std::lock_guard lock(snapshot_mutex_);
    return version_;
}

template <class F>
ApiResponse Api::write(const json& request, F&& mutate) {
    std::lock_guard writer(writer_);
    if (auto it = request.find("expectedVersion"); it != request.end()) {
        if (!it->is_number_unsigned() || it->get<std::uint64_t>() != version())
            throw Error("WriteConflict", "database version is " + std::to_string(version()));
    }
    db::DatabaseInstance next = *snapshot();
    std::string info = mutate(next);
    std::lock_guard lock(snapshot_mutex_);
    db_ = std::make_shared<const db::DatabaseInstance>(std::move(next));
    ++version_;
    return {200, {{"info", info}, {"version", version_}}};
}

ApiResponse Api::query(const std::string& body) const {
    return guarded([&] {
        auto st = sql::parse_sql(field(parse_body(body), "sql"));
        const auto* q = std::get_if<sql::Query>(&st);
        if (!q) throw Error("InvalidQuery", "POST /query takes a query; use /ddl for other statements");
        auto db = snapshot();
        auto r = run_query(*db, *q);
        json out = {{"schema", schema_json(r.translation.schema)},
                    {"compiledProgram", rules_text(r.translation.program)},
                    {"info", info_text(r.rows.size())}};
        rows_json(out, r.rows);
        return ApiResponse{200, out};
    });
}

ApiResponse Api::datalog(const std::string& body) {
    return guarded([&] {
        json req = parse_body(body);
        std::string program = req.contains("program") ? field(req, "program") : "";
        if (req.contains("query")) {
            auto db = snapshot();
            auto extra = datalog::parse_datalog(program, {datalog::RuleOrigin::User, db->next_rule_seq()});
            auto r = run_datalog_query(*db, field(req, "query"), extra);
            json out = {{"relation", r.relation}, {"info", info_text(r.rows.size())}};
            rows_json(out, r.rows);
            return ApiResponse{200, out};
        }
        return write(req, [&](db::DatabaseInstance& next) {
            auto p = datalog::parse_datalog(program, {datalog::RuleOrigin::User, next.next_rule_seq()});
            assert_clauses(next, p);
            std::size_t n = p.rules.size();
            return "Info: " + std::to_string(n) + (n == 1 ? " clause" : " clauses") + " asserted.";
        });
    });
}

ApiResponse Api::catalog() const {
    auto db = snapshot();
    json rels = json::array();
    for (const auto& [name, t] : db->tables()) {
        json s = schema_json(t.schema);
        s["rowCount"] = t.rows.size();
        rels.push_back(s);
    }
    json preds = json::array();
    std::map<std::string, std::size_t> heads;
    for (const auto& r : db->rules())
        if (!db->has_table(r.head.predicate)) heads[r.head.predicate] = r.head.arity();
    for (const auto& [p, n] : heads) preds.push_back({{"name", p}, {"arity", n}});
    return {200, {{"version", version()}, {"relations", rels}, {"predicates", preds}}};
}

ApiResponse Api::ddl(const std::string& body) {
    return guarded([&] {
        json req = parse_body(body);
        std::string stmt = field(req, "stmt");
        return write(req, [&](db::DatabaseInstance& next) -> std::string {
            if (stmt.rfind(":-", 0) == 0) {
                next.create_table(parse_type_directive(stmt));
                return "Info: table created.";
            }
            auto st = sql::parse_sql(stmt);
            if (const auto* ct = std::get_if<sql::CreateTable>(&st)) {
                Schema schema{ct->name, {}};
                for (const auto& [c, type] : ct->columns) schema.columns.push_back(Column{c, type, ""});
                next.create_table(std::move(schema));
                return "Info: table created.";
            }
            if (const auto* ins = std::get_if<sql::Insert>(&st)) {
                for (const auto& row : ins->rows) next.insert(ins->table, row);
                std::size_t n = ins->rows.size();
                return "Info: " + std::to_string(n) + (n == 1 ? " tuple" : " tuples") + " inserted.";
            }
            if (const auto* drop = std::get_if<sql::DropTable>(&st)) {
                for (const auto& r : next.rules()) {
                    bool used = false;
                    datalog::for_each_atom(r, [&](const datalog::Atom& a) { used = used || a.predicate == drop->name; });
                    if (used) throw Error("RelationInUse", "relation '" + drop->name + "' is used by rules");
                }
                next.drop_table(drop->name);
                return "Info: table dropped.";
            }
            throw Error("InvalidStatement", "POST /ddl takes CREATE TABLE, INSERT or DROP TABLE");
        });
    });
}

ApiResponse Api::compile(const std::string& sql_text) const {
    return guarded([&] {
        auto q = sql::parse_query(sql_text);
        auto db = snapshot();
        auto t = compile_query(*db, q);
        json rules = json::array();
        for (const auto& r : t.program.rules)
            rules.push_back(datalog::to_string(r, datalog::Layout::SingleLine));
        return ApiResponse{200, {{"schema", schema_json(t.schema)},
                                 {"compiledProgram", rules_text(t.program)},
                                 {"rules", rules}}};
    });
}

void Api::mount(httplib::Server& server) {
    auto send = [](httplib::Response& res, const ApiResponse& r) {
        res.status = r.status;
        res.set_content(r.body.dump(), "application/json");
    };
    server.Post("/query", [this, send](const httplib::Request& req, httplib::Response& res) {
        send(res, query(req.body));
    });
    server.Post("/datalog", [this, send](const httplib::Request& req, httplib::Response& res) {
        send(res, datalog(req.body));
    });
    server.Post("/ddl", [this, send](const httplib::Request& req, httplib::Response& res) {
        send(res, ddl(req.body));
    });
    server.Get("/catalog", [this, send](const httplib::Request&, httplib::Response& res) {
        send(res, catalog());
    });
    server.Get("/compile", [this, send](const httplib::Request& req, httplib::Response& res) {
        if (!req.has_param("sql")) {
            send(res, failure(Error("InvalidRequest", "missing query parameter 'sql'")));
            return;
        }
        send(res, compile(req.get_param_value("sql")));
    });
}

}  // namespace hypoteq::service
