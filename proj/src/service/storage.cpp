#include "hypoteq/service/storage.hpp"

#include <fstream>
#include <sstream>

#include "hypoteq/datalog/parser.hpp"
#include "hypoteq/datalog/printer.hpp"
#include "hypoteq/error.hpp"
#include "hypoteq/sql/parser.hpp"

namespace hypoteq::service {

namespace {

const char* kHeader = "hypoteq-db v1";

}  // namespace

std::string dump_database(const db::DatabaseInstance& db) {
    std::string out = std::string(kHeader) + "\n";
    out += "% next_label " + std::to_string(db.next_label()) + " next_rule " +
           std::to_string(db.next_rule_seq()) + "\n";
    for (const auto& [name, t] : db.tables()) {
        sql::CreateTable ct{name, {}};
        for (const auto& c : t.schema.columns) ct.columns.emplace_back(c.name, c.type);
        out += sql::to_sql(sql::Statement{ct}) + ";\n";
    }
    for (const auto& [name, t] : db.tables()) {
        for (const auto& row : t.rows) {
            datalog::Atom a{name, {}};
            for (const auto& v : row.values) a.args.push_back(v);
            out += datalog::to_string(a) + ". %@" + std::to_string(row.label) + "\n";
        }
    }
    for (const auto& r : db.rules()) out += datalog::to_string(r, datalog::Layout::SingleLine) + "\n";
    return out;
}

db::DatabaseInstance read_database(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kHeader) {
        std::string found = line.empty() ? "empty header" : "'" + line + "'";
        throw Error("VersionError", "expected '" + std::string(kHeader) + "', found " + found);
    }
    db::DatabaseInstance db;
    std::uint64_t next_label = 1, next_rule = 1;
    std::string rules;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.rfind("% next_label ", 0) == 0) {
            std::istringstream meta(line.substr(2));
            std::string k1, k2;
            meta >> k1 >> next_label >> k2 >> next_rule;
            continue;
        }
        if (line.back() == ';') {
            auto st = sql::parse_sql(line);
            const auto* ct = std::get_if<sql::CreateTable>(&st);
            if (!ct) throw Error("InvalidDatabase", "only CREATE TABLE may appear: " + line);
            Schema schema{ct->name, {}};
            for (const auto& [col, type] : ct->columns) schema.columns.push_back(Column{col, type, ""});
            db.create_table(std::move(schema));
            continue;
        }
        auto mark = line.rfind("%@");
        if (mark != std::string::npos) {
            auto p = datalog::parse_datalog(line.substr(0, mark));
            if (p.rules.size() != 1 || !p.rules.front().is_fact())
                throw Error("InvalidDatabase", "expected one labelled fact: " + line);
            const auto& head = p.rules.front().head;
            datalog::Tuple row;
            for (const auto& a : head.args) {
                if (datalog::is_variable(a)) throw Error("InvalidDatabase", "fact is not ground: " + line);
                row.push_back(datalog::as_constant(a));
            }
            db.insert_labelled(head.predicate, row, std::stoull(line.substr(mark + 2)));
            continue;
        }
        rules += line + "\n";
    }
    for (auto& r : datalog::parse_datalog(rules).rules) db.add_rule(std::move(r));
    db.restore_counters(next_label, next_rule);
    return db;
}

void save_db(const std::string& path, const db::DatabaseInstance& db) {
    std::ofstream f(path);
    if (!f) throw Error("IOError", "cannot write '" + path + "'");
    f << dump_database(db);
    if (!f) throw Error("IOError", "cannot write '" + path + "'");
}

db::DatabaseInstance load_db(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error("IOError", "cannot read '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return read_database(ss.str());
}

}  // namespace hypoteq::service
