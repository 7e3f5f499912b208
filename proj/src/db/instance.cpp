#include "hypoteq/db/instance.hpp"

#include <algorithm>

#include "hypoteq/datalog/printer.hpp"
#include "hypoteq/error.hpp"

namespace hypoteq::db {

const Table* DatabaseInstance::table(const std::string& name) const {
    auto it = tables_.find(name);
    return it == tables_.end() ? nullptr : &it->second;
}

std::map<std::string, Schema> DatabaseInstance::catalog() const {
    std::map<std::string, Schema> out;
    for (const auto& [name, t] : tables_) out[name] = t.schema;
    return out;
}

void DatabaseInstance::create_table(Schema schema) {
    if (tables_.count(schema.relation))
        throw Error("RelationExists", "relation '" + schema.relation + "' already exists");
    for (const auto& r : rules_) {
        if (r.head.predicate == schema.relation)
            throw Error("RelationExists",
                        "relation '" + schema.relation + "' is already defined by rules");
    }
    std::string name = schema.relation;
    for (std::size_t i = 0; i < schema.columns.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (schema.columns[i].name == schema.columns[j].name)
                throw Error("DuplicateColumn", "column '" + schema.columns[i].name +
                                                   "' appears twice in relation '" + name + "'");
        }
        schema.columns[i].provenance = name + "." + schema.columns[i].name;
    }
    tables_[name] = Table{std::move(schema), {}};
}

void DatabaseInstance::drop_table(const std::string& name) {
    if (!tables_.erase(name)) throw unknown_relation(name);
}

Tuple DatabaseInstance::check_row(const Table& t, Tuple values) const {
    if (values.size() != t.schema.arity())
        throw ArityMismatch(t.schema.relation, values.size(), t.schema.arity());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const auto& col = t.schema.columns[i];
        Value& v = values[i];
        bool ok = false;
        switch (col.type.kind) {
            case ColumnType::Kind::Int: ok = v.is_int(); break;
            case ColumnType::Kind::Float:
                if (v.is_int()) v = Value(static_cast<double>(v.as_int()));
                ok = v.is_float();
                break;
            case ColumnType::Kind::String: ok = v.is_string(); break;
        }
        if (!ok)
            throw type_mismatch(t.schema.relation + "." + col.name, col.type.spelling,
                                datalog::to_string(v));
    }
    return values;
}

std::uint64_t DatabaseInstance::insert(const std::string& table, Tuple values) {
    auto it = tables_.find(table);
    if (it == tables_.end()) throw unknown_relation(table);
    Tuple row = check_row(it->second, std::move(values));
    std::uint64_t label = next_label_++;
    it->second.rows.push_back(StoredFact{std::move(row), label});
    return label;
}

void DatabaseInstance::insert_labelled(const std::string& table, Tuple values,
                                       std::uint64_t label) {
    auto it = tables_.find(table);
    if (it == tables_.end()) throw unknown_relation(table);
    for (const auto& [name, t] : tables_) {
        for (const auto& r : t.rows) {
            if (r.label == label)
                throw Error("DuplicateLabel", "label " + std::to_string(label) + " used twice");
        }
    }
    Tuple row = check_row(it->second, std::move(values));
    it->second.rows.push_back(StoredFact{std::move(row), label});
    if (label >= next_label_) next_label_ = label + 1;
}

std::map<std::string, std::size_t> DatabaseInstance::arities() const {
    std::map<std::string, std::size_t> out;
    for (const auto& [name, t] : tables_) out[name] = t.schema.arity();
    for (const auto& r : rules_) {
        datalog::for_each_atom(r, [&](const datalog::Atom& a) { out.emplace(a.predicate, a.arity()); });
    }
    return out;
}

void DatabaseInstance::add_rule(datalog::Rule rule) {
    auto known = arities();
    datalog::for_each_atom(rule, [&](const datalog::Atom& a) {
        auto it = known.find(a.predicate);
        if (it != known.end() && it->second != a.arity())
            throw ArityMismatch(a.predicate, a.arity(), it->second);
        known.emplace(a.predicate, a.arity());
    });
    rule.id = datalog::RuleId{datalog::RuleOrigin::User, next_rule_seq_++};
    rules_.push_back(std::move(rule));
}

void DatabaseInstance::restore_counters(std::uint64_t next_label, std::uint64_t next_rule_seq) {
    next_label_ = std::max(next_label_, next_label);
    next_rule_seq_ = std::max(next_rule_seq_, next_rule_seq);
}

}  // namespace hypoteq::db
