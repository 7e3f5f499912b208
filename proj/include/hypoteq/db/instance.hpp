#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hypoteq/datalog/ast.hpp"
#include "hypoteq/datalog/value.hpp"
#include "hypoteq/schema.hpp"

namespace hypoteq::db {

using datalog::Tuple;
using datalog::Value;

/// One stored occurrence of a table row. Labels are unique per instance.
struct StoredFact {
    Tuple values;
    std::uint64_t label = 0;

    friend bool operator==(const StoredFact&, const StoredFact&) = default;
};

struct Table {
    Schema schema;
    std::vector<StoredFact> rows;

    friend bool operator==(const Table&, const Table&) = default;
};

/// Extensional tables (multisets of labelled rows) plus intensional rules.
class DatabaseInstance {
public:
    const std::map<std::string, Table>& tables() const { return tables_; }
    const Table* table(const std::string& name) const;
    bool has_table(const std::string& name) const { return tables_.count(name) != 0; }

    /// Name -> schema for every table.
    std::map<std::string, Schema> catalog() const;

    /// Throws Error("RelationExists").
    void create_table(Schema schema);
    /// Throws UnknownRelation.
    void drop_table(const std::string& name);

    /// Checks arity and column types; float columns accept integers.
    /// Returns the label of the new row.
    std::uint64_t insert(const std::string& table, Tuple values);
    /// Used when loading a saved instance; keeps the given label.
    void insert_labelled(const std::string& table, Tuple values, std::uint64_t label);

    const std::vector<datalog::Rule>& rules() const { return rules_; }
    /// Checks arity against tables and existing rules. Assigns a fresh id.
    void add_rule(datalog::Rule rule);

    /// Predicates defined by rules or tables, with their arity.
    std::map<std::string, std::size_t> arities() const;

    std::uint64_t next_label() const { return next_label_; }
    std::uint64_t next_rule_seq() const { return next_rule_seq_; }
    /// Used when loading; counters never move backwards.
    void restore_counters(std::uint64_t next_label, std::uint64_t next_rule_seq);

    friend bool operator==(const DatabaseInstance&, const DatabaseInstance&) = default;

private:
    Tuple check_row(const Table& t, Tuple values) const;

    std::map<std::string, Table> tables_;
    std::vector<datalog::Rule> rules_;
    std::uint64_t next_label_ = 1;
    std::uint64_t next_rule_seq_ = 1;
};

}  // namespace hypoteq::db
