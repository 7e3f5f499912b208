#pragma once

#include <optional>
#include <string>
#include <vector>

namespace hypoteq {

/// Column types. `string`, `varchar(n)` and friends share the String kind;
/// the declared spelling is kept for display.
struct ColumnType {
    enum class Kind { Int, Float, String };
    Kind kind = Kind::String;
    std::string spelling = "string";

    static ColumnType integer() { return {Kind::Int, "int"}; }
    static ColumnType floating() { return {Kind::Float, "float"}; }
    static ColumnType string() { return {Kind::String, "string"}; }

    /// Parses a type name such as `int`, `real`, `varchar(30)`. Returns
    /// nullopt for unknown names.
    static std::optional<ColumnType> parse(const std::string& spelling);

    bool compatible(const ColumnType& other) const { return kind == other.kind; }
    friend bool operator==(const ColumnType&, const ColumnType&) = default;
};

const char* kind_name(ColumnType::Kind k);

struct Column {
    std::string name;
    ColumnType type;
    // Qualified origin such as `student.name`; empty for generated columns.
    std::string provenance;

    friend bool operator==(const Column&, const Column&) = default;
};

struct Schema {
    std::string relation;
    std::vector<Column> columns;

    std::size_t arity() const { return columns.size(); }
    std::optional<std::size_t> find(const std::string& column) const;

    /// `answer(student.name:string)` style header.
    std::string display(const std::string& as_relation) const;
    std::string display() const { return display(relation); }

    friend bool operator==(const Schema&, const Schema&) = default;
};

}  // namespace hypoteq
