#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hypoteq/box.hpp"
#include "hypoteq/datalog/ast.hpp"
#include "hypoteq/datalog/value.hpp"
#include "hypoteq/schema.hpp"

namespace hypoteq::sql {

using datalog::CompareOp;
using datalog::Value;

struct ColumnRef {
    std::optional<std::string> qualifier;
    std::string name;

    std::string display() const { return qualifier ? *qualifier + "." + name : name; }
    friend bool operator==(const ColumnRef&, const ColumnRef&) = default;
};

using Operand = std::variant<ColumnRef, Value>;

struct Star {
    std::optional<std::string> qualifier;
    friend bool operator==(const Star&, const Star&) = default;
};

struct SelectItem {
    std::variant<Star, Operand> item;
    std::optional<std::string> alias;
    friend bool operator==(const SelectItem&, const SelectItem&) = default;
};

struct Query;
struct Condition;

struct RelRef {
    // Relation name, or a parenthesized subquery.
    std::variant<std::string, Box<Query>> source;
    std::optional<std::string> alias;
    friend bool operator==(const RelRef&, const RelRef&) = default;
};

struct Compare {
    Operand lhs;
    CompareOp op;
    Operand rhs;
    friend bool operator==(const Compare&, const Compare&) = default;
};

struct And {
    Box<Condition> lhs, rhs;
    friend bool operator==(const And&, const And&) = default;
};

struct Or {
    Box<Condition> lhs, rhs;
    friend bool operator==(const Or&, const Or&) = default;
};

struct Not {
    Box<Condition> inner;
    friend bool operator==(const Not&, const Not&) = default;
};

struct InSubquery {
    std::vector<Operand> lhs;
    Box<Query> query;
    bool negated = false;
    friend bool operator==(const InSubquery&, const InSubquery&) = default;
};

struct Condition {
    std::variant<Compare, And, Or, Not, InSubquery> node;
    friend bool operator==(const Condition&, const Condition&) = default;
};

/// SELECT list FROM relations WHERE condition. An empty `from` is the
/// FROM-less single-row form (`select 'adam'`).
struct Select {
    std::vector<SelectItem> items;
    std::vector<RelRef> from;
    std::optional<Condition> where;
    friend bool operator==(const Select&, const Select&) = default;
};

struct UnionAll {
    Box<Query> left, right;
    friend bool operator==(const UnionAll&, const UnionAll&) = default;
};

struct ViewDef {
    std::string name;
    std::optional<std::vector<std::string>> columns;
    Box<Query> query;
    friend bool operator==(const ViewDef&, const ViewDef&) = default;
};

struct With {
    std::vector<ViewDef> defs;
    Box<Query> body;
    friend bool operator==(const With&, const With&) = default;
};

enum class Polarity { In, NotIn };

struct Assumption {
    Box<Query> source;
    Polarity polarity = Polarity::In;
    std::string target;
    std::optional<std::vector<std::string>> columns;
    friend bool operator==(const Assumption&, const Assumption&) = default;
};

struct Assume {
    std::vector<Assumption> assumptions;
    Box<Query> body;
    friend bool operator==(const Assume&, const Assume&) = default;
};

struct Query {
    std::variant<Select, UnionAll, With, Assume> node;
    friend bool operator==(const Query&, const Query&) = default;
};

struct CreateTable {
    std::string name;
    std::vector<std::pair<std::string, ColumnType>> columns;
    friend bool operator==(const CreateTable&, const CreateTable&) = default;
};

struct Insert {
    std::string table;
    std::vector<datalog::Tuple> rows;
    friend bool operator==(const Insert&, const Insert&) = default;
};

struct DropTable {
    std::string name;
    friend bool operator==(const DropTable&, const DropTable&) = default;
};

using Statement = std::variant<Query, CreateTable, Insert, DropTable>;

}  // namespace hypoteq::sql
