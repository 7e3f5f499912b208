#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "hypoteq/box.hpp"
#include "hypoteq/error.hpp"
#include "hypoteq/schema.hpp"
#include "hypoteq/sql/ast.hpp"

namespace hypoteq::sql {

using Catalog = std::map<std::string, Schema>;

/// Index into ResolvedQuery::bindings.
using BindingId = std::size_t;

/// A relation name as it is visible at some point of a query: a catalog
/// table, a WITH view, or a relation first introduced by an ASSUME target.
/// An ASSUME on an already visible relation overlays that relation's binding
/// instead of creating a new one.
struct Binding {
    enum class Kind { Table, View, AssumedRelation };
    std::string name;
    Kind kind;
    Schema schema;
};

/// Column position within the FROM list of the enclosing select.
struct BoundColumn {
    std::size_t relation;
    std::size_t column;
    friend bool operator==(const BoundColumn&, const BoundColumn&) = default;
};

using BoundOperand = std::variant<BoundColumn, Value>;

struct RQuery;
struct RCondition;

struct RCompare {
    BoundOperand lhs;
    CompareOp op;
    BoundOperand rhs;
};

struct RAnd {
    Box<RCondition> lhs, rhs;
};

struct ROr {
    Box<RCondition> lhs, rhs;
};

struct RNot {
    Box<RCondition> inner;
};

struct RIn {
    std::vector<BoundOperand> lhs;
    Box<RQuery> query;
    bool negated;
};

struct RCondition {
    std::variant<RCompare, RAnd, ROr, RNot, RIn> node;
};

struct RRelRef {
    std::string alias;
    std::variant<BindingId, Box<RQuery>> source;
    Schema schema;
};

struct RSelect {
    std::vector<RRelRef> from;
    std::vector<BoundOperand> projection;
    std::optional<RCondition> where;
};

struct RUnionAll {
    Box<RQuery> left, right;
};

struct RViewDef {
    BindingId binding;
    Box<RQuery> query;
};

struct RWith {
    std::vector<RViewDef> defs;
    Box<RQuery> body;
};

struct RAssumption {
    Box<RQuery> source;
    Polarity polarity;
    BindingId target;
};

struct RAssume {
    std::vector<RAssumption> assumptions;
    Box<RQuery> body;
};

struct RQuery {
    std::variant<RSelect, RUnionAll, RWith, RAssume> node;
    Schema schema;
};

struct ResolvedQuery {
    RQuery root;
    std::vector<Binding> bindings;
};

class UnknownRelationError : public Error {
public:
    explicit UnknownRelationError(const std::string& name)
        : Error(unknown_relation(name)), name_(name) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

/// Binds every relation and column reference, expands `*`, checks types and
/// arities, and computes output schemas. WITH views are visible only inside
/// their query; ASSUME targets are visible in the assumption sources and the
/// body. Assumptions whose sources depend on their own target (directly or
/// through views and other assumptions) are rejected as UnsupportedFeature.
ResolvedQuery resolve(const Query& q, const Catalog& catalog);

/// Output schema of a resolved query, with provenance-qualified columns.
Schema infer_schema(const ResolvedQuery& q);

/// Bindings referenced anywhere inside `q`.
std::set<BindingId> referenced_bindings(const RQuery& q);

}  // namespace hypoteq::sql
