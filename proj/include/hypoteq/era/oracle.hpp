#pragma once

#include <string>
#include <vector>

#include "hypoteq/db/instance.hpp"
#include "hypoteq/schema.hpp"
#include "hypoteq/sql/resolver.hpp"

namespace hypoteq::era {

using datalog::Tuple;

struct EraRelation {
    Schema schema;
    std::vector<Tuple> rows;  // multiset, order irrelevant
};

/// Reference multiset evaluation of a resolved query: nested loops over FROM,
/// filter, project. WITH views and ASSUME overlays are looked up in the
/// instance the reference is evaluated in, so an outer definition sees inner
/// assumptions when it is used inside them.
/// `max_rows` (0 = unlimited) bounds the FROM combinations examined plus the
/// rows of all intermediate results; exceeding it throws
/// Error("ResourceLimit").
EraRelation eval_era(const sql::ResolvedQuery& q, const db::DatabaseInstance& db,
                     std::size_t max_rows = 0);

struct Difference {
    Tuple tuple;
    std::size_t left = 0;   // multiplicity in the ERA relation
    std::size_t right = 0;  // multiplicity in the other multiset
};

struct Comparison {
    bool equal = true;
    std::vector<Difference> differences;

    std::string report() const;
};

/// Multiset equality ignoring order. Throws ArityMismatch when a row of `b`
/// does not match the arity of `a`.
Comparison compare_answers(const EraRelation& a, const std::vector<Tuple>& b);

}  // namespace hypoteq::era
