#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "hypoteq/db/instance.hpp"
#include "hypoteq/schema.hpp"

namespace hypoteq::testing {

using datalog::Tuple;

/// student/take from the sessions; `student_type` is `string` or
/// `varchar(30)`.
db::DatabaseInstance session_instance(const std::string& student_type = "varchar(30)");

/// Multiset of answer tuples for a SQL query through translator + engine.
std::vector<Tuple> engine_answer(const db::DatabaseInstance& db, const std::string& sql,
                                 bool simplify = true);
/// Same through the ERA oracle.
std::vector<Tuple> oracle_answer(const db::DatabaseInstance& db, const std::string& sql,
                                 std::size_t max_rows = 0);

std::map<Tuple, std::size_t> counts(const std::vector<Tuple>& rows);

struct Limits {
    std::size_t relations = 4;
    std::size_t rows = 8;
    int depth = 3;
};

struct GeneratedCase {
    db::DatabaseInstance db;
    std::string sql;
};

/// Random instances over tables r0.. with int and string columns, and
/// random queries over them using SELECT/FROM/WHERE with comparisons, AND,
/// OR, NOT, [NOT] IN subqueries, FROM subqueries, UNION ALL, WITH and
/// ASSUME [NOT] IN. Queries are uncorrelated and never make an assumption
/// depend on its own target.
class Generator {
public:
    explicit Generator(std::uint64_t seed, Limits limits = {});

    GeneratedCase next();
    /// Next case whose oracle evaluation stays within `max_rows`; `skipped`
    /// counts the oversized cases drawn on the way.
    GeneratedCase next_bounded(std::size_t max_rows, std::size_t* skipped = nullptr);
    db::DatabaseInstance instance();
    std::string query();

private:
    using Kind = ColumnType::Kind;
    struct Rel {
        std::string name;
        std::vector<Kind> kinds;
    };
    struct Col {
        std::string expr;
        Kind kind;
    };
    struct Gen {
        std::string sql;
        std::set<std::string> used;
    };

    std::size_t pick(std::size_t n);
    bool chance(double p);
    std::string literal(Kind k);
    std::vector<Kind> random_sig();
    std::string column_list(std::size_t n);
    bool reaches(const std::string& from, const std::string& to) const;

    Gen query(const std::vector<Kind>& sig, const std::vector<Rel>& scope, int depth);
    Gen select(const std::vector<Kind>& sig, const std::vector<Rel>& scope, int depth);
    std::string condition(const std::vector<Col>& cols, const std::vector<Rel>& scope, int depth,
                          int level, std::set<std::string>& used);

    std::mt19937_64 rng_;
    Limits limits_;
    std::vector<Rel> tables_;
    std::size_t names_ = 0;
    std::map<std::string, std::set<std::string>> edges_;
};

}  // namespace hypoteq::testing
