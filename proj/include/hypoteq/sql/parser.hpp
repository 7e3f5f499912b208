#pragma once

#include <string>
#include <string_view>

#include "hypoteq/sql/ast.hpp"

namespace hypoteq::sql {

/// One statement, optionally `;`-terminated. Keywords are case-insensitive
/// and identifiers are lowercased. Throws SyntaxError (1-based line/column)
/// or UnsupportedFeature for SQL outside the supported subset.
Statement parse_sql(std::string_view text);

/// Like parse_sql but only accepts a query.
Query parse_query(std::string_view text);

/// True when the text starts with a SQL statement keyword.
bool looks_like_sql(std::string_view text);

std::string to_sql(const Query& q);
std::string to_sql(const Condition& c);
std::string to_sql(const Statement& s);

}  // namespace hypoteq::sql
