#pragma once

#include <string>

#include "hypoteq/db/instance.hpp"

namespace hypoteq::service {

/// Text format: header `hypoteq-db v1`, a counters comment, CREATE TABLE
/// statements, facts annotated `%@label`, then rules.
std::string dump_database(const db::DatabaseInstance& db);
/// Throws Error("VersionError") for another header, SyntaxError and the
/// instance errors for bad content.
db::DatabaseInstance read_database(const std::string& text);

/// File wrappers; throw Error("IOError").
void save_db(const std::string& path, const db::DatabaseInstance& db);
db::DatabaseInstance load_db(const std::string& path);

}  // namespace hypoteq::service
