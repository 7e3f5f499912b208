#pragma once

#include <string>

#include "hypoteq/datalog/ast.hpp"

namespace hypoteq::datalog {

std::string to_string(const Term& t);
std::string to_string(const Atom& a);
std::string to_string(const Goal& g);

enum class Layout {
    // Top-level rules whose body holds an embedded implication are split
    // over several lines, as in interactive session transcripts.
    Session,
    SingleLine,
};

/// Clause text including the terminating `.`.
std::string to_string(const Rule& r, Layout layout = Layout::Session);

/// One clause per line (multi-line clauses keep their continuation lines).
std::string to_string(const Program& p, Layout layout = Layout::Session);

}  // namespace hypoteq::datalog
