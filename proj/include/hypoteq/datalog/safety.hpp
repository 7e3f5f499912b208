#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hypoteq/datalog/ast.hpp"
#include "hypoteq/error.hpp"

namespace hypoteq::datalog {

struct UnsafeRule {
    Rule rule;
    std::vector<std::string> variables;
};

/// Range restriction: head variables, comparison variables and variables of
/// negated goals must be bound by a positive goal. A variable that occurs
/// only underscored inside one negated goal is existential there and safe.
/// Antecedent rules are checked recursively.
std::optional<UnsafeRule> find_unsafe(const Rule& r);
std::optional<UnsafeRule> find_unsafe(const Program& p);

/// Throws Error("UnsafeRule") describing the first unsafe rule.
void require_safe(const Program& p);

}  // namespace hypoteq::datalog
