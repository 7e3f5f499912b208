#pragma once

#include <string>
#include <vector>

#include "hypoteq/datalog/ast.hpp"

namespace hypoteq::datalog {

struct Violation {
    enum class Kind { SharedVariable, ArityMismatch };
    Kind kind;
    std::string message;
};

/// Reports implications whose antecedent rules share variables with the
/// enclosing rule, with the consequent, or with each other, and predicates
/// used with inconsistent arities. An empty result means well-formed.
std::vector<Violation> check_wellformed(const Program& p);

}  // namespace hypoteq::datalog
