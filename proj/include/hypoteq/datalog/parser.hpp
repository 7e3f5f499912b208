#pragma once

#include <string_view>
#include <vector>

#include "hypoteq/datalog/ast.hpp"

namespace hypoteq::datalog {

/// Parses Prolog-style clauses terminated by `.`. Rule ids are assigned in
/// textual order (nested antecedent rules included) starting at `first_id`.
/// Throws SyntaxError or ArityMismatch.
Program parse_datalog(std::string_view text, RuleId first_id = {RuleOrigin::User, 1});

/// A conjunctive query as typed at a prompt: goals separated by `,`,
/// optional trailing `.`.
std::vector<Goal> parse_goals(std::string_view text);

/// Arity consistency over heads and body atoms, nested rules included.
/// Throws ArityMismatch on the first conflict.
void check_arities(const Program& p);

}  // namespace hypoteq::datalog
