#pragma once

#include <map>
#include <string>

#include "hypoteq/datalog/ast.hpp"

namespace hypoteq::datalog {

using Substitution = std::map<std::string, Term>;

// Simultaneous replacement: images are not themselves rewritten.
Term apply_substitution(const Term& t, const Substitution& s);
Atom apply_substitution(const Atom& a, const Substitution& s);
Goal apply_substitution(const Goal& g, const Substitution& s);
Rule apply_substitution(const Rule& r, const Substitution& s);

/// compose(a, b) applied once equals applying `a` then `b`.
Substitution compose(const Substitution& a, const Substitution& b);

}  // namespace hypoteq::datalog
