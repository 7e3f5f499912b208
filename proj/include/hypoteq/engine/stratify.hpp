#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "hypoteq/datalog/ast.hpp"
#include "hypoteq/db/instance.hpp"

namespace hypoteq::engine {

/// Predicate dependency graph. Edges run from a rule head to the predicates
/// its body mentions; negated goals and restricting-rule bodies give negative
/// edges. Implications contribute an edge to their consequent, and antecedent
/// rules contribute their own edges.
struct DependencyGraph {
    std::set<std::string> nodes;
    // head -> (dependency -> negative?)
    std::map<std::string, std::map<std::string, bool>> edges;

    void add_rule(const datalog::Rule& r);
    bool depends_negatively(const std::string& from, const std::string& to) const;
};

struct Stratification {
    // strata[k] holds the predicates of level k + 1.
    std::vector<std::vector<std::string>> strata;
    std::map<std::string, int> level;
    // Strongly connected components in evaluation order (dependencies first).
    std::vector<std::vector<std::string>> components;
    std::map<std::string, std::size_t> component_of;
    // Components that need a fixpoint (more than one member or a self loop).
    std::set<std::size_t> recursive;
};

/// Throws NotStratifiable naming a cycle through negation.
Stratification stratify(const DependencyGraph& g);
Stratification stratify(const db::DatabaseInstance& db, const datalog::Program& extra);

}  // namespace hypoteq::engine
