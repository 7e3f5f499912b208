#pragma once

#include <set>
#include <string>
#include <vector>

#include "hypoteq/datalog/ast.hpp"
#include "hypoteq/schema.hpp"
#include "hypoteq/sql/ast.hpp"
#include "hypoteq/sql/resolver.hpp"

namespace hypoteq::translator {

using datalog::Goal;
using datalog::Program;
using datalog::Rule;

struct Translation {
    Program program;
    std::string answer;
    std::size_t arity = 0;
    Schema schema;
    // Auxiliary predicates introduced by the translation (goal1, goal2, ...).
    // Views and assumption targets are not listed even when renamed.
    std::set<std::string> auxiliary;
};

struct GoalWithRules {
    std::vector<Goal> goals;
    std::vector<Rule> rules;
};

/// Case-directed SQL to Hypothetical Datalog translation. One instance is one
/// translation unit: fresh names (goalN, variables, rule ids) are scoped to it.
class Translator {
public:
    /// `reserved` lists predicate names the output must not redefine, such
    /// as Datalog-defined relations of the database. Catalog tables of the
    /// resolved query and `answer` are always reserved.
    explicit Translator(const sql::ResolvedQuery& q, std::set<std::string> reserved = {});

    /// Rules defining `name` with the meaning of the root query.
    Translation sql_to_dl(const std::string& name);

    /// Rules defining `name` as the given (sub)query of the resolved query.
    std::vector<Rule> sql_to_dl(const std::string& name, const sql::RQuery& q);

    /// A relation of a FROM list as a goal over `vars`.
    GoalWithRules sqlrel_to_dl(const sql::RRelRef& rel, const std::vector<datalog::Term>& vars);

    /// A WHERE condition over the columns of `from`, given as terms.
    /// Equalities are returned as comparison goals here; sql_to_dl compiles
    /// them into shared variables and propagated constants instead.
    GoalWithRules sqlcond_to_dl(const sql::RCondition& c,
                                const std::vector<std::vector<datalog::Term>>& columns,
                                const std::vector<Goal>& base);

    /// Predicate used for a binding (table name, view or assumption target).
    std::string predicate(sql::BindingId b);

private:
    struct Impl;
    friend struct Impl;

    std::string fresh_goal();
    datalog::Term fresh_var();
    datalog::RuleId next_id();

    const sql::ResolvedQuery& q_;
    std::set<std::string> used_;
    std::set<std::string> auxiliary_;
    std::map<sql::BindingId, std::string> names_;
    std::size_t goal_counter_ = 0;
    std::size_t var_counter_ = 0;
    std::uint64_t rule_counter_ = 0;
    bool in_assumption_ = false;
};

/// Inlines auxiliary predicates defined by a single non-recursive rule,
/// drops the rules left unused, renames variables A, B, ... by first
/// occurrence (singletons underscored) and lists `answer` rules first.
Translation fold_unfold(Translation t);

/// Variable renaming and rule ordering only.
Translation normalize(Translation t);

/// Throws UnsafeRule for the first rule that is not range restricted.
void safety_check(const Translation& t);

struct CompileOptions {
    std::string answer = "answer";
    bool simplify = true;
    std::set<std::string> reserved;
};

/// resolve, sql_to_dl, fold_unfold (optional) and safety_check.
Translation compile(const sql::Query& q, const sql::Catalog& catalog,
                    const CompileOptions& options = {});

}  // namespace hypoteq::translator
