#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "hypoteq/datalog/ast.hpp"
#include "hypoteq/db/instance.hpp"
#include "hypoteq/engine/stratify.hpp"

namespace hypoteq::engine {

using datalog::Atom;
using datalog::Goal;
using datalog::Program;
using datalog::Rule;
using datalog::RuleId;
using datalog::Tuple;
using datalog::Value;

using FactId = std::uint64_t;
using ContextId = std::size_t;

/// Data source of one fact occurrence: either a stored table row (`row` is
/// its label) or a derivation by `rule` from the body facts listed.
struct Label {
    RuleId rule;
    std::uint64_t row = 0;
    std::vector<FactId> body;

    friend bool operator==(const Label&, const Label&) = default;
};

struct LabeledFact {
    Atom fact;
    Label label;
    FactId id = 0;
    ContextId context = 0;
};

bool eval_comparison(datalog::CompareOp op, const Value& lhs, const Value& rhs);

/// Bottom-up evaluator for one program over one database instance. The
/// instance is only read. Contexts form a chain rooted at the program; each
/// embedded implication evaluates its consequent in a child context holding
/// the assumed rules, built once per (parent, implication).
class Engine {
public:
    /// Checks arities, safety and stratification of db rules plus `extra`.
    Engine(const db::DatabaseInstance& db, Program extra = {});
    // The instance is held by reference.
    Engine(db::DatabaseInstance&&, Program = {}) = delete;
    ~Engine();
    Engine(const Engine&) = delete;
    Engine& operator=(const Engine&) = delete;

    ContextId root() const { return 0; }

    /// Every occurrence of every instance of `goal` in `ctx`.
    std::vector<LabeledFact> solve(const Atom& goal, ContextId ctx = 0);

    /// Child context of `ctx` extended with `rules`.
    ContextId assume(ContextId ctx, std::vector<Rule> rules);

    /// solve(conseq) in the child context ctx + ante. `conseq` may be any
    /// goal; non-atomic consequents are answered through an auxiliary head
    /// over the consequent's variables.
    std::vector<LabeledFact> eval_implication(std::vector<Rule> ante, const Goal& conseq,
                                              ContextId ctx = 0);

    /// Facts derived by regular rules (and stored rows), before removal.
    std::vector<LabeledFact> regular_meaning(const std::string& pred, ContextId ctx = 0);
    /// Regular meaning minus every fact derived by a restricting rule.
    std::vector<LabeledFact> restricted_meaning(const std::string& pred, ContextId ctx = 0);

    const Stratification& stratification() const;
    std::size_t context_count() const;

private:
    struct State;
    std::unique_ptr<State> s_;
};

}  // namespace hypoteq::engine
