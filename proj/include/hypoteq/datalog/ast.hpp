#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "hypoteq/datalog/value.hpp"

namespace hypoteq::datalog {

struct Variable {
    std::string name;

    bool underscored() const { return !name.empty() && name.front() == '_'; }
    // A bare `_` is anonymous: every occurrence is a distinct variable.
    bool anonymous() const { return name == "_"; }

    friend bool operator==(const Variable&, const Variable&) = default;
};

using Term = std::variant<Variable, Value>;

inline bool is_variable(const Term& t) { return std::holds_alternative<Variable>(t); }
inline const Variable& as_variable(const Term& t) { return std::get<Variable>(t); }
inline const Value& as_constant(const Term& t) { return std::get<Value>(t); }
inline Term var(std::string name) { return Variable{std::move(name)}; }

struct Atom {
    std::string predicate;
    std::vector<Term> args;

    std::size_t arity() const { return args.size(); }
    friend bool operator==(const Atom&, const Atom&) = default;
};

enum class CompareOp { Eq, Ne, Lt, Le, Gt, Ge };

CompareOp negate(CompareOp op);
CompareOp mirror(CompareOp op);
const char* datalog_spelling(CompareOp op);

struct Comparison {
    CompareOp op;
    Term lhs;
    Term rhs;

    friend bool operator==(const Comparison&, const Comparison&) = default;
};

struct Goal;
struct Rule;

struct Negation {
    std::shared_ptr<const Goal> inner;
};

struct Implication {
    std::vector<Rule> antecedent;
    std::shared_ptr<const Goal> consequent;
};

/// G := A | not G | R1 /\ ... /\ Rn => G, plus built-in comparisons.
struct Goal {
    using Node = std::variant<Atom, Negation, Implication, Comparison>;
    Node node;

    static Goal atom(Atom a) { return Goal{std::move(a)}; }
    static Goal negation(Goal inner);
    static Goal implication(std::vector<Rule> antecedent, Goal consequent);
    static Goal compare(CompareOp op, Term lhs, Term rhs) {
        return Goal{Comparison{op, std::move(lhs), std::move(rhs)}};
    }

    bool is_atom() const { return std::holds_alternative<Atom>(node); }
    bool is_negation() const { return std::holds_alternative<Negation>(node); }
    bool is_implication() const { return std::holds_alternative<Implication>(node); }
    bool is_comparison() const { return std::holds_alternative<Comparison>(node); }

    const Atom& as_atom() const { return std::get<Atom>(node); }
    const Negation& as_negation() const { return std::get<Negation>(node); }
    const Implication& as_implication() const { return std::get<Implication>(node); }
    const Comparison& as_comparison() const { return std::get<Comparison>(node); }
};

enum class HeadSign { Regular, Restricting };

enum class RuleOrigin { User, Translator, Assumption };

/// Stable data-source identity of a rule. Origin separates user rules from
/// translator output and from rules injected by assumptions.
struct RuleId {
    RuleOrigin origin = RuleOrigin::User;
    std::uint64_t seq = 0;

    friend auto operator<=>(const RuleId&, const RuleId&) = default;
};

struct Rule {
    HeadSign sign = HeadSign::Regular;
    Atom head;
    std::vector<Goal> body;
    RuleId id;

    bool is_fact() const { return body.empty(); }
    bool restricting() const { return sign == HeadSign::Restricting; }
};

struct Program {
    std::vector<Rule> rules;
};

// Structural equality. Rule ids are provenance metadata and do not take part.
bool operator==(const Goal& a, const Goal& b);
bool operator==(const Negation& a, const Negation& b);
bool operator==(const Implication& a, const Implication& b);
bool operator==(const Rule& a, const Rule& b);
bool operator==(const Program& a, const Program& b);

/// Variables in order of first occurrence (anonymous `_` excluded),
/// descending into antecedent rules.
std::vector<std::string> variables_of(const Rule& r);
std::vector<std::string> variables_of(const Goal& g);
std::vector<std::string> variables_of(const Atom& a);

/// Occurrence count per variable over the whole rule, nested rules included.
std::map<std::string, int> variable_occurrences(const Rule& r);

/// Calls `f` on every atom (heads, body atoms, nested antecedent rules).
void for_each_atom(const Rule& r, const std::function<void(const Atom&)>& f);
void for_each_atom(const Goal& g, const std::function<void(const Atom&)>& f);

/// Every rule reachable inside implication antecedents of `r`, depth first.
void for_each_nested_rule(const Rule& r, const std::function<void(const Rule&)>& f);

bool is_ground(const Atom& a);

}  // namespace hypoteq::datalog
