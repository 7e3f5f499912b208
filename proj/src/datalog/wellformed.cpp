#include "hypoteq/datalog/wellformed.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "hypoteq/datalog/printer.hpp"

namespace hypoteq::datalog {

namespace {

using VarSet = std::set<std::string>;

VarSet to_set(const std::vector<std::string>& v) { return {v.begin(), v.end()}; }

std::string join(const VarSet& s) {
    std::string out;
    for (const auto& v : s) out += (out.empty() ? "" : ",") + v;
    return out;
}

VarSet intersect(const VarSet& a, const VarSet& b) {
    VarSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
    return out;
}

class Checker {
public:
    std::vector<Violation> violations;

    void rule(const Rule& r) {
        for (std::size_t k = 0; k < r.body.size(); ++k) {
            VarSet outer = to_set(variables_of(r.head));
            for (std::size_t j = 0; j < r.body.size(); ++j) {
                if (j == k) continue;
                for (const auto& v : variables_of(r.body[j])) outer.insert(v);
            }
            goal(r.body[k], outer, r);
        }
    }

private:
    void goal(const Goal& g, const VarSet& outer, const Rule& enclosing) {
        if (g.is_negation()) {
            goal(*g.as_negation().inner, outer, enclosing);
            return;
        }
        if (!g.is_implication()) return;
        const auto& imp = g.as_implication();
        VarSet consequent = to_set(variables_of(*imp.consequent));
        VarSet around = outer;
        around.insert(consequent.begin(), consequent.end());
        std::vector<VarSet> ante_vars;
        for (const auto& r : imp.antecedent) ante_vars.push_back(to_set(variables_of(r)));
        for (std::size_t i = 0; i < imp.antecedent.size(); ++i) {
            VarSet shared = intersect(ante_vars[i], around);
            if (!shared.empty()) {
                violations.push_back(
                    {Violation::Kind::SharedVariable,
                     "assumed rule '" + to_string(imp.antecedent[i], Layout::SingleLine) +
                         "' shares variables {" + join(shared) + "} with '" +
                         to_string(enclosing, Layout::SingleLine) + "'"});
            }
            for (std::size_t j = i + 1; j < imp.antecedent.size(); ++j) {
                VarSet pair = intersect(ante_vars[i], ante_vars[j]);
                if (!pair.empty()) {
                    violations.push_back(
                        {Violation::Kind::SharedVariable,
                         "assumed rules '" + to_string(imp.antecedent[i], Layout::SingleLine) +
                             "' and '" + to_string(imp.antecedent[j], Layout::SingleLine) +
                             "' share variables {" + join(pair) + "}"});
                }
            }
            rule(imp.antecedent[i]);
        }
        VarSet inner = outer;
        for (const auto& s : ante_vars) inner.insert(s.begin(), s.end());
        goal(*imp.consequent, inner, enclosing);
    }
};

}  // namespace

std::vector<Violation> check_wellformed(const Program& p) {
    Checker checker;
    std::map<std::string, std::size_t> arity;
    std::set<std::string> reported;
    for (const auto& r : p.rules) {
        for_each_atom(r, [&](const Atom& a) {
            auto [it, inserted] = arity.emplace(a.predicate, a.arity());
            if (!inserted && it->second != a.arity() && reported.insert(a.predicate).second) {
                checker.violations.push_back(
                    {Violation::Kind::ArityMismatch,
                     "predicate '" + a.predicate + "' used with arities " +
                         std::to_string(it->second) + " and " + std::to_string(a.arity())});
            }
        });
        checker.rule(r);
    }
    return checker.violations;
}

}  // namespace hypoteq::datalog
