#include "hypoteq/engine/stratify.hpp"

#include <algorithm>
#include <deque>
#include <functional>

#include "hypoteq/error.hpp"

namespace hypoteq::engine {

using datalog::Goal;
using datalog::Rule;

namespace {

void add_goal(DependencyGraph& g, const std::string& head, const Goal& goal, bool negative) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, datalog::Atom>) {
                g.nodes.insert(n.predicate);
                auto& slot = g.edges[head][n.predicate];
                slot = slot || negative;
            } else if constexpr (std::is_same_v<T, datalog::Negation>) {
                add_goal(g, head, *n.inner, true);
            } else if constexpr (std::is_same_v<T, datalog::Implication>) {
                // The consequent reaches antecedent heads through its own
                // body edges when it uses them.
                for (const auto& r : n.antecedent) g.add_rule(r);
                add_goal(g, head, *n.consequent, negative);
            }
        },
        goal.node);
}

}  // namespace

void DependencyGraph::add_rule(const Rule& r) {
    nodes.insert(r.head.predicate);
    edges[r.head.predicate];
    for (const auto& goal : r.body) add_goal(*this, r.head.predicate, goal, r.restricting());
}

bool DependencyGraph::depends_negatively(const std::string& from, const std::string& to) const {
    auto it = edges.find(from);
    if (it == edges.end()) return false;
    auto e = it->second.find(to);
    return e != it->second.end() && e->second;
}

namespace {

std::string describe_cycle(const DependencyGraph& g, const std::set<std::string>& scc,
                           const std::string& from, const std::string& to) {
    // Path to -> ... -> from inside the component, closed by the negative edge.
    std::map<std::string, std::string> prev;
    std::deque<std::string> queue{to};
    prev[to] = to;
    while (!queue.empty()) {
        std::string cur = queue.front();
        queue.pop_front();
        if (cur == from) break;
        auto it = g.edges.find(cur);
        if (it == g.edges.end()) continue;
        for (const auto& [next, neg] : it->second) {
            if (!scc.count(next) || prev.count(next)) continue;
            prev[next] = cur;
            queue.push_back(next);
        }
    }
    std::vector<std::string> path{from};
    for (std::string cur = from; cur != to;) {
        cur = prev.at(cur);
        path.push_back(cur);
    }
    std::reverse(path.begin(), path.end());
    std::string out = from;
    for (std::size_t i = 0; i < path.size(); ++i) out += (i == 0 ? " -not-> " : " -> ") + path[i];
    return out;
}

}  // namespace

Stratification stratify(const DependencyGraph& g) {
    // Tarjan; components come out dependencies first.
    std::map<std::string, int> index, low;
    std::set<std::string> on_stack;
    std::vector<std::string> stack;
    int counter = 0;
    Stratification s;

    std::function<void(const std::string&)> connect = [&](const std::string& v) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack.insert(v);
        auto it = g.edges.find(v);
        if (it != g.edges.end()) {
            for (const auto& [w, neg] : it->second) {
                if (!index.count(w)) {
                    connect(w);
                    low[v] = std::min(low[v], low[w]);
                } else if (on_stack.count(w)) {
                    low[v] = std::min(low[v], index[w]);
                }
            }
        }
        if (low[v] == index[v]) {
            std::vector<std::string> comp;
            std::string w;
            do {
                w = stack.back();
                stack.pop_back();
                on_stack.erase(w);
                comp.push_back(w);
            } while (w != v);
            std::sort(comp.begin(), comp.end());
            std::size_t id = s.components.size();
            for (const auto& p : comp) s.component_of[p] = id;
            s.components.push_back(std::move(comp));
        }
    };
    for (const auto& v : g.nodes) {
        if (!index.count(v)) connect(v);
    }

    for (std::size_t id = 0; id < s.components.size(); ++id) {
        const auto& comp = s.components[id];
        std::set<std::string> members(comp.begin(), comp.end());
        int level = 1;
        bool recursive = comp.size() > 1;
        for (const auto& p : comp) {
            auto it = g.edges.find(p);
            if (it == g.edges.end()) continue;
            for (const auto& [q, neg] : it->second) {
                if (members.count(q)) {
                    if (neg) throw not_stratifiable(describe_cycle(g, members, p, q));
                    recursive = true;
                    continue;
                }
                level = std::max(level, s.level.at(q) + (neg ? 1 : 0));
            }
        }
        if (recursive) s.recursive.insert(id);
        for (const auto& p : comp) s.level[p] = level;
    }
    for (const auto& [p, level] : s.level) {
        if (s.strata.size() < static_cast<std::size_t>(level)) s.strata.resize(level);
        s.strata[level - 1].push_back(p);
    }
    return s;
}

Stratification stratify(const db::DatabaseInstance& db, const datalog::Program& extra) {
    DependencyGraph g;
    for (const auto& [name, t] : db.tables()) g.nodes.insert(name);
    for (const auto& r : db.rules()) g.add_rule(r);
    for (const auto& r : extra.rules) g.add_rule(r);
    return stratify(g);
}

}  // namespace hypoteq::engine
