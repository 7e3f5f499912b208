#include "hypoteq/era/oracle.hpp"

#include <deque>
#include <map>

#include "hypoteq/error.hpp"

namespace hypoteq::era {

using namespace sql;
using datalog::Value;

namespace {

struct Overlay {
    const RQuery* view = nullptr;
    std::vector<const RQuery*> add;
    std::vector<const RQuery*> remove;
};

struct Instance {
    const Instance* parent = nullptr;
    std::map<BindingId, Overlay> local;
};

// SQL comparison: numbers compare numerically, strings by code point.
int compare(const Value& a, const Value& b) {
    if (a.is_string() != b.is_string())
        throw type_error("cannot compare " + datalog::to_string(a) + " with " + datalog::to_string(b));
    if (a.is_string()) {
        int c = a.as_string().compare(b.as_string());
        return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    if (a.is_int() && b.is_int()) return a.as_int() < b.as_int() ? -1 : (a.as_int() > b.as_int() ? 1 : 0);
    double x = a.as_number(), y = b.as_number();
    return x < y ? -1 : (x > y ? 1 : 0);
}

bool holds(CompareOp op, int c) {
    switch (op) {
        case CompareOp::Eq: return c == 0;
        case CompareOp::Ne: return c != 0;
        case CompareOp::Lt: return c < 0;
        case CompareOp::Le: return c <= 0;
        case CompareOp::Gt: return c > 0;
        case CompareOp::Ge: return c >= 0;
    }
    return false;
}

class Evaluator {
public:
    Evaluator(const ResolvedQuery& q, const db::DatabaseInstance& db, std::size_t max_rows)
        : q_(q), db_(db), max_rows_(max_rows) {
        instances_.emplace_back();
    }

    std::vector<Tuple> run() { return eval(q_.root, &instances_.front()); }

private:
    using Rows = std::vector<Tuple>;

    const Rows& eval(const RQuery& q, const Instance* inst) {
        auto key = std::make_pair(inst, static_cast<const void*>(&q));
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        Rows rows = std::visit([&](const auto& n) { return node(n, inst); }, q.node);
        charge(rows.size());
        return cache_.emplace(key, std::move(rows)).first->second;
    }

    const Rows& lookup(BindingId b, const Instance* inst) {
        auto key = std::make_pair(inst, reinterpret_cast<const void*>(b + 1));
        auto it = relation_cache_.find(key);
        if (it != relation_cache_.end()) return it->second;

        const Binding& binding = q_.bindings.at(b);
        Rows rows;
        if (binding.kind == Binding::Kind::Table) {
            if (const db::Table* t = db_.table(binding.name))
                for (const auto& r : t->rows) rows.push_back(r.values);
        }
        std::vector<const RQuery*> remove;
        for (const Instance* cur = inst; cur; cur = cur->parent) {
            auto o = cur->local.find(b);
            if (o == cur->local.end()) continue;
            if (o->second.view) {
                const Rows& v = eval(*o->second.view, inst);
                rows.insert(rows.end(), v.begin(), v.end());
            }
            for (const RQuery* a : o->second.add) {
                const Rows& v = eval(*a, inst);
                rows.insert(rows.end(), v.begin(), v.end());
            }
            remove.insert(remove.end(), o->second.remove.begin(), o->second.remove.end());
        }
        if (!remove.empty()) {
            std::vector<Rows> gone;
            for (const RQuery* r : remove) gone.push_back(eval(*r, inst));
            Rows kept;
            for (auto& row : rows) {
                bool drop = false;
                for (const auto& g : gone)
                    for (const auto& x : g) drop = drop || x == row;
                if (!drop) kept.push_back(std::move(row));
            }
            rows = std::move(kept);
        }
        return relation_cache_.emplace(key, std::move(rows)).first->second;
    }

    void charge(std::size_t n) {
        produced_ += n;
        if (max_rows_ && produced_ > max_rows_)
            throw Error("ResourceLimit", "more than " + std::to_string(max_rows_) + " rows");
    }

    static Value operand(const BoundOperand& o, const std::vector<const Tuple*>& env) {
        if (const auto* v = std::get_if<Value>(&o)) return *v;
        const auto& c = std::get<BoundColumn>(o);
        return (*env[c.relation])[c.column];
    }

    bool test(const RCondition& c, const std::vector<const Tuple*>& env, const Instance* inst) {
        return std::visit(
            [&](const auto& n) -> bool {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, RCompare>) {
                    return holds(n.op, compare(operand(n.lhs, env), operand(n.rhs, env)));
                } else if constexpr (std::is_same_v<T, RAnd>) {
                    return test(*n.lhs, env, inst) && test(*n.rhs, env, inst);
                } else if constexpr (std::is_same_v<T, ROr>) {
                    return test(*n.lhs, env, inst) || test(*n.rhs, env, inst);
                } else if constexpr (std::is_same_v<T, RNot>) {
                    return !test(*n.inner, env, inst);
                } else {
                    Tuple probe;
                    for (const auto& o : n.lhs) probe.push_back(operand(o, env));
                    bool found = false;
                    for (const auto& row : eval(*n.query, inst)) found = found || row == probe;
                    return found != n.negated;
                }
            },
            c.node);
    }

    Rows node(const RSelect& s, const Instance* inst) {
        std::vector<const Rows*> inputs;
        std::vector<Rows> held;
        held.reserve(s.from.size());
        for (const auto& rel : s.from) {
            if (const auto* b = std::get_if<BindingId>(&rel.source)) {
                inputs.push_back(&lookup(*b, inst));
            } else {
                held.push_back(eval(*std::get<Box<RQuery>>(rel.source), inst));
                inputs.push_back(&held.back());
            }
        }
        Rows out;
        std::vector<const Tuple*> env(inputs.size());
        std::function<void(std::size_t)> loop = [&](std::size_t i) {
            if (i == inputs.size()) {
                charge(1);
                if (s.where && !test(*s.where, env, inst)) return;
                Tuple row;
                for (const auto& p : s.projection) row.push_back(operand(p, env));
                out.push_back(std::move(row));
                return;
            }
            for (const auto& row : *inputs[i]) {
                env[i] = &row;
                loop(i + 1);
            }
        };
        loop(0);
        return out;
    }

    Rows node(const RUnionAll& u, const Instance* inst) {
        Rows out = eval(*u.left, inst);
        const Rows& right = eval(*u.right, inst);
        out.insert(out.end(), right.begin(), right.end());
        return out;
    }

    Rows node(const RWith& w, const Instance* inst) {
        Instance& child = instances_.emplace_back();
        child.parent = inst;
        for (const auto& d : w.defs) child.local[d.binding].view = &*d.query;
        return eval(*w.body, &child);
    }

    Rows node(const RAssume& a, const Instance* inst) {
        Instance& child = instances_.emplace_back();
        child.parent = inst;
        for (const auto& as : a.assumptions) {
            auto& o = child.local[as.target];
            (as.polarity == Polarity::In ? o.add : o.remove).push_back(&*as.source);
        }
        return eval(*a.body, &child);
    }

    const ResolvedQuery& q_;
    const db::DatabaseInstance& db_;
    std::size_t max_rows_;
    std::size_t produced_ = 0;
    std::deque<Instance> instances_;
    std::map<std::pair<const Instance*, const void*>, Rows> cache_;
    std::map<std::pair<const Instance*, const void*>, Rows> relation_cache_;
};

}  // namespace

EraRelation eval_era(const ResolvedQuery& q, const db::DatabaseInstance& db, std::size_t max_rows) {
    Evaluator e(q, db, max_rows);
    return EraRelation{q.root.schema, e.run()};
}

std::string Comparison::report() const {
    if (equal) return "equal";
    std::string out;
    for (const auto& d : differences) {
        out += datalog::tuple_to_string(d.tuple) + ": " + std::to_string(d.left) + " vs " +
               std::to_string(d.right) + "\n";
    }
    return out;
}

Comparison compare_answers(const EraRelation& a, const std::vector<Tuple>& b) {
    std::map<Tuple, std::pair<std::size_t, std::size_t>> counts;
    for (const auto& t : a.rows) ++counts[t].first;
    for (const auto& t : b) {
        if (t.size() != a.schema.arity()) throw ArityMismatch("answer", t.size(), a.schema.arity());
        ++counts[t].second;
    }
    Comparison out;
    for (const auto& [t, c] : counts) {
        if (c.first != c.second) {
            out.equal = false;
            out.differences.push_back(Difference{t, c.first, c.second});
        }
    }
    return out;
}

}  // namespace hypoteq::era
