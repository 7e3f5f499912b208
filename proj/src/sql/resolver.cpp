#include "hypoteq/sql/resolver.hpp"

#include <functional>

namespace hypoteq::sql {

namespace {

ColumnType literal_type(const Value& v) {
    if (v.is_int()) return ColumnType::integer();
    if (v.is_float()) return ColumnType::floating();
    return ColumnType::string();
}

bool comparable(const ColumnType& a, const ColumnType& b) {
    bool an = a.kind != ColumnType::Kind::String;
    bool bn = b.kind != ColumnType::Kind::String;
    return an == bn;
}

class Resolver {
public:
    explicit Resolver(const Catalog& catalog) {
        frames_.emplace_back();
        for (const auto& [name, schema] : catalog) {
            Schema s = schema;
            s.relation = name;
            for (auto& c : s.columns) c.provenance = name + "." + c.name;
            frames_.back()[name] = add_binding({name, Binding::Kind::Table, std::move(s)});
        }
    }

    ResolvedQuery run(const Query& q) {
        RQuery root = query(q);
        return ResolvedQuery{std::move(root), std::move(bindings_)};
    }

private:
    using Frame = std::map<std::string, BindingId>;

    struct FrameGuard {
        std::vector<Frame>& frames;
        explicit FrameGuard(std::vector<Frame>& f) : frames(f) { frames.emplace_back(); }
        ~FrameGuard() { frames.pop_back(); }
    };

    struct AliasGuard {
        std::vector<std::vector<RRelRef>>& stack;
        AliasGuard(std::vector<std::vector<RRelRef>>& s, const std::vector<RRelRef>& rels)
            : stack(s) {
            stack.push_back(rels);
        }
        ~AliasGuard() { stack.pop_back(); }
    };

    BindingId add_binding(Binding b) {
        bindings_.push_back(std::move(b));
        return bindings_.size() - 1;
    }

    std::optional<BindingId> lookup(const std::string& name) const {
        for (auto it = frames_.rbegin(); it != frames_.rend(); ++it) {
            auto found = it->find(name);
            if (found != it->end()) return found->second;
        }
        return std::nullopt;
    }

    RQuery query(const Query& q) {
        return std::visit([&](const auto& n) { return this->node(n); }, q.node);
    }

    // ---- SELECT ---------------------------------------------------------

    RQuery node(const Select& s) {
        RSelect out;
        if (s.from.empty()) {
            if (s.where) throw Error("InvalidQuery", "WHERE requires a FROM clause");
        }
        std::set<std::string> aliases;
        for (const auto& ref : s.from) {
            RRelRef r;
            if (const auto* name = std::get_if<std::string>(&ref.source)) {
                auto b = lookup(*name);
                if (!b) throw UnknownRelationError(*name);
                r.alias = ref.alias.value_or(*name);
                r.source = *b;
                r.schema = bindings_[*b].schema;
                r.schema.relation = *name;
            } else {
                // Subqueries in FROM are uncorrelated: no enclosing aliases.
                std::vector<std::vector<RRelRef>> saved;
                saved.swap(outer_);
                RQuery sub;
                try {
                    sub = query(*std::get<Box<Query>>(ref.source));
                } catch (...) {
                    outer_.swap(saved);
                    throw;
                }
                outer_.swap(saved);
                r.alias = ref.alias.value_or("");
                r.schema = sub.schema;
                r.schema.relation = r.alias;
                r.source = Box<RQuery>(std::move(sub));
            }
            if (!r.alias.empty() && !aliases.insert(r.alias).second)
                throw Error("DuplicateAlias", "alias '" + r.alias + "' used twice in FROM");
            out.from.push_back(std::move(r));
        }

        Schema schema;
        std::size_t generated = 0;
        for (const auto& item : s.items) {
            if (const auto* star = std::get_if<Star>(&item.item)) {
                if (out.from.empty()) throw Error("InvalidQuery", "'*' requires a FROM clause");
                bool found = !star->qualifier;
                for (std::size_t r = 0; r < out.from.size(); ++r) {
                    if (star->qualifier && out.from[r].alias != *star->qualifier) continue;
                    found = true;
                    for (std::size_t c = 0; c < out.from[r].schema.arity(); ++c) {
                        out.projection.push_back(BoundColumn{r, c});
                        schema.columns.push_back(output_column(out.from, r, c));
                    }
                }
                if (!found) throw UnknownRelationError(*star->qualifier);
                continue;
            }
            const auto& op = std::get<Operand>(item.item);
            BoundOperand bound = operand(op, out.from);
            out.projection.push_back(bound);
            Column col;
            if (const auto* bc = std::get_if<BoundColumn>(&bound)) {
                col = output_column(out.from, bc->relation, bc->column);
            } else {
                ++generated;
                col = Column{"expr" + std::to_string(generated), literal_type(std::get<Value>(bound)),
                             ""};
            }
            if (item.alias) {
                col.name = *item.alias;
                col.provenance.clear();
            }
            schema.columns.push_back(std::move(col));
        }
        if (s.where) {
            AliasGuard guard(outer_, out.from);
            out.where = condition(*s.where, out.from);
        }
        return RQuery{std::move(out), std::move(schema)};
    }

    static Column output_column(const std::vector<RRelRef>& from, std::size_t r, std::size_t c) {
        const auto& rel = from[r];
        const auto& src = rel.schema.columns[c];
        std::string label = rel.schema.relation.empty() ? rel.alias : rel.schema.relation;
        return Column{src.name, src.type, label.empty() ? src.name : label + "." + src.name};
    }

    BoundOperand operand(const Operand& o, const std::vector<RRelRef>& from) {
        if (const auto* v = std::get_if<Value>(&o)) return *v;
        const auto& ref = std::get<ColumnRef>(o);
        std::optional<BoundColumn> hit;
        for (std::size_t r = 0; r < from.size(); ++r) {
            if (ref.qualifier && from[r].alias != *ref.qualifier) continue;
            if (auto c = from[r].schema.find(ref.name)) {
                if (hit) throw ambiguous_column(ref.display());
                hit = BoundColumn{r, *c};
            }
        }
        if (hit) return *hit;
        bool qualifier_known = false;
        if (ref.qualifier) {
            for (const auto& r : from)
                if (r.alias == *ref.qualifier) qualifier_known = true;
        }
        if (!qualifier_known) {
            for (const auto& enclosing : outer_) {
                for (const auto& r : enclosing) {
                    bool alias_ok = !ref.qualifier || r.alias == *ref.qualifier;
                    if (alias_ok && r.schema.find(ref.name))
                        throw unsupported_feature("correlated subquery (" + ref.display() + ")");
                }
            }
        }
        throw unknown_column(ref.display());
    }

    static ColumnType operand_type(const BoundOperand& o, const std::vector<RRelRef>& from) {
        if (const auto* v = std::get_if<Value>(&o)) return literal_type(*v);
        const auto& c = std::get<BoundColumn>(o);
        return from[c.relation].schema.columns[c.column].type;
    }

    static std::string operand_name(const Operand& o) {
        if (const auto* c = std::get_if<ColumnRef>(&o)) return c->display();
        return datalog::to_sql_literal(std::get<Value>(o));
    }

    RCondition condition(const Condition& c, const std::vector<RRelRef>& from) {
        return std::visit(
            [&](const auto& n) -> RCondition {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, Compare>) {
                    BoundOperand lhs = operand(n.lhs, from);
                    BoundOperand rhs = operand(n.rhs, from);
                    ColumnType lt = operand_type(lhs, from);
                    ColumnType rt = operand_type(rhs, from);
                    if (!comparable(lt, rt))
                        throw type_mismatch(operand_name(n.lhs), lt.spelling, rt.spelling);
                    return RCondition{RCompare{std::move(lhs), n.op, std::move(rhs)}};
                } else if constexpr (std::is_same_v<T, And>) {
                    return RCondition{RAnd{condition(*n.lhs, from), condition(*n.rhs, from)}};
                } else if constexpr (std::is_same_v<T, Or>) {
                    return RCondition{ROr{condition(*n.lhs, from), condition(*n.rhs, from)}};
                } else if constexpr (std::is_same_v<T, Not>) {
                    return RCondition{RNot{condition(*n.inner, from)}};
                } else {
                    std::vector<BoundOperand> lhs;
                    for (const auto& o : n.lhs) lhs.push_back(operand(o, from));
                    RQuery sub = query(*n.query);
                    if (sub.schema.arity() != lhs.size())
                        throw ArityMismatch("IN subquery", sub.schema.arity(), lhs.size());
                    for (std::size_t i = 0; i < lhs.size(); ++i) {
                        ColumnType lt = operand_type(lhs[i], from);
                        const ColumnType& rt = sub.schema.columns[i].type;
                        if (!lt.compatible(rt))
                            throw type_mismatch(operand_name(n.lhs[i]), lt.spelling, rt.spelling);
                    }
                    return RCondition{RIn{std::move(lhs), std::move(sub), n.negated}};
                }
            },
            c.node);
    }

    // ---- UNION ALL ------------------------------------------------------

    RQuery node(const UnionAll& u) {
        RQuery left = query(*u.left);
        RQuery right = query(*u.right);
        if (left.schema.arity() != right.schema.arity())
            throw ArityMismatch("UNION ALL", right.schema.arity(), left.schema.arity());
        for (std::size_t i = 0; i < left.schema.arity(); ++i) {
            const auto& lc = left.schema.columns[i];
            const auto& rc = right.schema.columns[i];
            if (!lc.type.compatible(rc.type))
                throw type_mismatch(lc.name, lc.type.spelling, rc.type.spelling);
        }
        Schema schema = left.schema;
        return RQuery{RUnionAll{std::move(left), std::move(right)}, std::move(schema)};
    }

    // ---- WITH -----------------------------------------------------------

    Schema named_schema(const std::string& name, const Schema& source,
                        const std::optional<std::vector<std::string>>& columns) {
        if (columns && columns->size() != source.arity())
            throw ArityMismatch(name, source.arity(), columns->size());
        Schema s;
        s.relation = name;
        std::set<std::string> seen;
        for (std::size_t i = 0; i < source.arity(); ++i) {
            std::string col = columns ? (*columns)[i] : source.columns[i].name;
            if (!seen.insert(col).second)
                throw Error("DuplicateColumn",
                            "column '" + col + "' appears twice in relation '" + name + "'");
            s.columns.push_back(Column{col, source.columns[i].type, name + "." + col});
        }
        return s;
    }

    RQuery node(const With& w) {
        FrameGuard guard(frames_);
        RWith out{{}, RQuery{}};
        std::set<std::string> names;
        for (const auto& def : w.defs) {
            if (!names.insert(def.name).second)
                throw Error("DuplicateName", "WITH defines '" + def.name + "' twice");
            RQuery rq = query(*def.query);
            Schema s = named_schema(def.name, rq.schema, def.columns);
            BindingId id = add_binding({def.name, Binding::Kind::View, s});
            edges_[id] = referenced_bindings(rq);
            frames_.back()[def.name] = id;
            out.defs.push_back(RViewDef{id, std::move(rq)});
        }
        RQuery body = query(*w.body);
        Schema schema = body.schema;
        out.body = std::move(body);
        return RQuery{std::move(out), std::move(schema)};
    }

    // ---- ASSUME ---------------------------------------------------------

    RQuery node(const Assume& a) {
        FrameGuard guard(frames_);
        std::map<std::string, BindingId> targets;
        std::set<std::string> pending;
        for (const auto& as : a.assumptions) {
            if (targets.count(as.target) || pending.count(as.target)) continue;
            if (auto b = lookup(as.target)) {
                targets[as.target] = *b;
                frames_.back()[as.target] = *b;
            } else {
                pending.insert(as.target);
            }
        }

        std::vector<std::optional<RQuery>> sources(a.assumptions.size());
        for (bool progress = true; progress;) {
            progress = false;
            for (std::size_t i = 0; i < a.assumptions.size(); ++i) {
                if (sources[i]) continue;
                const auto& as = a.assumptions[i];
                try {
                    sources[i] = query(*as.source);
                } catch (const UnknownRelationError& e) {
                    if (pending.count(e.name()) && !targets.count(e.name())) continue;
                    throw;
                }
                progress = true;
                if (!targets.count(as.target)) {
                    Schema s = named_schema(as.target, sources[i]->schema, as.columns);
                    BindingId id = add_binding({as.target, Binding::Kind::AssumedRelation, s});
                    targets[as.target] = id;
                    frames_.back()[as.target] = id;
                }
            }
        }
        for (std::size_t i = 0; i < a.assumptions.size(); ++i) {
            if (!sources[i])
                throw unsupported_feature("recursive assumption on '" + a.assumptions[i].target +
                                          "'");
        }

        RAssume out{{}, RQuery{}};
        for (std::size_t i = 0; i < a.assumptions.size(); ++i) {
            const auto& as = a.assumptions[i];
            BindingId target = targets.at(as.target);
            const Schema& ts = bindings_[target].schema;
            const Schema& ss = sources[i]->schema;
            if (ss.arity() != ts.arity()) throw ArityMismatch(as.target, ss.arity(), ts.arity());
            if (as.columns && as.columns->size() != ts.arity())
                throw ArityMismatch(as.target, as.columns->size(), ts.arity());
            for (std::size_t c = 0; c < ts.arity(); ++c) {
                if (!ts.columns[c].type.compatible(ss.columns[c].type))
                    throw type_mismatch(as.target + "." + ts.columns[c].name,
                                        ts.columns[c].type.spelling, ss.columns[c].type.spelling);
            }
            auto refs = referenced_bindings(*sources[i]);
            edges_[target].insert(refs.begin(), refs.end());
            out.assumptions.push_back(RAssumption{std::move(*sources[i]), as.polarity, target});
        }
        for (const auto& [name, id] : targets) {
            if (reaches(id, id)) throw unsupported_feature("recursive assumption on '" + name + "'");
        }
        RQuery body = query(*a.body);
        Schema schema = body.schema;
        out.body = std::move(body);
        return RQuery{std::move(out), std::move(schema)};
    }

    bool reaches(BindingId from, BindingId to) const {
        std::set<BindingId> seen;
        std::vector<BindingId> stack{from};
        while (!stack.empty()) {
            BindingId b = stack.back();
            stack.pop_back();
            auto it = edges_.find(b);
            if (it == edges_.end()) continue;
            for (BindingId next : it->second) {
                if (next == to) return true;
                if (seen.insert(next).second) stack.push_back(next);
            }
        }
        return false;
    }

    std::vector<Binding> bindings_;
    std::vector<Frame> frames_;
    std::vector<std::vector<RRelRef>> outer_;
    std::map<BindingId, std::set<BindingId>> edges_;
};

void collect(const RQuery& q, std::set<BindingId>& out);

void collect(const RCondition& c, std::set<BindingId>& out) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, RAnd> || std::is_same_v<T, ROr>) {
                collect(*n.lhs, out);
                collect(*n.rhs, out);
            } else if constexpr (std::is_same_v<T, RNot>) {
                collect(*n.inner, out);
            } else if constexpr (std::is_same_v<T, RIn>) {
                collect(*n.query, out);
            }
        },
        c.node);
}

void collect(const RQuery& q, std::set<BindingId>& out) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, RSelect>) {
                for (const auto& r : n.from) {
                    if (const auto* b = std::get_if<BindingId>(&r.source)) out.insert(*b);
                    else collect(*std::get<Box<RQuery>>(r.source), out);
                }
                if (n.where) collect(*n.where, out);
            } else if constexpr (std::is_same_v<T, RUnionAll>) {
                collect(*n.left, out);
                collect(*n.right, out);
            } else if constexpr (std::is_same_v<T, RWith>) {
                for (const auto& d : n.defs) collect(*d.query, out);
                collect(*n.body, out);
            } else {
                for (const auto& a : n.assumptions) collect(*a.source, out);
                collect(*n.body, out);
            }
        },
        q.node);
}

}  // namespace

std::set<BindingId> referenced_bindings(const RQuery& q) {
    std::set<BindingId> out;
    collect(q, out);
    return out;
}

ResolvedQuery resolve(const Query& q, const Catalog& catalog) { return Resolver(catalog).run(q); }

Schema infer_schema(const ResolvedQuery& q) { return q.root.schema; }

}  // namespace hypoteq::sql
