#include "support.hpp"

#include <algorithm>

#include "hypoteq/engine/engine.hpp"
#include "hypoteq/error.hpp"
#include "hypoteq/era/oracle.hpp"
#include "hypoteq/sql/parser.hpp"
#include "hypoteq/sql/resolver.hpp"
#include "hypoteq/translator/translator.hpp"

namespace hypoteq::testing {

db::DatabaseInstance session_instance(const std::string& student_type) {
    db::DatabaseInstance db;
    db.create_table(Schema{"student", {{"name", *ColumnType::parse(student_type), ""}}});
    db.create_table(Schema{"take", {{"name", ColumnType::string(), ""}, {"title", ColumnType::string(), ""}}});
    for (const char* n : {"adam", "bob", "pete", "scott"}) db.insert("student", {n});
    db.insert("take", {"adam", "db"});
    db.insert("take", {"pete", "db"});
    db.insert("take", {"pete", "lp"});
    db.insert("take", {"scott", "lp"});
    return db;
}

std::vector<Tuple> engine_answer(const db::DatabaseInstance& db, const std::string& sql, bool simplify) {
    translator::CompileOptions opt;
    opt.simplify = simplify;
    auto t = translator::compile(sql::parse_query(sql), db.catalog(), opt);
    engine::Engine e(db, t.program);
    datalog::Atom g{t.answer, {}};
    for (std::size_t i = 0; i < t.arity; ++i) g.args.push_back(datalog::var("X" + std::to_string(i)));
    std::vector<Tuple> rows;
    for (const auto& f : e.solve(g)) {
        Tuple row;
        for (const auto& a : f.fact.args) row.push_back(datalog::as_constant(a));
        rows.push_back(std::move(row));
    }
    std::sort(rows.begin(), rows.end());
    return rows;
}

std::vector<Tuple> oracle_answer(const db::DatabaseInstance& db, const std::string& sql,
                                 std::size_t max_rows) {
    auto r = era::eval_era(sql::resolve(sql::parse_query(sql), db.catalog()), db, max_rows);
    std::sort(r.rows.begin(), r.rows.end());
    return r.rows;
}

std::map<Tuple, std::size_t> counts(const std::vector<Tuple>& rows) {
    std::map<Tuple, std::size_t> out;
    for (const auto& r : rows) ++out[r];
    return out;
}

Generator::Generator(std::uint64_t seed, Limits limits) : rng_(seed), limits_(limits) {}

std::size_t Generator::pick(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
}

bool Generator::chance(double p) { return std::bernoulli_distribution(p)(rng_); }

std::string Generator::literal(Kind k) {
    if (k == Kind::Int) return std::to_string(pick(4));
    static const char* strings[] = {"'a'", "'b'", "'c'", "'Q'"};
    return strings[pick(4)];
}

std::vector<Generator::Kind> Generator::random_sig() {
    std::vector<Kind> sig(1 + pick(2));
    for (auto& k : sig) k = chance(0.6) ? Kind::Int : Kind::String;
    return sig;
}

std::string Generator::column_list(std::size_t n) {
    std::string out = "(";
    for (std::size_t i = 0; i < n; ++i) out += (i ? ",c" : "c") + std::to_string(i);
    return out + ")";
}

db::DatabaseInstance Generator::instance() {
    db::DatabaseInstance db;
    tables_.clear();
    edges_.clear();
    std::size_t n = 1 + pick(limits_.relations);
    for (std::size_t r = 0; r < n; ++r) {
        Rel rel{"r" + std::to_string(r), random_sig()};
        if (chance(0.3)) rel.kinds.push_back(chance(0.5) ? Kind::Int : Kind::String);
        Schema s{rel.name, {}};
        for (std::size_t i = 0; i < rel.kinds.size(); ++i)
            s.columns.push_back(Column{"c" + std::to_string(i),
                                       rel.kinds[i] == Kind::Int ? ColumnType::integer()
                                                                 : ColumnType::string(),
                                       ""});
        db.create_table(s);
        std::size_t rows = pick(limits_.rows + 1);
        for (std::size_t i = 0; i < rows; ++i) {
            Tuple t;
            for (auto k : rel.kinds) {
                if (k == Kind::Int) t.push_back(static_cast<std::int64_t>(pick(4)));
                else t.push_back(std::string(1, "abcQ"[pick(4)]));
            }
            db.insert(rel.name, t);
        }
        tables_.push_back(rel);
    }
    return db;
}

bool Generator::reaches(const std::string& from, const std::string& to) const {
    std::set<std::string> seen;
    std::vector<std::string> stack{from};
    while (!stack.empty()) {
        std::string cur = stack.back();
        stack.pop_back();
        if (cur == to) return true;
        if (!seen.insert(cur).second) continue;
        auto it = edges_.find(cur);
        if (it != edges_.end()) stack.insert(stack.end(), it->second.begin(), it->second.end());
    }
    return false;
}

std::string Generator::condition(const std::vector<Col>& cols, const std::vector<Rel>& scope,
                                 int depth, int level, std::set<std::string>& used) {
    std::size_t choice = pick(level < 2 ? 10 : 6);
    if (choice >= 6) {
        std::string lhs = condition(cols, scope, depth, level + 1, used);
        if (choice == 9) return "not (" + lhs + ")";
        std::string rhs = condition(cols, scope, depth, level + 1, used);
        return "(" + lhs + (choice == 6 ? " or " : " and ") + rhs + ")";
    }
    if (choice >= 4 && depth > 0 && !scope.empty()) {
        std::vector<Col> lhs{cols[pick(cols.size())]};
        if (chance(0.3)) lhs.push_back(cols[pick(cols.size())]);
        std::vector<Kind> sig;
        for (const auto& c : lhs) sig.push_back(c.kind);
        Gen sub = query(sig, scope, depth - 1);
        used.insert(sub.used.begin(), sub.used.end());
        std::string l;
        for (std::size_t i = 0; i < lhs.size(); ++i) l += (i ? ", " : "") + lhs[i].expr;
        if (lhs.size() > 1) l = "(" + l + ")";
        return l + (choice == 4 ? " not in (" : " in (") + sub.sql + ")";
    }
    static const char* ops[] = {"=", "<>", "<", "<=", ">", ">="};
    const Col& a = cols[pick(cols.size())];
    std::vector<const Col*> same;
    for (const auto& c : cols)
        if (c.kind == a.kind) same.push_back(&c);
    std::string rhs = chance(0.5) ? same[pick(same.size())]->expr : literal(a.kind);
    return a.expr + " " + ops[pick(6)] + " " + rhs;
}

Generator::Gen Generator::select(const std::vector<Kind>& sig, const std::vector<Rel>& scope,
                                 int depth) {
    Gen g;
    if (scope.empty() || chance(0.08)) {
        g.sql = "select ";
        for (std::size_t i = 0; i < sig.size(); ++i)
            g.sql += (i ? ", " : "") + literal(sig[i]) + " as c" + std::to_string(i);
        return g;
    }
    std::vector<Col> cols;
    std::string from;
    std::size_t n = 1 + (chance(0.4) ? 1 : 0);
    for (std::size_t i = 0; i < n; ++i) {
        std::string alias = "t" + std::to_string(names_++);
        std::vector<Kind> kinds;
        if (depth > 0 && chance(0.15)) {
            kinds = random_sig();
            Gen sub = query(kinds, scope, depth - 1);
            g.used.insert(sub.used.begin(), sub.used.end());
            from += (i ? ", (" : "(") + sub.sql + ") " + alias;
        } else {
            const Rel& r = scope[pick(scope.size())];
            kinds = r.kinds;
            g.used.insert(r.name);
            from += (i ? ", " : "") + r.name + " " + alias;
        }
        for (std::size_t c = 0; c < kinds.size(); ++c)
            cols.push_back(Col{alias + ".c" + std::to_string(c), kinds[c]});
    }
    g.sql = "select ";
    for (std::size_t i = 0; i < sig.size(); ++i) {
        std::vector<const Col*> fit;
        for (const auto& c : cols)
            if (c.kind == sig[i]) fit.push_back(&c);
        std::string item = (!fit.empty() && chance(0.9)) ? fit[pick(fit.size())]->expr : literal(sig[i]);
        g.sql += (i ? ", " : "") + item + " as c" + std::to_string(i);
    }
    g.sql += " from " + from;
    if (chance(0.6)) g.sql += " where " + condition(cols, scope, depth, 0, g.used);
    return g;
}

Generator::Gen Generator::query(const std::vector<Kind>& sig, const std::vector<Rel>& scope, int depth) {
    std::size_t form = depth > 0 ? pick(10) : 9;
    if (form == 0) {
        Gen l = query(sig, scope, depth - 1), r = query(sig, scope, depth - 1);
        l.used.insert(r.used.begin(), r.used.end());
        return Gen{"(" + l.sql + ") union all (" + r.sql + ")", l.used};
    }
    if (form == 1 || form == 2) {
        std::string v = "v" + std::to_string(names_++);
        std::vector<Kind> kinds = random_sig();
        Gen def = query(kinds, scope, depth - 1);
        edges_[v] = def.used;
        std::vector<Rel> inner = scope;
        inner.push_back(Rel{v, kinds});
        Gen body = query(sig, inner, depth - 1);
        body.used.insert(def.used.begin(), def.used.end());
        body.used.erase(v);
        return Gen{"with " + v + column_list(kinds.size()) + " as (" + def.sql + ") " + body.sql,
                   body.used};
    }
    if (form == 3 || form == 4 || form == 5) {
        std::vector<Rel> inner = scope;
        std::string text = "assume ";
        std::set<std::string> used;
        std::set<std::string> fresh;
        std::size_t count = 1 + (chance(0.3) ? 1 : 0);
        for (std::size_t k = 0; k < count; ++k) {
            Rel target;
            bool is_new = inner.empty() || chance(0.25);
            if (is_new) {
                target = Rel{"a" + std::to_string(names_++), random_sig()};
            } else {
                target = inner[pick(inner.size())];
            }
            std::vector<Rel> allowed;
            for (const auto& r : inner)
                if (r.name != target.name && !reaches(r.name, target.name)) allowed.push_back(r);
            Gen src = query(target.kinds, allowed, depth - 1);
            edges_[target.name].insert(src.used.begin(), src.used.end());
            used.insert(src.used.begin(), src.used.end());
            bool negative = !is_new && chance(0.4);
            text += (k ? ", (" : "(") + src.sql + (negative ? ") not in " : ") in ") + target.name;
            if (is_new) {
                text += column_list(target.kinds.size());
                inner.push_back(target);
                fresh.insert(target.name);
            }
        }
        Gen body = query(sig, inner, depth - 1);
        // A parenthesis right after the target would read as its column list.
        if (body.sql.front() == '(')
            body.sql = "select * from (" + body.sql + ") t" + std::to_string(names_++);
        used.insert(body.used.begin(), body.used.end());
        for (const auto& f : fresh) used.erase(f);
        return Gen{text + " " + body.sql, used};
    }
    return select(sig, scope, depth);
}

std::string Generator::query() {
    std::vector<Kind> sig = random_sig();
    return query(sig, tables_, static_cast<int>(pick(static_cast<std::size_t>(limits_.depth) + 1))).sql;
}

GeneratedCase Generator::next() {
    GeneratedCase c;
    c.db = instance();
    c.sql = query();
    return c;
}

GeneratedCase Generator::next_bounded(std::size_t max_rows, std::size_t* skipped) {
    for (;;) {
        GeneratedCase c = next();
        try {
            oracle_answer(c.db, c.sql, max_rows);
            return c;
        } catch (const Error& e) {
            if (e.kind() != "ResourceLimit") return c;
            if (skipped) ++*skipped;
        }
    }
}

}  // namespace hypoteq::testing
