#include "hypoteq/datalog/value.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

namespace hypoteq::datalog {

std::strong_ordering operator<=>(const Value& a, const Value& b) {
    if (a.is_numeric() && b.is_numeric()) {
        double x = a.as_number();
        double y = b.as_number();
        if (x < y) return std::strong_ordering::less;
        if (y < x) return std::strong_ordering::greater;
        if (a.is_int() && b.is_int()) return a.as_int() <=> b.as_int();
        return a.storage().index() <=> b.storage().index();
    }
    if (a.is_numeric()) return std::strong_ordering::less;
    if (b.is_numeric()) return std::strong_ordering::greater;
    return a.as_string().compare(b.as_string()) <=> 0;
}

bool is_bare_atom(const std::string& s) {
    if (s.empty() || !std::islower(static_cast<unsigned char>(s.front()))) return false;
    for (char c : s) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    }
    // Words with a meaning of their own in clause syntax stay quoted.
    return s != "not";
}

namespace {

std::string float_text(double d) {
    if (std::isnan(d)) return "nan";
    if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, d);
    std::string out(buf, res.ptr);
    if (out.find_first_of(".e") == std::string::npos) out += ".0";
    return out;
}

std::string quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'') out += "''";
        else out += c;
    }
    out += '\'';
    return out;
}

}  // namespace

std::string to_string(const Value& v) {
    if (v.is_int()) return std::to_string(v.as_int());
    if (v.is_float()) return float_text(v.as_float());
    return is_bare_atom(v.as_string()) ? v.as_string() : quote(v.as_string());
}

std::string to_sql_literal(const Value& v) {
    if (v.is_string()) return quote(v.as_string());
    return to_string(v);
}

std::string tuple_to_string(const Tuple& t) {
    std::string out = "(";
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i) out += ",";
        out += to_string(t[i]);
    }
    return out + ")";
}

std::size_t ValueHash::operator()(const Value& v) const noexcept {
    std::size_t seed = v.storage().index();
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            seed ^= std::hash<T>{}(x) + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
        },
        v.storage());
    return seed;
}

std::size_t TupleHash::operator()(const Tuple& t) const noexcept {
    std::size_t seed = t.size();
    ValueHash h;
    for (const auto& v : t) seed ^= h(v) + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
    return seed;
}

}  // namespace hypoteq::datalog
