#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace hypoteq::datalog {

/// A ground constant: 64-bit integer, float or string. There are no
/// compound terms and no NULL.
class Value {
public:
    using Storage = std::variant<std::int64_t, double, std::string>;

    Value() : v_(std::int64_t{0}) {}
    Value(std::int64_t i) : v_(i) {}
    Value(int i) : v_(std::int64_t{i}) {}
    Value(double d) : v_(d) {}
    Value(std::string s) : v_(std::move(s)) {}
    Value(const char* s) : v_(std::string(s)) {}

    bool is_int() const { return std::holds_alternative<std::int64_t>(v_); }
    bool is_float() const { return std::holds_alternative<double>(v_); }
    bool is_string() const { return std::holds_alternative<std::string>(v_); }
    bool is_numeric() const { return !is_string(); }

    std::int64_t as_int() const { return std::get<std::int64_t>(v_); }
    double as_float() const { return std::get<double>(v_); }
    const std::string& as_string() const { return std::get<std::string>(v_); }
    double as_number() const { return is_int() ? static_cast<double>(as_int()) : as_float(); }

    const Storage& storage() const { return v_; }

    // Structural identity: 1 and 1.0 are different constants. Numeric
    // comparison semantics live in engine::eval_comparison.
    friend bool operator==(const Value&, const Value&) = default;

    // Total display order: numbers (compared numerically) before strings
    // (compared by code point).
    friend std::strong_ordering operator<=>(const Value& a, const Value& b);

private:
    Storage v_;
};

using Tuple = std::vector<Value>;

/// Datalog spelling of a constant: bare lowercase atoms where possible,
/// quoted otherwise.
std::string to_string(const Value& v);

/// Rendering used in SQL text: strings always single-quoted.
std::string to_sql_literal(const Value& v);

bool is_bare_atom(const std::string& s);

std::string tuple_to_string(const Tuple& t);

struct TupleHash {
    std::size_t operator()(const Tuple& t) const noexcept;
};

struct ValueHash {
    std::size_t operator()(const Value& v) const noexcept;
};

}  // namespace hypoteq::datalog
