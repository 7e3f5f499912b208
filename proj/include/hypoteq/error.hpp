#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hypoteq {

// Every failure surfaced by the system carries a stable kind string
// (e.g. "SyntaxError", "UnknownRelation") so that the CLI and the HTTP API
// can render the same taxonomy.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

struct SourcePosition {
    std::size_t line = 1;
    std::size_t column = 1;
};

class SyntaxError : public Error {
public:
    SyntaxError(SourcePosition pos, const std::string& expected, const std::string& found)
        : Error("SyntaxError", "line " + std::to_string(pos.line) + ", column " +
                                   std::to_string(pos.column) + ": expected " + expected +
                                   (found.empty() ? "" : ", found " + found)),
          pos_(pos), expected_(expected) {}

    SourcePosition position() const noexcept { return pos_; }
    const std::string& expected() const noexcept { return expected_; }

private:
    SourcePosition pos_;
    std::string expected_;
};

class ArityMismatch : public Error {
public:
    ArityMismatch(const std::string& predicate, std::size_t seen, std::size_t expected)
        : Error("ArityMismatch", "predicate '" + predicate + "' used with arity " +
                                     std::to_string(seen) + " but expected " +
                                     std::to_string(expected)),
          predicate_(predicate), seen_(seen), expected_(expected) {}

    const std::string& predicate() const noexcept { return predicate_; }
    std::size_t seen() const noexcept { return seen_; }
    std::size_t expected() const noexcept { return expected_; }

private:
    std::string predicate_;
    std::size_t seen_;
    std::size_t expected_;
};

inline Error unsupported_feature(const std::string& what) {
    return Error("UnsupportedFeature", "unsupported feature: " + what);
}

inline Error unknown_relation(const std::string& name) {
    return Error("UnknownRelation", "unknown relation '" + name + "'");
}

inline Error unknown_column(const std::string& name) {
    return Error("UnknownColumn", "unknown column '" + name + "'");
}

inline Error ambiguous_column(const std::string& name) {
    return Error("AmbiguousColumn", "ambiguous column '" + name + "'");
}

inline Error type_mismatch(const std::string& column, const std::string& lhs,
                           const std::string& rhs) {
    return Error("TypeMismatch",
                 "type mismatch on '" + column + "': " + lhs + " vs " + rhs);
}

inline Error type_error(const std::string& message) { return Error("TypeError", message); }

inline Error not_stratifiable(const std::string& cycle) {
    return Error("NotStratifiable", "program is not stratifiable: negative cycle " + cycle);
}

}  // namespace hypoteq
