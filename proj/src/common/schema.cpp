#include "hypoteq/schema.hpp"

#include <algorithm>
#include <cctype>

namespace hypoteq {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

}  // namespace

std::optional<ColumnType> ColumnType::parse(const std::string& spelling) {
    std::string s = lower(spelling);
    std::string base = s.substr(0, s.find('('));
    while (!base.empty() && std::isspace(static_cast<unsigned char>(base.back()))) base.pop_back();
    if (base == "int" || base == "integer" || base == "smallint" || base == "bigint")
        return ColumnType{Kind::Int, s};
    if (base == "float" || base == "real" || base == "double" || base == "numeric" ||
        base == "decimal")
        return ColumnType{Kind::Float, s};
    if (base == "string" || base == "varchar" || base == "char" || base == "text" ||
        base == "varchar2" || base == "character")
        return ColumnType{Kind::String, s};
    return std::nullopt;
}

const char* kind_name(ColumnType::Kind k) {
    switch (k) {
        case ColumnType::Kind::Int: return "int";
        case ColumnType::Kind::Float: return "float";
        case ColumnType::Kind::String: return "string";
    }
    return "?";
}

std::optional<std::size_t> Schema::find(const std::string& column) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i].name == column) return i;
    return std::nullopt;
}

std::string Schema::display(const std::string& as_relation) const {
    std::string out = as_relation + "(";
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) out += ",";
        const auto& c = columns[i];
        out += (c.provenance.empty() ? c.name : c.provenance) + ":" + c.type.spelling;
    }
    return out + ")";
}

}  // namespace hypoteq
