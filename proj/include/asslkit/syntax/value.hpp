#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

namespace asslkit::syntax {

enum class ValueType { Boolean, Integer, Real, Text };

/// A typed scalar. Alternative order matches ValueType.
using Value = std::variant<bool, std::int64_t, double, std::string>;

inline ValueType type_of(const Value& v) { return static_cast<ValueType>(v.index()); }

std::string_view type_name(ValueType t);
bool parse_type_name(std::string_view word, ValueType& out);

/// Source-literal rendering: true/false, decimal integers, reals always carrying a
/// '.', double-quoted text.
std::string render_value(const Value& v);

}  // namespace asslkit::syntax
