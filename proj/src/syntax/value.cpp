#include "asslkit/syntax/value.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "asslkit/syntax/lexer.hpp"

namespace asslkit::syntax {

std::string_view type_name(ValueType t) {
    switch (t) {
        case ValueType::Boolean: return "boolean";
        case ValueType::Integer: return "integer";
        case ValueType::Real: return "real";
        case ValueType::Text: return "text";
    }
    return "?";
}

bool parse_type_name(std::string_view word, ValueType& out) {
    for (ValueType t : {ValueType::Boolean, ValueType::Integer, ValueType::Real, ValueType::Text}) {
        if (type_name(t) == word) {
            out = t;
            return true;
        }
    }
    return false;
}

std::string render_value(const Value& v) {
    switch (type_of(v)) {
        case ValueType::Boolean: return std::get<bool>(v) ? "true" : "false";
        case ValueType::Integer: return std::to_string(std::get<std::int64_t>(v));
        case ValueType::Real: {
            const double d = std::get<double>(v);
            char buf[64];
            // Shortest representation that reads back exactly.
            for (int precision = 1; precision <= 17; ++precision) {
                std::snprintf(buf, sizeof buf, "%.*f", precision, d);
                if (std::strtod(buf, nullptr) == d) break;
            }
            std::string s = buf;
            if (s.find('.') == std::string::npos) s += ".0";
            return s;
        }
        case ValueType::Text: return quote_text(std::get<std::string>(v));
    }
    return {};
}

}  // namespace asslkit::syntax
