#include "asslkit/syntax/ast.hpp"

namespace asslkit::syntax {

std::string_view compare_op_spelling(CompareOp op) {
    switch (op) {
        case CompareOp::Eq: return "=";
        case CompareOp::Ne: return "!=";
        case CompareOp::Lt: return "<";
        case CompareOp::Le: return "<=";
        case CompareOp::Gt: return ">";
        case CompareOp::Ge: return ">=";
    }
    return "?";
}

const SourceSpan& statement_span(const Statement& s) {
    return std::visit([](const auto& st) -> const SourceSpan& { return st.span; }, s);
}

}  // namespace asslkit::syntax
