#pragma once

#include <string>

#include "asslkit/syntax/ast.hpp"

namespace asslkit::syntax {

/// Canonical source text: two-space indentation, sub-tiers in a fixed order, and
/// the minimum parentheses needed to preserve expression structure.
std::string pretty_print(const SpecificationTree& tree);

std::string print_expr(const Expr& e);
std::string print_reference(const Reference& r);
std::string print_statement(const Statement& s);

}  // namespace asslkit::syntax
