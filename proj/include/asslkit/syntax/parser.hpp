#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "asslkit/diagnostic.hpp"
#include "asslkit/syntax/ast.hpp"
#include "asslkit/syntax/lexer.hpp"

namespace asslkit::syntax {

struct ParseOutcome {
    std::optional<SpecificationTree> tree;  // present iff errors is empty
    std::vector<Diagnostic> errors;         // E-LEX / E-PARSE
};

/// Recursive-descent parser over a token stream. After an error, parsing resumes at
/// the next top-level block so one run reports several problems.
ParseOutcome parse(std::span<const Token> tokens, const std::string& file = "<input>");

/// tokenize + parse; lexical errors are reported as an E-LEX diagnostic.
ParseOutcome parse_source(std::string_view source, const std::string& file = "<input>");

/// Reads and parses a UTF-8 `.assl` file. Throws std::runtime_error if the file
/// cannot be read.
ParseOutcome parse_file(const std::string& path);

}  // namespace asslkit::syntax
