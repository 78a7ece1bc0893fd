#pragma once

#include <string>
#include <vector>

#include "asslkit/syntax/source_span.hpp"

namespace asslkit {

enum class Severity { Error, Warning };

// Codes used across the toolchain:
//   E-LEX, E-PARSE         lexical / syntactic errors
//   E-UNDEF, E-DUP         unresolved or duplicate declarations
//   E-TYPE                 type mismatch
//   E-CYCLE                recursive action calls
//   E-FLUENT-OVERLAP       event both initiates and terminates a fluent
//   E-CAPACITY, E-RANGE    out-of-range channel capacity / timer period
//   E-EMPTY                policy without fluents
//   W-UNREACHABLE          fluent never mapped, or event never raisable
struct Diagnostic {
    Severity severity = Severity::Error;
    std::string code;
    std::string message;
    syntax::SourceSpan span;
};

/// Renders `file:line:col: severity CODE: message`.
std::string format_diagnostic(const Diagnostic& d);

/// Canonical order: by span position, then code, then message.
void sort_diagnostics(std::vector<Diagnostic>& diagnostics);

bool has_errors(const std::vector<Diagnostic>& diagnostics);

}  // namespace asslkit
