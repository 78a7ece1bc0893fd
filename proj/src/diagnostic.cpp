#include "asslkit/diagnostic.hpp"

#include <algorithm>
#include <tuple>

namespace asslkit {

std::string format_diagnostic(const Diagnostic& d) {
    std::string out = d.span.file + ":" + std::to_string(d.span.line) + ":" +
                      std::to_string(d.span.column) + ": ";
    out += d.severity == Severity::Error ? "error " : "warning ";
    out += d.code + ": " + d.message;
    return out;
}

void sort_diagnostics(std::vector<Diagnostic>& diagnostics) {
    std::stable_sort(diagnostics.begin(), diagnostics.end(), [](const Diagnostic& a, const Diagnostic& b) {
        return std::tie(a.span.file, a.span.line, a.span.column, a.code, a.message) <
               std::tie(b.span.file, b.span.line, b.span.column, b.code, b.message);
    });
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
    return std::any_of(diagnostics.begin(), diagnostics.end(),
                       [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

}  // namespace asslkit
