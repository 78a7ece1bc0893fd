#pragma once

#include <string>

namespace asslkit::syntax {

/// Location of a node or token in its source file. Lines and columns are 1-based;
/// columns count bytes.
struct SourceSpan {
    std::string file;
    int line = 1;
    int column = 1;
    int length = 0;

    /// Spans never take part in structural comparison of syntax trees, so two nodes
    /// parsed from differently formatted text compare equal. Use same_position() to
    /// compare locations.
    friend bool operator==(const SourceSpan&, const SourceSpan&) { return true; }
};

inline bool same_position(const SourceSpan& a, const SourceSpan& b) {
    return a.file == b.file && a.line == b.line && a.column == b.column && a.length == b.length;
}

/// Strict ordering by (file, line, column).
inline bool position_less(const SourceSpan& a, const SourceSpan& b) {
    if (a.file != b.file) return a.file < b.file;
    if (a.line != b.line) return a.line < b.line;
    return a.column < b.column;
}

}  // namespace asslkit::syntax
