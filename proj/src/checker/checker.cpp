#include "asslkit/checker/checker.hpp"

#include "asslkit/syntax/parser.hpp"

namespace asslkit::checker {

CheckResult check_all(syntax::SpecificationTree tree) {
    auto owned = std::make_shared<const syntax::SpecificationTree>(std::move(tree));
    ResolveResult resolved = resolve(*owned);
    CheckResult result;
    result.diagnostics = std::move(resolved.diagnostics);
    if (!has_errors(result.diagnostics)) {
        for (auto* phase : {&check_types, &check_semantics}) {
            auto more = phase(*owned, resolved.symbols);
            result.diagnostics.insert(result.diagnostics.end(), more.begin(), more.end());
        }
    }
    sort_diagnostics(result.diagnostics);
    if (!has_errors(result.diagnostics)) {
        CheckedSpec spec;
        spec.tree = owned;
        spec.symbols = std::move(resolved.symbols);
        spec.warnings = result.diagnostics;
        result.spec = std::move(spec);
    }
    return result;
}

CheckResult check_source(std::string_view source, const std::string& file) {
    auto parsed = syntax::parse_source(source, file);
    if (!parsed.tree) {
        CheckResult result;
        result.diagnostics = std::move(parsed.errors);
        sort_diagnostics(result.diagnostics);
        return result;
    }
    return check_all(std::move(*parsed.tree));
}

CheckResult check_file(const std::string& path) {
    auto parsed = syntax::parse_file(path);
    if (!parsed.tree) {
        CheckResult result;
        result.diagnostics = std::move(parsed.errors);
        sort_diagnostics(result.diagnostics);
        return result;
    }
    return check_all(std::move(*parsed.tree));
}

}  // namespace asslkit::checker
