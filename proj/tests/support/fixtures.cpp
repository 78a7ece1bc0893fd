#include "fixtures.hpp"

#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "asslkit/checker/checker.hpp"
#include "asslkit/syntax/parser.hpp"

namespace fixtures {

std::filesystem::path mission_dir(const std::string& name) {
    return std::filesystem::path(ASSLKIT_MISSIONS_DIR) / name;
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

asslkit::syntax::SpecificationTree parse_ok(const std::string& text) {
    auto outcome = asslkit::syntax::parse_source(text, "test.assl");
    if (!outcome.tree) {
        std::string msg = "unexpected parse errors:";
        for (const auto& d : outcome.errors) msg += "\n" + asslkit::format_diagnostic(d);
        throw std::runtime_error(msg);
    }
    return std::move(*outcome.tree);
}

std::shared_ptr<const asslkit::runtime::Model> model_of(const std::string& text) {
    auto result = asslkit::checker::check_source(text, "test.assl");
    if (!result.spec) {
        std::string msg = "unexpected check errors:";
        for (const auto& d : result.diagnostics) msg += "\n" + asslkit::format_diagnostic(d);
        throw std::runtime_error(msg);
    }
    return asslkit::runtime::compile(*result.spec);
}

std::shared_ptr<const asslkit::runtime::Model> mission_model(const std::string& name) {
    return model_of(read_text(mission_dir(name) / "spec.assl"));
}

std::vector<asslkit::runtime::TraceRecord> records_of(const asslkit::runtime::Trace& trace,
                                                      asslkit::runtime::RecordKind kind,
                                                      const std::string& subject) {
    std::vector<asslkit::runtime::TraceRecord> out;
    for (const auto& r : trace.records) {
        if (r.kind == kind && (subject.empty() || r.subject == subject)) out.push_back(r);
    }
    return out;
}

std::string figures_spec_text() { return read_text(mission_dir("ants_self_protecting") / "spec.assl"); }

std::filesystem::path scratch_dir(const std::string& tag) {
    static std::mt19937_64 rng(std::random_device{}());
    auto dir = std::filesystem::temp_directory_path() / ("asslkit-" + tag + "-" + std::to_string(rng() % 1000000007));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace fixtures
