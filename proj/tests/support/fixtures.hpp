#pragma once

#include <filesystem>
#include <string>

#include <memory>

#include "asslkit/runtime/model.hpp"
#include "asslkit/runtime/trace.hpp"
#include "asslkit/syntax/ast.hpp"

namespace fixtures {

std::filesystem::path mission_dir(const std::string& name);
std::string read_text(const std::filesystem::path& path);

/// Parses text that is expected to be well formed; throws with the diagnostics otherwise.
asslkit::syntax::SpecificationTree parse_ok(const std::string& text);

/// Checks `text` and compiles it; throws with the diagnostics on errors.
std::shared_ptr<const asslkit::runtime::Model> model_of(const std::string& text);
std::shared_ptr<const asslkit::runtime::Model> mission_model(const std::string& name);

/// Records of `kind`, optionally restricted to one subject.
std::vector<asslkit::runtime::TraceRecord> records_of(const asslkit::runtime::Trace& trace,
                                                      asslkit::runtime::RecordKind kind,
                                                      const std::string& subject = "");

/// The self-protecting worker of the published figures, elisions filled.
std::string figures_spec_text();

/// Fresh empty directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string& tag);

}  // namespace fixtures
