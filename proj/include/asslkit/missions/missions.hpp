#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "asslkit/checker/checker.hpp"
#include "asslkit/runtime/model.hpp"

namespace asslkit::missions {

/// One shipped mission: `<root>/<name>/spec.assl`, `scenarios/*.scenario`,
/// `props/*.prop` and `README`. Paths are sorted by file name.
struct MissionPackage {
    std::string name;
    std::filesystem::path dir;
    std::filesystem::path spec;
    std::vector<std::filesystem::path> scenarios;
    std::vector<std::filesystem::path> properties;
    std::string readme;

    /// Checks and compiles the spec; throws std::runtime_error listing the errors.
    std::shared_ptr<const runtime::Model> model() const;
    std::filesystem::path scenario(const std::string& stem) const;
    std::filesystem::path property(const std::string& stem) const;
};

/// ASSLKIT_MISSIONS from the environment, else the source tree's missions directory.
std::filesystem::path missions_root();

/// Throws std::runtime_error if the package directory or its spec is missing.
MissionPackage load_package(const std::string& name, const std::filesystem::path& root = missions_root());

MissionPackage ants_self_protecting();
MissionPackage ants_self_healing();
MissionPackage ants_self_configuring_and_scheduling();
MissionPackage voyager_image_processing();

std::vector<MissionPackage> all_packages();

}  // namespace asslkit::missions
