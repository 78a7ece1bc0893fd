#include "asslkit/missions/missions.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace asslkit::missions {

namespace fs = std::filesystem;

namespace {

std::vector<fs::path> files_with(const fs::path& dir, const std::string& extension) {
    std::vector<fs::path> out;
    if (!fs::is_directory(dir)) return out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == extension) out.push_back(entry.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

fs::path find_stem(const std::vector<fs::path>& paths, const std::string& stem, const std::string& what) {
    for (const auto& p : paths) {
        if (p.stem() == stem) return p;
    }
    throw std::runtime_error("no " + what + " named " + stem);
}

}  // namespace

std::shared_ptr<const runtime::Model> MissionPackage::model() const {
    checker::CheckResult r = checker::check_file(spec.string());
    if (!r.spec) {
        std::string text = name + " does not check:";
        for (const auto& d : r.diagnostics) text += "\n" + format_diagnostic(d);
        throw std::runtime_error(text);
    }
    return runtime::compile(*r.spec);
}

fs::path MissionPackage::scenario(const std::string& stem) const { return find_stem(scenarios, stem, "scenario"); }

fs::path MissionPackage::property(const std::string& stem) const {
    return find_stem(properties, stem, "property file");
}

fs::path missions_root() {
    if (const char* env = std::getenv("ASSLKIT_MISSIONS"); env && *env) return env;
    return ASSLKIT_MISSIONS_DIR;
}

MissionPackage load_package(const std::string& name, const fs::path& root) {
    MissionPackage p;
    p.name = name;
    p.dir = root / name;
    p.spec = p.dir / "spec.assl";
    if (!fs::is_regular_file(p.spec)) throw std::runtime_error("missing mission spec " + p.spec.string());
    p.scenarios = files_with(p.dir / "scenarios", ".scenario");
    p.properties = files_with(p.dir / "props", ".prop");
    std::ifstream in(p.dir / "README", std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    p.readme = buf.str();
    return p;
}

MissionPackage ants_self_protecting() { return load_package("ants_self_protecting"); }
MissionPackage ants_self_healing() { return load_package("ants_self_healing"); }
MissionPackage ants_self_configuring_and_scheduling() { return load_package("ants_self_configuring_and_scheduling"); }
MissionPackage voyager_image_processing() { return load_package("voyager_image_processing"); }

std::vector<MissionPackage> all_packages() {
    return {ants_self_protecting(), ants_self_healing(), ants_self_configuring_and_scheduling(),
            voyager_image_processing()};
}

}  // namespace asslkit::missions
