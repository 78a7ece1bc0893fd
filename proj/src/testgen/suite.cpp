#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "asslkit/testgen/testgen.hpp"

namespace asslkit::testgen {

namespace {

namespace fs = std::filesystem;

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

void write_test(const GeneratedTest& test, const fs::path& dir) {
    if (!test.feasible) return;
    const fs::path policy_dir = dir / test.policy;
    fs::create_directories(policy_dir);
    write_file(policy_dir / (test.id + ".scenario"), test.scenario_text);
    write_file(policy_dir / (test.id + ".expect"), format_assertions(test.assertions));
}

void write_suite(const Suite& suite, const fs::path& dir) {
    fs::create_directories(dir);
    for (const auto& t : suite) write_test(t, dir);
}

Suite read_suite(const fs::path& dir) {
    Suite out;
    if (!fs::exists(dir)) return out;
    std::vector<fs::path> policies;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_directory()) policies.push_back(entry.path());
    }
    std::sort(policies.begin(), policies.end());
    for (const auto& p : policies) {
        std::vector<fs::path> scenarios;
        for (const auto& entry : fs::directory_iterator(p)) {
            if (entry.path().extension() == ".scenario") scenarios.push_back(entry.path());
        }
        std::sort(scenarios.begin(), scenarios.end());
        for (const auto& s : scenarios) {
            GeneratedTest t;
            t.policy = p.filename().string();
            t.id = s.stem().string();
            t.feasible = true;
            t.scenario_text = read_file(s);
            fs::path expect = s;
            expect.replace_extension(".expect");
            t.assertions = parse_assertions(read_file(expect));
            out.push_back(std::move(t));
        }
    }
    return out;
}

}  // namespace asslkit::testgen
