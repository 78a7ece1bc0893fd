#include "doctest.h"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "asslkit/cli/cli.hpp"
#include "asslkit/runtime/scenario.hpp"
#include "asslkit/testgen/testgen.hpp"
#include "asslkit/verifier/lts.hpp"
#include "asslkit/verifier/property.hpp"
#include "fixtures.hpp"

using namespace asslkit;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args) {
    ::setenv("ASSLKIT_COLOR", "never", 1);
    std::ostringstream out, err;
    int code = cli::run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string spec_path(const std::string& mission = "ants_self_protecting") {
    return (fixtures::mission_dir(mission) / "spec.assl").string();
}

std::string scenario_path(const std::string& stem, const std::string& mission = "ants_self_protecting") {
    return (fixtures::mission_dir(mission) / "scenarios" / (stem + ".scenario")).string();
}

fs::path write(const fs::path& dir, const std::string& name, const std::string& text) {
    const fs::path p = dir / name;
    std::ofstream(p) << text;
    return p;
}

std::size_t lines(const std::string& text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

std::size_t count_files(const fs::path& dir) {
    std::size_t n = 0;
    for (const auto& e : fs::recursive_directory_iterator(dir)) n += e.is_regular_file();
    return n;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("help enumerates every flag") {
    std::string all;
    for (std::string cmd : {"", "check", "run", "verify", "gentests", "graph"}) {
        std::vector<std::string> args;
        if (!cmd.empty()) args.push_back(cmd);
        args.push_back("--help");
        Result r = invoke(args);
        CHECK(r.code == cli::kOk);
        all += "$ asslkit " + cmd + " --help\n" + r.out + "\n";
    }
    CHECK(all == fixtures::read_text(fs::path(ASSLKIT_GOLDEN_DIR) / "cli_help.txt"));
    for (const char* flag : {"--scenario", "--seed", "--max-ticks", "--trace", "--guard-snapshot", "--prop",
                             "--bound-states", "--bound-depth", "--cex", "--jobs", "--out", "--since"}) {
        CHECK(all.find(flag) != std::string::npos);
    }
}

TEST_CASE("usage errors") {
    CHECK(invoke({}).code == cli::kUsage);
    CHECK(invoke({"frobnicate"}).code == cli::kUsage);
    CHECK(invoke({"run"}).code == cli::kUsage);
    CHECK(invoke({"verify", spec_path()}).code == cli::kUsage);
    ::setenv("ASSLKIT_COLOR", "sometimes", 1);
    std::ostringstream out, err;
    CHECK(cli::run_cli({"check", spec_path()}, out, err) == cli::kUsage);
    CHECK(err.str() == "ASSLKIT_COLOR must be auto, always or never\n");
}

TEST_CASE("check") {
    Result ok = invoke({"check", spec_path()});
    CHECK(ok.code == cli::kOk);
    CHECK(ok.out.empty());

    auto dir = fixtures::scratch_dir("cli-check");
    auto bad = write(dir, "bad.assl", "AS s { }\nAE w {\n  SELF_P { FLUENT f { INITIATED_BY { EVENTS.a } "
                                      "TERMINATED_BY { EVENTS.b } }\n    MAPPING { CONDITIONS { ghost } "
                                      "DO_ACTIONS { ACTIONS.act } } }\n  ACTION act { DOES { fail \"x\"; } }\n  EVENT a { INJECTABLE; }\n"
                                      "  EVENT b { INJECTABLE; }\n}\n");
    Result undef = invoke({"check", bad.string()});
    CHECK(undef.code == cli::kNegative);
    CHECK(lines(undef.out) == 1);
    CHECK(undef.out.find("error E-UNDEF") != std::string::npos);

    Result missing = invoke({"check", (dir / "missing.assl").string()});
    CHECK(missing.code == cli::kUsage);
    CHECK(missing.err.find("cannot read") != std::string::npos);
}

TEST_CASE("colored output") {
    auto dir = fixtures::scratch_dir("cli-color");
    auto bad = write(dir, "bad.assl", "AS s { }\nAE w { EVENT a { } EVENT a { } }\n");
    ::setenv("ASSLKIT_COLOR", "always", 1);
    std::ostringstream out, err;
    CHECK(cli::run_cli({"check", bad.string()}, out, err) == cli::kNegative);
    CHECK(out.str().find("\x1b[31merror\x1b[0m") != std::string::npos);
    CHECK(invoke({"check", bad.string()}).out.find('\x1b') == std::string::npos);
}

TEST_CASE("run") {
    auto dir = fixtures::scratch_dir("cli-run");
    const std::string trace1 = (dir / "a.trace").string(), trace2 = (dir / "b.trace").string();
    Result r = invoke({"run", spec_path(), "--scenario", scenario_path("secure"), "--trace", trace1});
    CHECK(r.code == cli::kOk);
    CHECK(r.out.find("stop: quiescent\n") != std::string::npos);
    CHECK(r.out.find("fluent initiations: 1\n") != std::string::npos);
    CHECK(r.out.find("fluent terminations: 1\n") != std::string::npos);
    CHECK(invoke({"run", spec_path(), "--scenario", scenario_path("secure"), "--trace", trace2}).out == r.out);
    CHECK(fixtures::read_text(trace1) == fixtures::read_text(trace2));
    CHECK(fixtures::read_text(trace1).find("FluentTerminated\tantsWorker.inSecurityCheck\t"
                                           "by=antsWorker.privateMessageSecure") != std::string::npos);

    CHECK(invoke({"run", spec_path(), "--max-ticks", "0"}).code == cli::kUsage);
    CHECK(invoke({"run", spec_path(), "--guard-snapshot", "sideways"}).code == cli::kUsage);
    auto broken = write(dir, "broken.scenario", "tick 1 inject ghost\n");
    CHECK(invoke({"run", spec_path(), "--scenario", broken.string()}).code == cli::kUsage);

    auto storm = write(dir, "storm.assl", R"(AS s { } AE w {
        SELF_P { FLUENT f { INITIATED_BY { EVENTS.a } TERMINATED_BY { EVENTS.b } }
                 MAPPING { CONDITIONS { f } DO_ACTIONS { ACTIONS.again } } }
        ACTION again { DOES { METRICS.n = METRICS.n + 1; } TRIGGERS { EVENTS.b, EVENTS.a } }
        EVENT a { INJECTABLE; } EVENT b { }
        METRIC n { TYPE integer; INITIAL 0; } })");
    auto sc = write(dir, "storm.scenario", "tick 0 inject w.a\n");
    Result deep = invoke({"run", storm.string(), "--scenario", sc.string()});
    CHECK(deep.code == cli::kNegative);
    CHECK(deep.out.find("stop: depth-exceeded") != std::string::npos);
}

TEST_CASE("verify") {
    auto dir = fixtures::scratch_dir("cli-verify");
    const std::string props =
        (fixtures::mission_dir("ants_self_protecting") / "props" / "security.prop").string();
    Result live = invoke({"verify", spec_path(), "--prop", props});
    CHECK(live.code == cli::kOk);
    CHECK(live.out.find("Holds\tG (fluent inSecurityCheck -> F (event privateMessageSecure | event "
                        "privateMessageInsecure))\n") != std::string::npos);
    CHECK(invoke({"verify", spec_path(), "--prop", props, "--jobs", "4"}).out == live.out);

    auto never = write(dir, "never.prop", "G (false)\nG (true)\n");
    const fs::path cex = dir / "out" / "cex.scenario";
    Result bad = invoke({"verify", spec_path(), "--prop", never.string(), "--cex", cex.string()});
    CHECK(bad.code == cli::kNegative);
    CHECK(bad.out.find("Violated\tG (false)\n") != std::string::npos);
    CHECK(bad.out.find("Holds\tG (true)\n") != std::string::npos);
    REQUIRE(fs::exists(cex));
    auto model = fixtures::mission_model("ants_self_protecting");
    CHECK(runtime::load_scenario(*model, cex.string()).steps.back().stimulus.kind == runtime::Stimulus::Kind::Halt);

    Result tiny = invoke({"verify", spec_path(), "--prop", props, "--bound-states", "3"});
    CHECK(tiny.code == cli::kNegative);
    CHECK(tiny.out.find("states: 3 (truncated)") != std::string::npos);
    CHECK(tiny.out.find("Inconclusive\t") != std::string::npos);
    CHECK(tiny.out.find("Violated") == std::string::npos);

    auto malformed = write(dir, "bad.prop", "G (fluent inSecurityCheck\n");
    Result m = invoke({"verify", spec_path(), "--prop", malformed.string()});
    CHECK(m.code == cli::kUsage);
    CHECK(m.err.find("line 1: ") != std::string::npos);
    auto unknown = write(dir, "unknown.prop", "G (fluent nothing)\n");
    CHECK(invoke({"verify", spec_path(), "--prop", unknown.string()}).code == cli::kUsage);
}

TEST_CASE("verify writes one counterexample per violation") {
    auto dir = fixtures::scratch_dir("cli-cex");
    auto two = write(dir, "two.prop", "G (false)\nG (!fluent inSecurityCheck)\n");
    Result r = invoke({"verify", spec_path(), "--prop", two.string(), "--cex", (dir / "cex.scenario").string()});
    CHECK(r.code == cli::kNegative);
    CHECK(fs::exists(dir / "cex.scenario"));
    CHECK(fs::exists(dir / "cex.2.scenario"));
}

TEST_CASE("gentests") {
    auto dir = fixtures::scratch_dir("cli-gen");
    Result r = invoke({"gentests", spec_path(), "--out", (dir / "suite").string()});
    CHECK(r.code == cli::kOk);
    CHECK(r.out.find("antsWorker.SELF_PROTECTING: 6 paths, 6 feasible, 0 infeasible\n") != std::string::npos);
    CHECK(count_files(dir / "suite" / "antsWorker.SELF_PROTECTING") == 12);

    Result again = invoke({"gentests", spec_path(), "--out", (dir / "suite").string(), "--since", spec_path()});
    CHECK(again.code == cli::kOk);
    CHECK(again.out.find("\n0 regenerated\n") != std::string::npos);
    auto model = fixtures::mission_model("ants_self_protecting");
    auto fresh = testgen::generate_all(*model);
    std::erase_if(fresh, [](const auto& t) { return !t.feasible; });
    CHECK(testgen::read_suite(dir / "suite").size() == fresh.size());

    auto forced = write(dir, "forced.assl", R"(AS s { } AE w {
        SELF_P { FLUENT f { INITIATED_BY { EVENTS.a } TERMINATED_BY { EVENTS.z } }
                 MAPPING { CONDITIONS { f } DO_ACTIONS { ACTIONS.act } } }
        ACTION act { GUARDS { METRICS.x = METRICS.x } DOES { METRICS.x = true; } TRIGGERS { EVENTS.z } }
        EVENT a { INJECTABLE; } EVENT z { }
        METRIC x { TYPE boolean; INITIAL false; } })");
    Result inf = invoke({"gentests", forced.string(), "--out", (dir / "forced").string()});
    CHECK(inf.code == cli::kOk);
    CHECK(inf.out.find("w.SELF_P: 2 paths, 1 feasible, 1 infeasible\n") != std::string::npos);
    CHECK(inf.out.find("infeasible w.SELF_P/m0_a_R_z: no metric presets force the chosen branches\n") !=
          std::string::npos);
    CHECK_FALSE(fs::exists(dir / "forced" / "w.SELF_P" / "m0_a_R_z.scenario"));
    CHECK(fs::exists(dir / "forced" / "w.SELF_P" / "m0_a_S_z.scenario"));

    auto blocker = write(dir, "file", "x");
    CHECK(invoke({"gentests", spec_path(), "--out", (blocker / "suite").string()}).code == cli::kUsage);
}

TEST_CASE("gentests regenerates impacted policies only") {
    auto dir = fixtures::scratch_dir("cli-since");
    std::string text = fixtures::figures_spec_text();
    const std::string from = "METRICS.lastMessageQuarantined = true; }";
    text.replace(text.find(from), from.size(), "METRICS.lastMessageQuarantined = true; METRICS.certificateChecked = false; }");
    auto edited = write(dir, "edited.assl", text);
    const std::string suite = (dir / "suite").string();
    REQUIRE(invoke({"gentests", spec_path(), "--out", suite}).code == cli::kOk);
    const std::string ruler_before = fixtures::read_text(dir / "suite" / "antsRuler.SELF_CONFIGURING" /
                                                         "m0_dispatchRequested_S_dispatchDone.expect");
    Result r = invoke({"gentests", edited.string(), "--out", suite, "--since", spec_path()});
    CHECK(r.code == cli::kOk);
    CHECK(r.out.find("\n6 regenerated\n") != std::string::npos);
    CHECK(fixtures::read_text(dir / "suite" / "antsRuler.SELF_CONFIGURING" /
                              "m0_dispatchRequested_S_dispatchDone.expect") == ruler_before);
    auto model = fixtures::model_of(text);
    auto expected = testgen::generate_all(*model);
    std::erase_if(expected, [](const auto& t) { return !t.feasible; });
    auto key = [](const testgen::GeneratedTest& t) { return t.policy + "/" + t.id; };
    std::sort(expected.begin(), expected.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
    CHECK(testgen::read_suite(dir / "suite") == expected);
}

TEST_CASE("graph") {
    auto dir = fixtures::scratch_dir("cli-graph");
    auto empty = write(dir, "empty.assl", "AS empty { }\n");
    Result e = invoke({"graph", empty.string()});
    CHECK(e.code == cli::kOk);
    CHECK(std::count(e.out.begin(), e.out.end(), '[') == 2);  // node defaults and s0
    CHECK(e.out.find("s0 [") != std::string::npos);

    const std::string props =
        (fixtures::mission_dir("ants_self_protecting") / "props" / "security.prop").string();
    Result g = invoke({"graph", spec_path(), "--prop", props, "--out", (dir / "g.dot").string()});
    CHECK(g.code == cli::kOk);
    auto model = fixtures::mission_model("ants_self_protecting");
    auto pf = verifier::load_property_file(*model, props);
    auto lts = verifier::build_lts(*model, pf.env, {}, pf.properties);
    CHECK(g.out == std::to_string(lts.size()) + " states, " + std::to_string(lts.edges.size()) + " edges\n");
    const std::string dot = fixtures::read_text(dir / "g.dot");
    std::size_t nodes = 0;
    std::istringstream in(dot);
    for (std::string line; std::getline(in, line);) nodes += line.rfind("  s", 0) == 0 && line.find(" -> ") == std::string::npos;
    CHECK(nodes == lts.size());

    Result t = invoke({"graph", spec_path(), "--prop", props, "--bound-states", "5"});
    CHECK(t.code == cli::kOk);
    CHECK(t.out.find("label=\"truncated\";") != std::string::npos);
}

}  // TEST_SUITE
