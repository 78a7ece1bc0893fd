#include "asslkit/cli/cli.hpp"

#include <unistd.h>

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "asslkit/checker/checker.hpp"
#include "asslkit/runtime/interpreter.hpp"
#include "asslkit/runtime/model.hpp"
#include "asslkit/runtime/scenario.hpp"
#include "asslkit/testgen/testgen.hpp"
#include "asslkit/verifier/check.hpp"
#include "asslkit/verifier/lts.hpp"
#include "asslkit/verifier/property.hpp"

namespace asslkit::cli {

namespace {

namespace fs = std::filesystem;

/// Raised for bad input files; maps to kUsage.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised when the spec itself has errors; the diagnostics are already printed.
struct SpecRejected : std::runtime_error {
    SpecRejected() : std::runtime_error("spec has errors") {}
};

class Painter {
public:
    explicit Painter(bool enabled) : enabled_(enabled) {}
    std::string operator()(std::string_view text, const char* code) const {
        if (!enabled_) return std::string(text);
        return std::string("\x1b[") + code + "m" + std::string(text) + "\x1b[0m";
    }

private:
    bool enabled_;
};

constexpr const char* kRed = "31";
constexpr const char* kGreen = "32";
constexpr const char* kYellow = "33";

std::optional<bool> color_setting(std::ostream& out) {
    const char* raw = std::getenv("ASSLKIT_COLOR");
    const std::string mode = raw ? raw : "auto";
    if (mode == "always") return true;
    if (mode == "never") return false;
    if (mode == "auto") return &out == &std::cout && ::isatty(STDOUT_FILENO) != 0;
    return std::nullopt;
}

std::string format_colored(const Diagnostic& d, const Painter& paint) {
    std::string line = format_diagnostic(d);
    const std::string word = d.severity == Severity::Error ? "error" : "warning";
    const auto at = line.find(": " + word + " ");
    if (at == std::string::npos) return line;
    return line.substr(0, at + 2) + paint(word, d.severity == Severity::Error ? kRed : kYellow) +
           line.substr(at + 2 + word.size());
}

/// Checks and compiles `path`, printing diagnostics; warnings are printed only when `show_warnings`.
std::shared_ptr<const runtime::Model> load_model(const std::string& path, std::ostream& out, const Painter& paint,
                                                 bool show_warnings) {
    if (!fs::is_regular_file(path)) throw UsageError("cannot read " + path);
    checker::CheckResult r = checker::check_file(path);
    for (const auto& d : r.diagnostics) {
        if (show_warnings || d.severity == Severity::Error) out << format_colored(d, paint) << "\n";
    }
    if (!r.spec) throw SpecRejected();
    return runtime::compile(*r.spec);
}

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
    }
    std::ofstream f(path, std::ios::binary);
    f << text;
    f.close();
    if (!f) throw UsageError("cannot write " + path.string());
}

runtime::GuardSnapshot snapshot_of(const std::string& text) {
    return text == "pre" ? runtime::GuardSnapshot::Pre : runtime::GuardSnapshot::Post;
}

/// `cex.scenario` for the first counterexample, then `cex.2.scenario`, `cex.3.scenario`.
fs::path numbered(const fs::path& base, std::size_t n) {
    if (n == 1) return base;
    fs::path p = base;
    p.replace_filename(base.stem().string() + "." + std::to_string(n) + base.extension().string());
    return p;
}

struct CheckArgs {
    std::string spec;
};

struct RunArgs {
    std::string spec;
    std::string scenario;
    std::optional<std::uint64_t> seed;
    std::int64_t max_ticks = 1000;
    std::string trace;
    std::string snapshot = "post";
};

struct VerifyArgs {
    std::string spec;
    std::string prop;
    std::size_t bound_states = verifier::Bounds{}.max_states;
    std::size_t bound_depth = verifier::Bounds{}.max_depth;
    std::string cex;
    unsigned jobs = 1;
    std::uint64_t seed = 0;
    std::string snapshot = "post";
};

struct GentestsArgs {
    std::string spec;
    std::string out;
    std::string since;
};

struct GraphArgs {
    std::string spec;
    std::string out;
    std::string prop;
    std::size_t bound_states = verifier::Bounds{}.max_states;
    std::size_t bound_depth = verifier::Bounds{}.max_depth;
    unsigned jobs = 1;
    std::uint64_t seed = 0;
    std::string snapshot = "post";
};

int cmd_check(const CheckArgs& a, std::ostream& out, const Painter& paint) {
    load_model(a.spec, out, paint, true);
    return kOk;
}

int cmd_run(const RunArgs& a, std::ostream& out, const Painter& paint) {
    auto model = load_model(a.spec, out, paint, false);
    runtime::Scenario sc;
    if (!a.scenario.empty()) {
        try {
            sc = runtime::load_scenario(*model, a.scenario);
        } catch (const runtime::ScenarioError& e) {
            throw UsageError(e.what());
        } catch (const std::runtime_error& e) {
            throw UsageError(e.what());
        }
    }
    runtime::Options options;
    options.guard_snapshot = snapshot_of(a.snapshot);
    const std::uint64_t seed = a.seed ? *a.seed : sc.seed.value_or(0);
    runtime::RunResult r = runtime::run(*model, sc, a.max_ticks, seed, options);
    if (!a.trace.empty()) {
        if (a.trace == "-") {
            out << r.trace.to_text();
        } else {
            write_text(a.trace, r.trace.to_text());
        }
    }

    std::size_t events = 0, initiations = 0, terminations = 0, actions = 0, failures = 0;
    for (const auto& rec : r.trace.records) {
        switch (rec.kind) {
            case runtime::RecordKind::EventRaised: ++events; break;
            case runtime::RecordKind::FluentInitiated: ++initiations; break;
            case runtime::RecordKind::FluentTerminated: ++terminations; break;
            case runtime::RecordKind::ActionSucceeded: ++actions; break;
            case runtime::RecordKind::ActionFailed: ++failures; break;
            default: break;
        }
    }
    const bool depth = r.reason == runtime::StopReason::DepthExceeded;
    out << "stop: " << paint(runtime::stop_reason_name(r.reason), depth ? kRed : kGreen) << "\n";
    out << "ticks: " << r.final_state.tick << "\n";
    out << "records: " << r.trace.records.size() << "\n";
    out << "events: " << events << "\n";
    out << "fluent initiations: " << initiations << "\n";
    out << "fluent terminations: " << terminations << "\n";
    out << "actions succeeded: " << actions << "\n";
    out << "actions failed: " << failures << "\n";
    if (depth) out << r.trace.records.back().detail << "\n";
    return depth ? kNegative : kOk;
}

verifier::PropertyFile load_props(const runtime::Model& model, const std::string& path) {
    if (path.empty()) {
        verifier::PropertyFile pf;
        pf.env = verifier::default_env(model);
        return pf;
    }
    if (!fs::is_regular_file(path)) throw UsageError("cannot read " + path);
    try {
        return verifier::load_property_file(model, path);
    } catch (const verifier::MalformedProperty& e) {
        throw UsageError(path + ": " + e.what());
    } catch (const verifier::UnresolvedAtom& e) {
        throw UsageError(path + ": " + e.what());
    }
}

int cmd_verify(const VerifyArgs& a, std::ostream& out, const Painter& paint) {
    auto model = load_model(a.spec, out, paint, false);
    verifier::PropertyFile pf = load_props(*model, a.prop);
    verifier::BuildOptions options;
    options.bounds = {a.bound_states, a.bound_depth};
    options.runtime.guard_snapshot = snapshot_of(a.snapshot);
    options.seed = a.seed;
    options.jobs = a.jobs;
    verifier::Lts lts = verifier::build_lts(*model, pf.env, options, pf.properties);
    out << "states: " << lts.size() << (lts.truncated ? " (truncated)" : "") << "\n";
    out << "edges: " << lts.edges.size() << "\n";

    bool all_hold = true;
    std::size_t violations = 0;
    for (const auto& p : pf.properties) {
        verifier::Verdict v = verifier::check(*model, lts, p);
        const auto name = verifier::result_name(v.result);
        const char* color = v.result == verifier::Verdict::Result::Holds      ? kGreen
                            : v.result == verifier::Verdict::Result::Violated ? kRed
                                                                              : kYellow;
        out << paint(name, color) << "\t" << p.text << "\n";
        if (v.result == verifier::Verdict::Result::Holds) continue;
        all_hold = false;
        if (v.result != verifier::Verdict::Result::Violated) continue;
        verifier::Explanation ex = verifier::explain(*model, lts, p, v);
        std::istringstream lines(ex.text);
        for (std::string line; std::getline(lines, line);) {
            if (line.rfind("Violated", 0) == 0) continue;
            out << "  " << line << "\n";
        }
        if (!a.cex.empty()) {
            const fs::path file = numbered(a.cex, ++violations);
            write_text(file, runtime::write_scenario(*model, ex.scenario));
            out << "  counterexample written to " << file.string() << "\n";
        }
    }
    return all_hold ? kOk : kNegative;
}

int cmd_gentests(const GentestsArgs& a, std::ostream& out, const Painter& paint) {
    auto model = load_model(a.spec, out, paint, false);
    const fs::path dir = a.out;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw UsageError("cannot create " + dir.string());
    {
        const fs::path probe = dir / ".asslkit-write-probe";
        std::ofstream f(probe);
        if (!f) throw UsageError("cannot write to " + dir.string());
        f.close();
        fs::remove(probe, ec);
    }

    testgen::Suite suite;
    std::optional<std::size_t> regenerated;
    std::set<std::string> stale;
    if (!a.since.empty()) {
        auto old_model = load_model(a.since, out, paint, false);
        testgen::Suite old_suite = testgen::read_suite(dir);
        std::size_t count = 0;
        suite = testgen::regenerate(old_suite, *old_model, *model, &count);
        regenerated = count;
        for (const auto& p : testgen::impact(*old_model, *model).policies) stale.insert(p);
        for (const auto& t : old_suite) {
            bool kept = false;
            for (const auto& n : suite) kept = kept || n.policy == t.policy;
            if (!kept) stale.insert(t.policy);
        }
    } else {
        suite = testgen::generate_all(*model);
        for (const auto& t : suite) stale.insert(t.policy);
        for (const auto& entry : fs::directory_iterator(dir)) {
            if (entry.is_directory()) stale.insert(entry.path().filename().string());
        }
    }
    for (const auto& p : stale) fs::remove_all(dir / p, ec);
    for (const auto& t : suite) {
        if (stale.count(t.policy)) testgen::write_test(t, dir);
    }

    std::map<std::string, std::pair<std::size_t, std::size_t>> counts;  // policy -> (paths, feasible)
    for (const auto& p : testgen::all_policies(*model)) counts[testgen::policy_name(*model, p)];
    std::size_t feasible = 0;
    for (const auto& t : suite) {
        auto& c = counts[t.policy];
        ++c.first;
        if (t.feasible) {
            ++c.second;
            ++feasible;
        }
    }
    for (const auto& p : testgen::all_policies(*model)) {
        for (const auto& w : testgen::enumerate_paths(*model, p).warnings) out << "warning: " << w << "\n";
    }
    for (const auto& [policy, c] : counts) {
        out << policy << ": " << c.first << " paths, " << c.second << " feasible, " << c.first - c.second
            << " infeasible\n";
    }
    for (const auto& t : suite) {
        if (!t.feasible) out << "  " << paint("infeasible", kYellow) << " " << t.policy << "/" << t.id << ": " << t.note << "\n";
    }
    out << "total: " << suite.size() << " paths, " << feasible << " written, " << suite.size() - feasible
        << " infeasible\n";
    if (regenerated) out << *regenerated << " regenerated\n";
    return kOk;
}

int cmd_graph(const GraphArgs& a, std::ostream& out, const Painter& paint) {
    auto model = load_model(a.spec, out, paint, false);
    verifier::PropertyFile pf = load_props(*model, a.prop);
    verifier::BuildOptions options;
    options.bounds = {a.bound_states, a.bound_depth};
    options.runtime.guard_snapshot = snapshot_of(a.snapshot);
    options.seed = a.seed;
    options.jobs = a.jobs;
    verifier::Lts lts = verifier::build_lts(*model, pf.env, options, pf.properties);
    const std::string dot = verifier::to_dot(lts);
    if (a.out.empty()) {
        out << dot;
    } else {
        write_text(a.out, dot);
        out << lts.size() << " states, " << lts.edges.size() << " edges" << (lts.truncated ? " (truncated)" : "")
            << "\n";
    }
    return kOk;
}

void add_bounds(CLI::App* cmd, std::size_t& states, std::size_t& depth, unsigned& jobs, std::uint64_t& seed,
                std::string& snapshot) {
    cmd->add_option("--bound-states", states, "Maximum number of states to explore")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--bound-depth", depth, "Maximum breadth-first depth")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--jobs", jobs, "Worker threads for state expansion")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--seed", seed, "Interleaving seed")->capture_default_str();
    cmd->add_option("--guard-snapshot", snapshot, "Guard evaluation point for CHANGED events")
        ->check(CLI::IsMember({"post", "pre"}))
        ->capture_default_str();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    const std::optional<bool> color = color_setting(out);
    if (!color) {
        err << "ASSLKIT_COLOR must be auto, always or never\n";
        return kUsage;
    }
    const Painter paint(*color);

    CLI::App app{"Toolchain for multi-tier autonomic system specifications", "asslkit"};
    app.require_subcommand(1);
    app.footer("Environment:\n  ASSLKIT_COLOR   auto, always or never\n\n"
               "Exit status: 0 ok, 1 diagnostics or negative answer, 2 usage error, 3 internal error");

    CheckArgs check_args;
    auto* check = app.add_subcommand("check", "Parse and check a specification");
    check->add_option("spec", check_args.spec, "Specification file")->required();

    RunArgs run_args;
    auto* run = app.add_subcommand("run", "Execute a scenario and write its trace");
    run->add_option("spec", run_args.spec, "Specification file")->required();
    run->add_option("--scenario", run_args.scenario, "Scenario file (default: no stimuli)");
    run->add_option("--seed", run_args.seed, "Interleaving seed (default: the scenario's seed, else 0)");
    run->add_option("--max-ticks", run_args.max_ticks, "Tick budget")->check(CLI::PositiveNumber)->capture_default_str();
    run->add_option("--trace", run_args.trace, "Trace output file, or - for standard output");
    run->add_option("--guard-snapshot", run_args.snapshot, "Guard evaluation point for CHANGED events")
        ->check(CLI::IsMember({"post", "pre"}))
        ->capture_default_str();

    VerifyArgs verify_args;
    auto* verify = app.add_subcommand("verify", "Check temporal properties over the bounded state graph");
    verify->add_option("spec", verify_args.spec, "Specification file")->required();
    verify->add_option("--prop", verify_args.prop, "Property file")->required();
    verify->add_option("--cex", verify_args.cex, "Counterexample scenario output file");
    add_bounds(verify, verify_args.bound_states, verify_args.bound_depth, verify_args.jobs, verify_args.seed,
               verify_args.snapshot);

    GentestsArgs gen_args;
    auto* gentests = app.add_subcommand("gentests", "Generate a path-coverage test suite");
    gentests->add_option("spec", gen_args.spec, "Specification file")->required();
    gentests->add_option("--out", gen_args.out, "Suite directory")->required();
    gentests->add_option("--since", gen_args.since,
                         "Previous specification; regenerate only the policies its changes impact");

    GraphArgs graph_args;
    auto* graph = app.add_subcommand("graph", "Export the state graph in DOT format");
    graph->add_option("spec", graph_args.spec, "Specification file")->required();
    graph->add_option("--out", graph_args.out, "Output file (default: standard output)");
    graph->add_option("--prop", graph_args.prop, "Property file supplying the environment");
    add_bounds(graph, graph_args.bound_states, graph_args.bound_depth, graph_args.jobs, graph_args.seed,
               graph_args.snapshot);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "asslkit: " << e.what() << "\n";
        if (e.get_exit_code() != 0) err << "Run with --help for more information.\n";
        return e.get_exit_code() == 0 ? kOk : kUsage;
    }

    try {
        if (check->parsed()) return cmd_check(check_args, out, paint);
        if (run->parsed()) return cmd_run(run_args, out, paint);
        if (verify->parsed()) return cmd_verify(verify_args, out, paint);
        if (gentests->parsed()) return cmd_gentests(gen_args, out, paint);
        if (graph->parsed()) return cmd_graph(graph_args, out, paint);
    } catch (const SpecRejected&) {
        return kNegative;
    } catch (const UsageError& e) {
        err << "asslkit: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "asslkit: internal error: " << e.what() << "\n";
        return kInternal;
    }
    return kInternal;
}

}  // namespace asslkit::cli
