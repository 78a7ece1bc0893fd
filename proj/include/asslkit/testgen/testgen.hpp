#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "asslkit/runtime/interpreter.hpp"

namespace asslkit::testgen {

struct PolicyRef {
    std::size_t tier = 0;
    std::size_t policy = 0;
    auto operator<=>(const PolicyRef&) const = default;
};

/// `tier.POLICY`
std::string policy_name(const runtime::Model& model, PolicyRef p);
std::vector<PolicyRef> all_policies(const runtime::Model& model);

enum class Branch { GuardReject, Success, Error };
char branch_letter(Branch b);  // R, S, E
std::string_view branch_name(Branch b);

struct PolicyPath {
    PolicyRef policy;
    std::size_t mapping = 0;  // index into the tier's mappings
    std::size_t fluent = 0;   // condition fluent raised by the initiator
    std::size_t initiator = 0;
    std::vector<Branch> branches;  // one per DO_ACTIONS entry
    std::size_t terminator = 0;
    std::string id;  // m<ordinal>_<initiator>_<branches>_<terminator>
};

struct PathSet {
    std::vector<PolicyPath> paths;
    std::vector<std::string> warnings;
};

/// (initiating event) x (per action: GuardReject | Success | Error) x (terminating
/// event), per mapping, without branches ruled out by constant guards or actions
/// that cannot fail.
PathSet enumerate_paths(const runtime::Model& model, PolicyRef policy);

/// One trace predicate: `seq tick kind subject detail` with `*` wildcards. Negative
/// assertions require that no record matches.
struct Assertion {
    bool negative = false;
    std::array<std::string, 5> fields{"*", "*", "*", "*", "*"};
    bool operator==(const Assertion&) const = default;
};

std::string format_assertion(const Assertion& a);
Assertion parse_assertion(std::string_view line);  // throws std::invalid_argument
std::string format_assertions(const std::vector<Assertion>& list);
std::vector<Assertion> parse_assertions(std::string_view text);

bool glob_match(std::string_view pattern, std::string_view text);

struct CheckOutcome {
    bool passed = false;
    std::string message;  // first failing assertion
};

/// Positive assertions must match records in order; negative ones must match none.
CheckOutcome check_assertions(const std::vector<Assertion>& assertions, const runtime::Trace& trace);

struct GeneratedTest {
    std::string policy;  // tier.POLICY
    std::string id;
    bool feasible = false;
    std::string note;           // why a path is infeasible
    std::string scenario_text;  // empty when infeasible
    std::vector<Assertion> assertions;
    bool operator==(const GeneratedTest&) const = default;
};

using Suite = std::vector<GeneratedTest>;

inline constexpr std::int64_t kTestMaxTicks = 1000;

/// Searches metric presets and stimuli that force each path's branches. Paths with
/// no such setup are returned with feasible = false.
std::vector<GeneratedTest> generate(const runtime::Model& model, const std::vector<PolicyPath>& paths);

/// Every policy of the spec, in declaration order.
Suite generate_all(const runtime::Model& model);

struct TestRun {
    CheckOutcome outcome;
    runtime::RunResult run;
};

TestRun run_test(const runtime::Model& model, const GeneratedTest& test);

/// (tier.action, branch) pairs that the enumerated paths require and that the
/// traces of the given runs exercise.
struct Coverage {
    std::set<std::pair<std::string, Branch>> required;
    std::set<std::pair<std::string, Branch>> covered;
    double ratio() const;
};

Coverage measure_coverage(const runtime::Model& model, const std::vector<PolicyPath>& paths,
                          const std::vector<runtime::Trace>& traces);

struct ImpactSet {
    std::vector<std::string> changed;   // declarations, e.g. "antsWorker/action/checkPrivateMessage"
    std::vector<std::string> policies;  // tier.POLICY, sorted
    bool contains(const std::string& policy) const;
};

/// Declarations are compared structurally; a policy is impacted when its reference
/// closure (in either version) contains a changed declaration.
ImpactSet impact(const runtime::Model& old_model, const runtime::Model& new_model);

/// Tests of unimpacted policies are carried over; the rest are generated afresh.
Suite regenerate(const Suite& old_suite, const runtime::Model& old_model, const runtime::Model& new_model,
                 std::size_t* regenerated = nullptr);

/// `<dir>/<tier.POLICY>/<id>.scenario` and `.expect` for each feasible test.
void write_suite(const Suite& suite, const std::filesystem::path& dir);
void write_test(const GeneratedTest& test, const std::filesystem::path& dir);
Suite read_suite(const std::filesystem::path& dir);

}  // namespace asslkit::testgen
