#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "asslkit/runtime/scenario.hpp"
#include "asslkit/verifier/lts.hpp"

namespace asslkit::verifier {

/// A path from the initial state. With `loop_start` set it is a lasso: the last
/// state continues to states[*loop_start] via `loop_label`, or stutters there when
/// `loop_label` is empty (a state without successors).
struct Counterexample {
    std::vector<std::size_t> states;
    std::vector<std::string> steps;  // steps[i] leads from states[i] to states[i + 1]
    std::optional<std::size_t> loop_start;
    std::string loop_label;
    std::size_t trigger = 0;  // position of the state where the violation begins
};

struct Verdict {
    enum class Result { Holds, Violated, Inconclusive };
    Result result = Result::Holds;
    std::optional<Counterexample> counterexample;  // Violated only
};

std::string_view result_name(Verdict::Result r);

/// Shortest counterexamples, ties broken by breadth-first order over sorted edges.
/// Liveness shapes search for lassos among fully expanded states; a truncated
/// graph without a violation yields Inconclusive.
Verdict check(const runtime::Model& model, const Lts& lts, const Property& property);

struct Explanation {
    std::string text;
    runtime::Scenario scenario;
};

/// Step list plus a scenario reproducing the counterexample, ending in `halt` (after
/// one pass around the loop for lassos). Throws std::logic_error unless Violated.
Explanation explain(const runtime::Model& model, const Lts& lts, const Property& property, const Verdict& verdict);

struct ReplayResult {
    bool followed = false;   // the run passed through the counterexample's states in order
    bool falsified = false;  // the observed states violate the property as claimed
    std::string message;
};

/// Runs the explanation's scenario in the runtime and compares observed states with
/// the counterexample.
ReplayResult replay(const runtime::Model& model, const Lts& lts, const Property& property, const Verdict& verdict);

}  // namespace asslkit::verifier
