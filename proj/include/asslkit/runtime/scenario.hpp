#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "asslkit/runtime/model.hpp"

namespace asslkit::runtime {

struct Stimulus {
    enum class Kind { Inject, Set, Send, Halt };
    Kind kind = Kind::Inject;
    std::size_t tier = 0;
    std::size_t target = 0;   // event, metric, or message
    std::size_t channel = 0;  // Send
    Value value{false};       // Set

    bool operator==(const Stimulus&) const = default;
};

/// Scenario text form, e.g. `inject w.up`, `set w.m 3`, `send ASIP.m ASIP.c`, `halt`.
std::string describe_stimulus(const Model& model, const Stimulus& s);

struct ScenarioStep {
    std::int64_t tick = 0;
    Stimulus stimulus;
};

struct Scenario {
    std::string name;
    std::optional<std::uint64_t> seed;
    std::vector<ScenarioStep> steps;
};

class ScenarioError : public std::runtime_error {
public:
    ScenarioError(int line, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// Parses the line format
///   tick <n> inject <EVENT> | tick <n> set <METRIC> <value> |
///   tick <n> send <MESSAGE> <CHANNEL> | tick <n> halt
/// plus `seed <n>`, `name <text>` and `#` comments. Names may be qualified as
/// `tier.name`; bare names must be unique across tiers. Integers are accepted for
/// real metrics. Throws ScenarioError.
Scenario parse_scenario(const Model& model, std::string_view text);

Scenario load_scenario(const Model& model, const std::string& path);

std::string write_scenario(const Model& model, const Scenario& scenario);

}  // namespace asslkit::runtime
