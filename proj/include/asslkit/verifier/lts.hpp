#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "asslkit/runtime/interpreter.hpp"
#include "asslkit/verifier/property.hpp"

namespace asslkit::verifier {

/// Runtime state plus the bookkeeping that makes the state graph finite: which
/// environment stimuli were already used in the current tick and which event was
/// raised by the last step. Tick numbers and causes are not part of the state.
struct StateVector {
    runtime::RuntimeState runtime;
    std::vector<bool> used;
    std::optional<runtime::EventKey> just_raised;
    bool overflow = false;  // a step exceeded the call depth or step budget
};

struct Bounds {
    std::size_t max_states = 100000;
    std::size_t max_depth = 10000;
};

struct BuildOptions {
    Bounds bounds;
    runtime::Options runtime;
    std::uint64_t seed = 0;
    unsigned jobs = 1;
};

/// Numeric metrics that are only compared with literals and only assigned literals
/// are kept as the index of their interval between threshold constants.
struct Abstraction {
    // thresholds[tier][metric], sorted; empty optional means the metric is exact
    std::vector<std::vector<std::optional<std::vector<Value>>>> thresholds;

    static Abstraction none(const runtime::Model& model);
    static Abstraction derive(const runtime::Model& model, const std::vector<runtime::Stimulus>& env,
                              const std::vector<Property>& properties);
    bool abstracted(std::size_t tier, std::size_t metric) const { return thresholds[tier][metric].has_value(); }
    std::size_t interval(std::size_t tier, std::size_t metric, const Value& v) const;
};

struct Edge {
    std::size_t from = 0;
    std::string label;
    std::size_t to = 0;
    bool operator==(const Edge&) const = default;
};

/// Bounded labeled transition system. State 0 is initial; states are numbered in
/// breadth-first discovery order and edges are sorted by (from, label, to).
struct Lts {
    std::vector<StateVector> states;
    std::vector<std::string> keys;                 // canonical form of each state
    std::vector<std::vector<std::string>> labels;  // sorted proposition labels
    std::vector<Edge> edges;
    std::vector<std::size_t> edge_begin;  // edges of state s: [edge_begin[s], edge_begin[s + 1])
    std::vector<bool> expanded;           // all successors of the state are present
    std::vector<std::size_t> depth;
    std::vector<runtime::Stimulus> env;
    Abstraction abstraction;
    runtime::Options runtime;
    std::uint64_t seed = 0;
    bool truncated = false;

    std::size_t size() const { return states.size(); }
};

/// Canonical text of a state; equal keys mean equal states under the abstraction.
std::string state_key(const Abstraction& abstraction, const StateVector& s,
                      runtime::GuardSnapshot snapshot);

/// `fluent:tier.f`, `event:tier.e`, `metric:tier.m` (true booleans) and `quiescent`.
std::vector<std::string> state_labels(const runtime::Model& model, const StateVector& s);

bool is_quiescent(const StateVector& s);
bool holds(const runtime::Model& model, const StateFormula& f, const StateVector& s);

StateVector initial_state(const runtime::Model& model, const std::vector<runtime::Stimulus>& env, std::uint64_t seed);

struct Successor {
    std::string label;
    StateVector state;
};

/// Pending work is processed one occurrence at a time; a stable state offers each
/// unused environment stimulus and, when time can matter, a `tick`.
std::vector<Successor> successors(const runtime::Model& model, const std::vector<runtime::Stimulus>& env,
                                  const runtime::Options& options, const StateVector& s);

Lts build_lts(const runtime::Model& model, const std::vector<runtime::Stimulus>& env, const BuildOptions& options,
              const std::vector<Property>& properties = {});

/// Graphviz text: nodes carry their proposition labels, edges their stimulus or step.
std::string to_dot(const Lts& lts);

}  // namespace asslkit::verifier
