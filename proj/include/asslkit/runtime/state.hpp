#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "asslkit/runtime/model.hpp"

namespace asslkit::runtime {

struct Cause {
    enum class Kind { Activation, Triggered, OnError, Injected };
    Kind kind = Kind::Injected;
    std::string text;  // clause, action or scenario step

    std::string describe() const;  // e.g. "triggered:w.act"
    bool operator==(const Cause&) const = default;
};

struct PreValue {
    std::size_t metric = 0;
    Value old{false};
    bool operator==(const PreValue&) const = default;
};

struct EventOccurrence {
    EventKey event;
    Cause cause;
    std::int64_t tick = 0;
    std::optional<PreValue> pre;  // CHANGED activations: the overwritten value
    bool operator==(const EventOccurrence&) const = default;
};

struct TierState {
    std::vector<bool> fluents;
    std::vector<Value> metrics;
    bool operator==(const TierState&) const = default;
};

struct RuntimeState {
    std::int64_t tick = 0;
    std::vector<TierState> tiers;
    std::vector<std::deque<std::size_t>> channels;  // queued message indices
    std::deque<EventOccurrence> pending;
    std::vector<std::int64_t> timers;  // ticks left per TimerModel
    std::uint64_t seed = 0;
    bool halted = false;
    bool operator==(const RuntimeState&) const = default;
};

/// All fluents inactive, metrics at their initial values, queues empty, tick 0.
RuntimeState init(const Model& model, std::uint64_t seed);

}  // namespace asslkit::runtime
