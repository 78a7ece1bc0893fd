#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "asslkit/checker/checker.hpp"
#include "asslkit/syntax/value.hpp"

namespace asslkit::runtime {

using syntax::Value;
using syntax::ValueType;

/// Expression with every name replaced by a slot index.
struct CompiledExpr {
    enum class Kind { Literal, Metric, Fluent, Local, Not, And, Or, Compare, Add, Sub, Neg };
    Kind kind = Kind::Literal;
    Value literal{false};
    std::size_t slot = 0;  // metric, fluent or local index
    syntax::CompareOp op = syntax::CompareOp::Eq;
    std::vector<CompiledExpr> operands;
};

struct CompiledStatement {
    enum class Kind { Call, Assign, Send, Fail };
    Kind kind = Kind::Call;
    std::size_t target = 0;  // callee action, metric, or message
    int binding = -1;        // local slot of a call result
    std::size_t channel = 0;
    CompiledExpr value;
    std::string reason;
};

struct FluentModel {
    std::string name;
    std::size_t policy = 0;
    std::vector<std::size_t> initiated_by;   // events
    std::vector<std::size_t> terminated_by;  // events
};

struct MappingModel {
    std::size_t policy = 0;
    std::size_t ordinal = 0;                // position inside its policy
    std::vector<std::size_t> conditions;    // fluents
    std::vector<std::size_t> actions;
};

struct ActionModel {
    std::string name;
    std::optional<CompiledExpr> guard;
    std::optional<CompiledExpr> ensures;
    std::vector<CompiledStatement> does;
    std::vector<CompiledStatement> onerr_does;
    std::vector<std::size_t> triggers;
    std::vector<std::size_t> onerr_triggers;
    std::size_t local_slots = 0;
};

struct EventModel {
    std::string name;
    bool injectable = false;
    std::optional<CompiledExpr> guard;
};

struct MetricModel {
    std::string name;
    ValueType type = ValueType::Boolean;
    Value initial{false};
    std::vector<std::size_t> changed_subscribers;  // events of the same tier, declaration order
};

struct TierModel {
    std::string name;
    std::vector<std::string> policies;
    std::vector<FluentModel> fluents;    // all policies, declaration order
    std::vector<MappingModel> mappings;  // all policies, declaration order
    std::vector<ActionModel> actions;
    std::vector<EventModel> events;
    std::vector<MetricModel> metrics;
};

struct EventKey {
    std::size_t tier = 0;
    std::size_t event = 0;
    bool operator==(const EventKey&) const = default;
    auto operator<=>(const EventKey&) const = default;
};

struct MessageModel {
    std::string name;
    std::string qualified;  // "ASIP.m" or "<tier>.m"
    std::size_t sender = 0;
    std::size_t receiver = 0;
    std::vector<EventKey> sent_subscribers;      // every tier
    std::vector<std::size_t> received_subscribers;  // events of the receiver tier
};

struct ChannelModel {
    std::string name;
    std::string qualified;
    std::size_t capacity = 1;
};

struct TimerModel {
    EventKey event;
    std::int64_t period = 1;
};

/// Index-resolved form of a CheckedSpec, shared by the interpreter and the verifier.
struct Model {
    checker::CheckedSpec spec;
    std::vector<TierModel> tiers;
    std::vector<MessageModel> messages;
    std::vector<ChannelModel> channels;
    std::vector<TimerModel> timers;

    std::string qualified(std::size_t tier, const std::string& name) const { return tiers[tier].name + "." + name; }
    std::string event_name(EventKey e) const { return qualified(e.tier, tiers[e.tier].events[e.event].name); }
};

std::shared_ptr<const Model> compile(const checker::CheckedSpec& spec);

}  // namespace asslkit::runtime
