#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "asslkit/syntax/lexer.hpp"
#include "asslkit/syntax/source_span.hpp"
#include "asslkit/syntax/value.hpp"

// Syntax tree of one specification. Nodes are plain values; equality is structural
// and ignores spans (see SourceSpan).

namespace asslkit::syntax {

struct Reference {
    RefNamespace ns = RefNamespace::Events;
    std::string name;
    bool qualified = true;  // false for bare fluent names in CONDITIONS
    SourceSpan span;
    bool operator==(const Reference&) const = default;
};

struct Name {
    std::string text;
    SourceSpan span;
    bool operator==(const Name&) const = default;
};

enum class CompareOp { Eq, Ne, Lt, Le, Gt, Ge };
std::string_view compare_op_spelling(CompareOp op);

struct Expr {
    enum class Kind { Literal, Metric, Fluent, Local, Not, And, Or, Compare, Add, Sub, Neg };

    Kind kind = Kind::Literal;
    Value literal{false};
    Reference ref;         // Metric, Fluent
    std::string local;     // Local
    CompareOp op = CompareOp::Eq;
    std::vector<Expr> operands;
    SourceSpan span;

    bool operator==(const Expr&) const = default;
};

struct CallStmt {
    std::string binding;  // empty when the result is discarded
    Reference action;
    SourceSpan span;
    bool operator==(const CallStmt&) const = default;
};

struct AssignStmt {
    Reference metric;
    Expr value;
    SourceSpan span;
    bool operator==(const AssignStmt&) const = default;
};

struct SendStmt {
    Reference message;
    Reference channel;
    SourceSpan span;
    bool operator==(const SendStmt&) const = default;
};

struct FailStmt {
    std::string reason;
    SourceSpan span;
    bool operator==(const FailStmt&) const = default;
};

using Statement = std::variant<CallStmt, AssignStmt, SendStmt, FailStmt>;
const SourceSpan& statement_span(const Statement& s);

struct ActivationClause {
    enum class Kind { Sent, Received, Changed, Elapsed };
    Kind kind = Kind::Sent;
    Reference ref;            // message (Sent/Received) or metric (Changed)
    std::int64_t ticks = 0;   // Elapsed
    SourceSpan span;
    bool operator==(const ActivationClause&) const = default;
};

struct EventDecl {
    std::string name;
    bool injectable = false;
    std::optional<Expr> guard;
    std::vector<ActivationClause> activation;
    SourceSpan span;
    bool operator==(const EventDecl&) const = default;
};

struct ActionDecl {
    std::string name;
    std::optional<Expr> guard;
    std::optional<Expr> ensures;
    std::vector<Statement> does;
    std::vector<Statement> onerr_does;
    std::vector<Reference> triggers;
    std::vector<Reference> onerr_triggers;
    SourceSpan span;
    bool operator==(const ActionDecl&) const = default;
};

struct MetricDecl {
    std::string name;
    ValueType type = ValueType::Boolean;
    Value initial{false};
    SourceSpan span;
    bool operator==(const MetricDecl&) const = default;
};

struct FluentDecl {
    std::string name;
    std::vector<Reference> initiated_by;
    std::vector<Reference> terminated_by;
    SourceSpan span;
    bool operator==(const FluentDecl&) const = default;
};

struct MappingDecl {
    std::vector<Reference> conditions;
    std::vector<Reference> do_actions;
    SourceSpan span;
    bool operator==(const MappingDecl&) const = default;
};

struct PolicyDecl {
    std::string name;  // SELF_PROTECTING, SELF_HEALING, ...
    std::vector<FluentDecl> fluents;
    std::vector<MappingDecl> mappings;
    SourceSpan span;
    bool operator==(const PolicyDecl&) const = default;
};

/// A sub-tier kept as its normalized token text, without semantics.
struct OpaqueBlock {
    std::string keyword;
    std::string name;  // may be empty
    std::string body;  // token spellings joined by single spaces
    SourceSpan span;
    bool operator==(const OpaqueBlock&) const = default;
};

struct MessageDecl {
    std::string name;
    Name sender;
    Name receiver;
    SourceSpan span;
    bool operator==(const MessageDecl&) const = default;
};

struct ChannelDecl {
    std::string name;
    std::int64_t capacity = 1;
    SourceSpan span;
    bool operator==(const ChannelDecl&) const = default;
};

/// ASIP at system level, AEIP inside an autonomic element.
struct InteractionProtocol {
    std::vector<MessageDecl> messages;
    std::vector<ChannelDecl> channels;
    std::vector<OpaqueBlock> functions;
    std::vector<OpaqueBlock> managed_elements;  // AEIP only
    SourceSpan span;
    bool operator==(const InteractionProtocol&) const = default;
};

enum class TierKind { System, Element };

/// Shared shape of the AS tier and AE tiers. Element-only members stay empty on the
/// AS tier; `architecture` is system-only.
struct Tier {
    TierKind kind = TierKind::System;
    std::string name;
    std::vector<OpaqueBlock> slos;
    std::vector<PolicyDecl> policies;
    std::vector<ActionDecl> actions;
    std::vector<EventDecl> events;
    std::vector<MetricDecl> metrics;
    std::optional<OpaqueBlock> architecture;
    std::vector<Name> friends;
    std::optional<InteractionProtocol> aeip;
    std::vector<OpaqueBlock> recovery_protocol;
    std::vector<OpaqueBlock> behavior_models;
    std::vector<OpaqueBlock> outcomes;
    SourceSpan span;
    bool operator==(const Tier&) const = default;
};

struct SpecificationTree {
    Tier as_tier;
    std::optional<InteractionProtocol> asip;
    std::vector<Tier> ae_tiers;
    bool operator==(const SpecificationTree&) const = default;
};

}  // namespace asslkit::syntax
