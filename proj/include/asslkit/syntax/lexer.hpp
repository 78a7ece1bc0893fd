#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "asslkit/syntax/source_span.hpp"

namespace asslkit::syntax {

enum class TokenKind {
    Identifier,
    Reference,  // EVENTS.x, ACTIONS.x, METRICS.x, FLUENTS.x, CHANNELS.x, AEIP.MESSAGES.x
    Integer,
    Real,
    String,
    True,
    False,

    LBrace,
    RBrace,
    LParen,
    RParen,
    Comma,
    Semicolon,
    Equal,
    NotEqual,
    Less,
    LessEqual,
    Greater,
    GreaterEqual,
    Plus,
    Minus,

    // Tiers and sub-tiers.
    KwAs,
    KwAsip,
    KwAe,
    KwAeip,
    KwSlo,
    KwArchitecture,
    KwFriends,
    KwRecoveryProtocol,
    KwBehaviorModels,
    KwOutcomes,
    KwMessage,
    KwSender,
    KwReceiver,
    KwChannel,
    KwCapacity,
    KwFunction,
    KwManagedElement,

    // Policies. Any upper-case SELF_* word names a self-managing policy.
    KwPolicy,
    KwFluent,
    KwInitiatedBy,
    KwTerminatedBy,
    KwMapping,
    KwConditions,
    KwDoActions,

    KwEvent,
    KwInjectable,
    KwGuards,
    KwActivation,
    KwSent,
    KwReceived,
    KwChanged,
    KwElapsed,

    KwAction,
    KwEnsures,
    KwDoes,
    KwOnerrDoes,
    KwTriggers,
    KwOnerrTriggers,
    KwCall,
    KwSend,
    KwFail,

    KwMetric,
    KwType,
    KwInitial,

    KwNot,
    KwAnd,
    KwOr,
};

enum class RefNamespace { Events, Actions, Metrics, Fluents, Messages, Channels };

struct Token {
    TokenKind kind = TokenKind::Identifier;
    /// Identifier or reference name, policy name, literal spelling (strings unescaped).
    std::string text;
    RefNamespace ns = RefNamespace::Events;  // meaningful for Reference only
    SourceSpan span;

    friend bool operator==(const Token& a, const Token& b) {
        return a.kind == b.kind && a.text == b.text &&
               (a.kind != TokenKind::Reference || a.ns == b.ns);
    }
};

class LexError : public std::runtime_error {
public:
    LexError(const std::string& message, SourceSpan span)
        : std::runtime_error(message), span_(std::move(span)) {}
    const SourceSpan& span() const { return span_; }

private:
    SourceSpan span_;
};

/// Splits specification text into tokens; whitespace and `//` comments are dropped.
/// Throws LexError on characters outside the language alphabet or malformed literals.
std::vector<Token> tokenize(std::string_view source, const std::string& file = "<input>");

std::string_view token_kind_name(TokenKind kind);
std::string_view namespace_prefix(RefNamespace ns);  // "EVENTS", ..., "AEIP.MESSAGES"

/// Spelling of a token as it would appear in source (strings re-quoted).
std::string token_spelling(const Token& token);

std::string quote_text(std::string_view raw);

}  // namespace asslkit::syntax
