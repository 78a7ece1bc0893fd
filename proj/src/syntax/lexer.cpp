#include "asslkit/syntax/lexer.hpp"

#include <algorithm>
#include <optional>
#include <cctype>
#include <unordered_map>

namespace asslkit::syntax {
namespace {

const std::unordered_map<std::string_view, TokenKind>& keyword_table() {
    static const std::unordered_map<std::string_view, TokenKind> table = {
        {"AS", TokenKind::KwAs},
        {"ASIP", TokenKind::KwAsip},
        {"AE", TokenKind::KwAe},
        {"AEIP", TokenKind::KwAeip},
        {"SLO", TokenKind::KwSlo},
        {"ARCHITECTURE", TokenKind::KwArchitecture},
        {"FRIENDS", TokenKind::KwFriends},
        {"RECOVERY_PROTOCOL", TokenKind::KwRecoveryProtocol},
        {"BEHAVIOR_MODELS", TokenKind::KwBehaviorModels},
        {"OUTCOMES", TokenKind::KwOutcomes},
        {"MESSAGE", TokenKind::KwMessage},
        {"SENDER", TokenKind::KwSender},
        {"RECEIVER", TokenKind::KwReceiver},
        {"CHANNEL", TokenKind::KwChannel},
        {"CAPACITY", TokenKind::KwCapacity},
        {"FUNCTION", TokenKind::KwFunction},
        {"MANAGED_ELEMENT", TokenKind::KwManagedElement},
        {"FLUENT", TokenKind::KwFluent},
        {"INITIATED_BY", TokenKind::KwInitiatedBy},
        {"TERMINATED_BY", TokenKind::KwTerminatedBy},
        {"MAPPING", TokenKind::KwMapping},
        {"CONDITIONS", TokenKind::KwConditions},
        {"DO_ACTIONS", TokenKind::KwDoActions},
        {"EVENT", TokenKind::KwEvent},
        {"INJECTABLE", TokenKind::KwInjectable},
        {"GUARDS", TokenKind::KwGuards},
        {"ACTIVATION", TokenKind::KwActivation},
        {"SENT", TokenKind::KwSent},
        {"RECEIVED", TokenKind::KwReceived},
        {"CHANGED", TokenKind::KwChanged},
        {"ELAPSED", TokenKind::KwElapsed},
        {"ACTION", TokenKind::KwAction},
        {"ENSURES", TokenKind::KwEnsures},
        {"DOES", TokenKind::KwDoes},
        {"ONERR_DOES", TokenKind::KwOnerrDoes},
        {"TRIGGERS", TokenKind::KwTriggers},
        {"ONERR_TRIGGERS", TokenKind::KwOnerrTriggers},
        {"call", TokenKind::KwCall},
        {"send", TokenKind::KwSend},
        {"fail", TokenKind::KwFail},
        {"METRIC", TokenKind::KwMetric},
        {"TYPE", TokenKind::KwType},
        {"INITIAL", TokenKind::KwInitial},
        {"NOT", TokenKind::KwNot},
        {"AND", TokenKind::KwAnd},
        {"OR", TokenKind::KwOr},
        {"true", TokenKind::True},
        {"false", TokenKind::False},
    };
    return table;
}

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool is_policy_word(std::string_view word) {
    if (word.size() <= 5 || word.substr(0, 5) != "SELF_") return false;
    for (char c : word) {
        if (!(std::isupper(static_cast<unsigned char>(c)) || c == '_')) return false;
    }
    return true;
}

class Lexer {
public:
    Lexer(std::string_view src, const std::string& file) : src_(src), file_(file) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (skip_trivia()) {
            out.push_back(next());
        }
        return out;
    }

private:
    bool at_end() const { return pos_ >= src_.size(); }
    char peek(std::size_t ahead = 0) const {
        return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
    }

    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    SourceSpan span_from(std::size_t start, int line, int col) const {
        return SourceSpan{file_, line, col, static_cast<int>(pos_ - start)};
    }

    // Returns false at end of input.
    bool skip_trivia() {
        while (!at_end()) {
            char c = peek();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else if (c == '/' && peek(1) == '/') {
                while (!at_end() && peek() != '\n') advance();
            } else {
                return true;
            }
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& message, std::size_t start, int line, int col) {
        SourceSpan span{file_, line, col, static_cast<int>(std::max<std::size_t>(1, pos_ - start))};
        throw LexError(message, span);
    }

    std::string read_word() {
        std::size_t start = pos_;
        while (!at_end() && is_ident_char(peek())) advance();
        return std::string(src_.substr(start, pos_ - start));
    }

    Token next() {
        const std::size_t start = pos_;
        const int line = line_;
        const int col = col_;
        Token tok;
        const char c = peek();

        if (is_ident_start(c)) {
            std::string word = read_word();
            if (auto ns = qualified_prefix(word)) {
                tok.kind = TokenKind::Reference;
                tok.ns = *ns;
                tok.text = read_qualified_name(start, line, col);
            } else if (auto it = keyword_table().find(word); it != keyword_table().end()) {
                tok.kind = it->second;
                tok.text = word;
            } else if (is_policy_word(word)) {
                tok.kind = TokenKind::KwPolicy;
                tok.text = word;
            } else {
                tok.kind = TokenKind::Identifier;
                tok.text = word;
            }
        } else if (is_digit(c)) {
            while (!at_end() && is_digit(peek())) advance();
            tok.kind = TokenKind::Integer;
            if (peek() == '.' && is_digit(peek(1))) {
                advance();
                while (!at_end() && is_digit(peek())) advance();
                tok.kind = TokenKind::Real;
            }
            if (!at_end() && is_ident_start(peek())) fail("malformed number", start, line, col);
            tok.text = std::string(src_.substr(start, pos_ - start));
        } else if (c == '"') {
            tok.kind = TokenKind::String;
            tok.text = read_string(start, line, col);
        } else {
            tok.kind = punctuation(start, line, col);
            tok.text = std::string(src_.substr(start, pos_ - start));
        }
        tok.span = span_from(start, line, col);
        return tok;
    }

    // Namespace words only form references when followed by '.'.
    std::optional<RefNamespace> qualified_prefix(const std::string& word) const {
        if (peek() != '.') return std::nullopt;
        if (word == "EVENTS") return RefNamespace::Events;
        if (word == "ACTIONS") return RefNamespace::Actions;
        if (word == "METRICS") return RefNamespace::Metrics;
        if (word == "FLUENTS") return RefNamespace::Fluents;
        if (word == "CHANNELS") return RefNamespace::Channels;
        if (word == "AEIP") return RefNamespace::Messages;
        return std::nullopt;
    }

    std::string read_qualified_name(std::size_t start, int line, int col) {
        // Cursor sits on the '.' after the namespace word.
        const bool is_aeip = src_.substr(start, pos_ - start) == "AEIP";
        advance();
        if (is_aeip) {
            if (!is_ident_start(peek())) fail("expected MESSAGES after AEIP.", start, line, col);
            std::string mid = read_word();
            if (mid != "MESSAGES" || peek() != '.') {
                fail("expected AEIP.MESSAGES.<name>", start, line, col);
            }
            advance();
        }
        if (!is_ident_start(peek())) fail("expected a name after qualified prefix", start, line, col);
        return read_word();
    }

    std::string read_string(std::size_t start, int line, int col) {
        advance();  // opening quote
        std::string value;
        while (true) {
            if (at_end() || peek() == '\n') fail("unterminated string literal", start, line, col);
            char ch = peek();
            if (ch == '"') {
                advance();
                return value;
            }
            if (ch == '\\') {
                advance();
                if (at_end()) fail("unterminated string literal", start, line, col);
                char esc = peek();
                switch (esc) {
                    case 'n': value.push_back('\n'); break;
                    case 't': value.push_back('\t'); break;
                    case '\\': value.push_back('\\'); break;
                    case '"': value.push_back('"'); break;
                    default: fail("unknown escape sequence", start, line, col);
                }
                advance();
                continue;
            }
            value.push_back(ch);
            advance();
        }
    }

    TokenKind punctuation(std::size_t start, int line, int col) {
        const char c = peek();
        const char n = peek(1);
        auto one = [&](TokenKind k) {
            advance();
            return k;
        };
        auto two = [&](TokenKind k) {
            advance();
            advance();
            return k;
        };
        switch (c) {
            case '{': return one(TokenKind::LBrace);
            case '}': return one(TokenKind::RBrace);
            case '(': return one(TokenKind::LParen);
            case ')': return one(TokenKind::RParen);
            case ',': return one(TokenKind::Comma);
            case ';': return one(TokenKind::Semicolon);
            case '=': return one(TokenKind::Equal);
            case '+': return one(TokenKind::Plus);
            case '-': return one(TokenKind::Minus);
            case '!':
                if (n == '=') return two(TokenKind::NotEqual);
                break;
            case '<': return n == '=' ? two(TokenKind::LessEqual) : one(TokenKind::Less);
            case '>': return n == '=' ? two(TokenKind::GreaterEqual) : one(TokenKind::Greater);
            default: break;
        }
        advance();
        std::string shown = (static_cast<unsigned char>(c) < 0x80 && std::isprint(static_cast<unsigned char>(c)))
                                ? std::string(1, c)
                                : "byte " + std::to_string(static_cast<unsigned char>(c));
        fail("unexpected character '" + shown + "'", start, line, col);
    }

    std::string_view src_;
    std::string file_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

}  // namespace

std::vector<Token> tokenize(std::string_view source, const std::string& file) {
    return Lexer(source, file).run();
}

std::string_view namespace_prefix(RefNamespace ns) {
    switch (ns) {
        case RefNamespace::Events: return "EVENTS";
        case RefNamespace::Actions: return "ACTIONS";
        case RefNamespace::Metrics: return "METRICS";
        case RefNamespace::Fluents: return "FLUENTS";
        case RefNamespace::Messages: return "AEIP.MESSAGES";
        case RefNamespace::Channels: return "CHANNELS";
    }
    return "?";
}

std::string quote_text(std::string_view raw) {
    std::string out = "\"";
    for (char c : raw) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out.push_back(c);
        }
    }
    out.push_back('"');
    return out;
}

std::string token_spelling(const Token& token) {
    switch (token.kind) {
        case TokenKind::Reference:
            return std::string(namespace_prefix(token.ns)) + "." + token.text;
        case TokenKind::String:
            return quote_text(token.text);
        default:
            return token.text;
    }
}

std::string_view token_kind_name(TokenKind kind) {
    switch (kind) {
        case TokenKind::Identifier: return "identifier";
        case TokenKind::Reference: return "reference";
        case TokenKind::Integer: return "integer";
        case TokenKind::Real: return "real";
        case TokenKind::String: return "string";
        case TokenKind::True: return "true";
        case TokenKind::False: return "false";
        case TokenKind::LBrace: return "'{'";
        case TokenKind::RBrace: return "'}'";
        case TokenKind::LParen: return "'('";
        case TokenKind::RParen: return "')'";
        case TokenKind::Comma: return "','";
        case TokenKind::Semicolon: return "';'";
        case TokenKind::Equal: return "'='";
        case TokenKind::NotEqual: return "'!='";
        case TokenKind::Less: return "'<'";
        case TokenKind::LessEqual: return "'<='";
        case TokenKind::Greater: return "'>'";
        case TokenKind::GreaterEqual: return "'>='";
        case TokenKind::Plus: return "'+'";
        case TokenKind::Minus: return "'-'";
        case TokenKind::KwAs: return "AS";
        case TokenKind::KwAsip: return "ASIP";
        case TokenKind::KwAe: return "AE";
        case TokenKind::KwAeip: return "AEIP";
        case TokenKind::KwSlo: return "SLO";
        case TokenKind::KwArchitecture: return "ARCHITECTURE";
        case TokenKind::KwFriends: return "FRIENDS";
        case TokenKind::KwRecoveryProtocol: return "RECOVERY_PROTOCOL";
        case TokenKind::KwBehaviorModels: return "BEHAVIOR_MODELS";
        case TokenKind::KwOutcomes: return "OUTCOMES";
        case TokenKind::KwMessage: return "MESSAGE";
        case TokenKind::KwSender: return "SENDER";
        case TokenKind::KwReceiver: return "RECEIVER";
        case TokenKind::KwChannel: return "CHANNEL";
        case TokenKind::KwCapacity: return "CAPACITY";
        case TokenKind::KwFunction: return "FUNCTION";
        case TokenKind::KwManagedElement: return "MANAGED_ELEMENT";
        case TokenKind::KwPolicy: return "policy name";
        case TokenKind::KwFluent: return "FLUENT";
        case TokenKind::KwInitiatedBy: return "INITIATED_BY";
        case TokenKind::KwTerminatedBy: return "TERMINATED_BY";
        case TokenKind::KwMapping: return "MAPPING";
        case TokenKind::KwConditions: return "CONDITIONS";
        case TokenKind::KwDoActions: return "DO_ACTIONS";
        case TokenKind::KwEvent: return "EVENT";
        case TokenKind::KwInjectable: return "INJECTABLE";
        case TokenKind::KwGuards: return "GUARDS";
        case TokenKind::KwActivation: return "ACTIVATION";
        case TokenKind::KwSent: return "SENT";
        case TokenKind::KwReceived: return "RECEIVED";
        case TokenKind::KwChanged: return "CHANGED";
        case TokenKind::KwElapsed: return "ELAPSED";
        case TokenKind::KwAction: return "ACTION";
        case TokenKind::KwEnsures: return "ENSURES";
        case TokenKind::KwDoes: return "DOES";
        case TokenKind::KwOnerrDoes: return "ONERR_DOES";
        case TokenKind::KwTriggers: return "TRIGGERS";
        case TokenKind::KwOnerrTriggers: return "ONERR_TRIGGERS";
        case TokenKind::KwCall: return "call";
        case TokenKind::KwSend: return "send";
        case TokenKind::KwFail: return "fail";
        case TokenKind::KwMetric: return "METRIC";
        case TokenKind::KwType: return "TYPE";
        case TokenKind::KwInitial: return "INITIAL";
        case TokenKind::KwNot: return "NOT";
        case TokenKind::KwAnd: return "AND";
        case TokenKind::KwOr: return "OR";
    }
    return "token";
}

}  // namespace asslkit::syntax
