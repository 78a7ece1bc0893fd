#include "asslkit/syntax/parser.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace asslkit::syntax {
namespace {

// Unwinds to the top-level loop after a syntax error has been recorded.
struct Abort {};

class Parser {
public:
    Parser(std::span<const Token> tokens, std::string file) : toks_(tokens), file_(std::move(file)) {}

    ParseOutcome run() {
        SpecificationTree tree;
        bool have_as = false;
        bool have_asip = false;

        while (!at_end()) {
            const std::size_t block_start = pos_;
            try {
                const Token& t = peek();
                switch (t.kind) {
                    case TokenKind::KwAs: {
                        Tier tier = parse_tier(TierKind::System);
                        if (have_as) error_at(tier.span, "duplicate AS tier");
                        tree.as_tier = std::move(tier);
                        have_as = true;
                        break;
                    }
                    case TokenKind::KwAsip: {
                        const SourceSpan span = peek().span;
                        advance();
                        InteractionProtocol asip = parse_protocol(span, false);
                        if (have_asip) error_at(span, "duplicate ASIP tier");
                        tree.asip = std::move(asip);
                        have_asip = true;
                        break;
                    }
                    case TokenKind::KwAe:
                        tree.ae_tiers.push_back(parse_tier(TierKind::Element));
                        break;
                    default:
                        error_expected("AS, ASIP or AE tier");
                }
            } catch (const Abort&) {
                synchronize(block_start);
            }
        }
        if (!have_as && errors_.empty()) {
            SourceSpan span{file_, 1, 1, 0};
            if (!toks_.empty()) span = toks_.back().span;
            errors_.push_back({Severity::Error, "E-PARSE", "specification has no AS tier", span});
        }

        ParseOutcome out;
        out.errors = std::move(errors_);
        if (out.errors.empty()) out.tree = std::move(tree);
        return out;
    }

private:
    // ---- token cursor -------------------------------------------------------

    bool at_end() const { return pos_ >= toks_.size(); }

    const Token& peek(std::size_t ahead = 0) const {
        static const Token eof{};
        return pos_ + ahead < toks_.size() ? toks_[pos_ + ahead] : eof;
    }

    bool check(TokenKind k, std::size_t ahead = 0) const {
        return pos_ + ahead < toks_.size() && toks_[pos_ + ahead].kind == k;
    }

    const Token& advance() { return toks_[pos_++]; }

    bool match(TokenKind k) {
        if (!check(k)) return false;
        ++pos_;
        return true;
    }

    const Token& expect(TokenKind k) {
        if (!check(k)) error_expected(std::string(token_kind_name(k)));
        return advance();
    }

    SourceSpan here() const {
        if (!at_end()) return peek().span;
        if (!toks_.empty()) {
            SourceSpan s = toks_.back().span;
            s.column += s.length;
            s.length = 0;
            return s;
        }
        return SourceSpan{file_, 1, 1, 0};
    }

    [[noreturn]] void error_expected(const std::string& what) {
        std::string found = at_end() ? "end of input" : "'" + token_spelling(peek()) + "'";
        errors_.push_back({Severity::Error, "E-PARSE", "expected " + what + ", found " + found, here()});
        throw Abort{};
    }

    void error_at(const SourceSpan& span, const std::string& message) {
        errors_.push_back({Severity::Error, "E-PARSE", message, span});
    }

    /// Skips the remainder of the top-level block that started at `block_start`.
    void synchronize(std::size_t block_start) {
        std::size_t i = block_start;
        while (i < toks_.size() && toks_[i].kind != TokenKind::LBrace) {
            if (i > block_start && is_top_level(toks_[i].kind)) {
                pos_ = i;
                return;
            }
            ++i;
        }
        int depth = 0;
        for (; i < toks_.size(); ++i) {
            if (toks_[i].kind == TokenKind::LBrace) ++depth;
            if (toks_[i].kind == TokenKind::RBrace && --depth == 0) {
                pos_ = std::max(i + 1, block_start + 1);
                return;
            }
        }
        // Unbalanced braces: resume at the next top-level keyword after the error.
        for (i = std::max(pos_, block_start + 1); i < toks_.size(); ++i) {
            if (is_top_level(toks_[i].kind)) break;
        }
        pos_ = i;
    }

    static bool is_top_level(TokenKind k) {
        return k == TokenKind::KwAs || k == TokenKind::KwAsip || k == TokenKind::KwAe;
    }

    std::string expect_ident() { return expect(TokenKind::Identifier).text; }

    // ---- tiers --------------------------------------------------------------

    Tier parse_tier(TierKind kind) {
        Tier tier;
        tier.kind = kind;
        tier.span = advance().span;
        tier.name = expect_ident();
        expect(TokenKind::LBrace);
        const bool element = kind == TierKind::Element;
        while (!match(TokenKind::RBrace)) {
            if (at_end()) error_expected("'}' closing tier " + tier.name);
            const Token& t = peek();
            switch (t.kind) {
                case TokenKind::KwPolicy: tier.policies.push_back(parse_policy()); break;
                case TokenKind::KwEvent: tier.events.push_back(parse_event()); break;
                case TokenKind::KwAction: tier.actions.push_back(parse_action()); break;
                case TokenKind::KwMetric: tier.metrics.push_back(parse_metric()); break;
                case TokenKind::KwSlo: tier.slos.push_back(parse_opaque()); break;
                case TokenKind::KwArchitecture:
                    if (element) error_expected("AE sub-tier (ARCHITECTURE is AS-only)");
                    if (tier.architecture) error_at(t.span, "duplicate ARCHITECTURE block");
                    tier.architecture = parse_opaque();
                    break;
                case TokenKind::KwFriends:
                    if (!element) error_expected("AS sub-tier (FRIENDS is AE-only)");
                    parse_friends(tier.friends);
                    break;
                case TokenKind::KwAeip: {
                    if (!element) error_expected("AS sub-tier (AEIP is AE-only)");
                    const SourceSpan span = advance().span;
                    if (tier.aeip) error_at(span, "duplicate AEIP block");
                    tier.aeip = parse_protocol(span, true);
                    break;
                }
                case TokenKind::KwRecoveryProtocol:
                case TokenKind::KwBehaviorModels:
                case TokenKind::KwOutcomes: {
                    if (!element) error_expected("AS sub-tier (" + t.text + " is AE-only)");
                    auto& dest = t.kind == TokenKind::KwRecoveryProtocol ? tier.recovery_protocol
                                 : t.kind == TokenKind::KwBehaviorModels ? tier.behavior_models
                                                                          : tier.outcomes;
                    dest.push_back(parse_opaque());
                    break;
                }
                default: error_expected("tier member");
            }
        }
        return tier;
    }

    void parse_friends(std::vector<Name>& out) {
        advance();
        expect(TokenKind::LBrace);
        if (!check(TokenKind::RBrace)) {
            do {
                const Token& t = expect(TokenKind::Identifier);
                out.push_back(Name{t.text, t.span});
            } while (match(TokenKind::Comma));
        }
        expect(TokenKind::RBrace);
    }

    InteractionProtocol parse_protocol(const SourceSpan& span, bool element) {
        InteractionProtocol p;
        p.span = span;
        expect(TokenKind::LBrace);
        while (!match(TokenKind::RBrace)) {
            switch (peek().kind) {
                case TokenKind::KwMessage: {
                    MessageDecl m;
                    m.span = advance().span;
                    m.name = expect_ident();
                    expect(TokenKind::LBrace);
                    expect(TokenKind::KwSender);
                    const Token& s = expect(TokenKind::Identifier);
                    m.sender = Name{s.text, s.span};
                    expect(TokenKind::Semicolon);
                    expect(TokenKind::KwReceiver);
                    const Token& r = expect(TokenKind::Identifier);
                    m.receiver = Name{r.text, r.span};
                    expect(TokenKind::Semicolon);
                    expect(TokenKind::RBrace);
                    p.messages.push_back(std::move(m));
                    break;
                }
                case TokenKind::KwChannel: {
                    ChannelDecl c;
                    c.span = advance().span;
                    c.name = expect_ident();
                    expect(TokenKind::LBrace);
                    expect(TokenKind::KwCapacity);
                    c.capacity = parse_int_literal();
                    expect(TokenKind::Semicolon);
                    expect(TokenKind::RBrace);
                    p.channels.push_back(std::move(c));
                    break;
                }
                case TokenKind::KwFunction: p.functions.push_back(parse_opaque()); break;
                case TokenKind::KwManagedElement:
                    if (!element) error_expected("ASIP member (MANAGED_ELEMENT is AEIP-only)");
                    p.managed_elements.push_back(parse_opaque());
                    break;
                default: error_expected("MESSAGE, CHANNEL or FUNCTION");
            }
        }
        return p;
    }

    /// `KEYWORD name? { balanced tokens }`
    OpaqueBlock parse_opaque() {
        OpaqueBlock b;
        const Token& kw = advance();
        b.keyword = std::string(token_kind_name(kw.kind));
        b.span = kw.span;
        if (check(TokenKind::Identifier)) b.name = advance().text;
        expect(TokenKind::LBrace);
        int depth = 1;
        std::string body;
        while (true) {
            if (at_end()) error_expected("'}' closing " + b.keyword);
            const Token& t = advance();
            if (t.kind == TokenKind::LBrace) ++depth;
            if (t.kind == TokenKind::RBrace && --depth == 0) break;
            if (!body.empty()) body.push_back(' ');
            body += token_spelling(t);
        }
        b.body = std::move(body);
        return b;
    }

    // ---- policies -----------------------------------------------------------

    PolicyDecl parse_policy() {
        PolicyDecl p;
        const Token& kw = advance();
        p.name = kw.text;
        p.span = kw.span;
        expect(TokenKind::LBrace);
        while (!match(TokenKind::RBrace)) {
            if (check(TokenKind::KwFluent)) {
                p.fluents.push_back(parse_fluent());
            } else if (check(TokenKind::KwMapping)) {
                p.mappings.push_back(parse_mapping());
            } else {
                error_expected("FLUENT or MAPPING");
            }
        }
        return p;
    }

    FluentDecl parse_fluent() {
        FluentDecl f;
        f.span = advance().span;
        f.name = expect_ident();
        expect(TokenKind::LBrace);
        expect(TokenKind::KwInitiatedBy);
        f.initiated_by = parse_ref_block(RefNamespace::Events, false, false);
        expect(TokenKind::KwTerminatedBy);
        f.terminated_by = parse_ref_block(RefNamespace::Events, false, false);
        expect(TokenKind::RBrace);
        return f;
    }

    MappingDecl parse_mapping() {
        MappingDecl m;
        m.span = advance().span;
        expect(TokenKind::LBrace);
        expect(TokenKind::KwConditions);
        m.conditions = parse_ref_block(RefNamespace::Fluents, true, false);
        expect(TokenKind::KwDoActions);
        m.do_actions = parse_ref_block(RefNamespace::Actions, false, false);
        expect(TokenKind::RBrace);
        return m;
    }

    /// `{ ref, ref, ... }`; `allow_bare` admits plain identifiers (fluent names).
    std::vector<Reference> parse_ref_block(RefNamespace ns, bool allow_bare, bool allow_empty) {
        std::vector<Reference> refs;
        expect(TokenKind::LBrace);
        if (allow_empty && match(TokenKind::RBrace)) return refs;
        do {
            refs.push_back(parse_ref(ns, allow_bare));
        } while (match(TokenKind::Comma));
        expect(TokenKind::RBrace);
        return refs;
    }

    Reference parse_ref(RefNamespace ns, bool allow_bare) {
        const std::string what = std::string(namespace_prefix(ns)) + ".<name>";
        if (allow_bare && check(TokenKind::Identifier)) {
            const Token& t = advance();
            return Reference{ns, t.text, false, t.span};
        }
        if (!check(TokenKind::Reference) || peek().ns != ns) error_expected(what);
        const Token& t = advance();
        return Reference{ns, t.text, true, t.span};
    }

    // ---- events -------------------------------------------------------------

    EventDecl parse_event() {
        EventDecl e;
        e.span = advance().span;
        e.name = expect_ident();
        expect(TokenKind::LBrace);
        bool seen_activation = false;
        while (!match(TokenKind::RBrace)) {
            const SourceSpan span = peek().span;
            if (match(TokenKind::KwInjectable)) {
                if (e.injectable) error_at(span, "duplicate INJECTABLE flag");
                e.injectable = true;
                expect(TokenKind::Semicolon);
            } else if (match(TokenKind::KwGuards)) {
                if (e.guard) error_at(span, "duplicate GUARDS clause");
                e.guard = parse_braced_expr();
            } else if (match(TokenKind::KwActivation)) {
                if (seen_activation) error_at(span, "duplicate ACTIVATION clause");
                seen_activation = true;
                expect(TokenKind::LBrace);
                do {
                    e.activation.push_back(parse_activation());
                } while (match(TokenKind::Comma));
                expect(TokenKind::RBrace);
            } else {
                error_expected("INJECTABLE, GUARDS or ACTIVATION");
            }
        }
        return e;
    }

    ActivationClause parse_activation() {
        ActivationClause c;
        c.span = peek().span;
        if (match(TokenKind::KwSent) || match(TokenKind::KwReceived)) {
            c.kind = toks_[pos_ - 1].kind == TokenKind::KwSent ? ActivationClause::Kind::Sent
                                                                : ActivationClause::Kind::Received;
            expect(TokenKind::LBrace);
            c.ref = parse_ref(RefNamespace::Messages, false);
            expect(TokenKind::RBrace);
        } else if (match(TokenKind::KwChanged)) {
            c.kind = ActivationClause::Kind::Changed;
            expect(TokenKind::LBrace);
            c.ref = parse_ref(RefNamespace::Metrics, false);
            expect(TokenKind::RBrace);
        } else if (match(TokenKind::KwElapsed)) {
            c.kind = ActivationClause::Kind::Elapsed;
            expect(TokenKind::LBrace);
            c.ticks = parse_int_literal();
            expect(TokenKind::RBrace);
        } else {
            error_expected("SENT, RECEIVED, CHANGED or ELAPSED");
        }
        return c;
    }

    // ---- actions ------------------------------------------------------------

    ActionDecl parse_action() {
        ActionDecl a;
        a.span = advance().span;
        a.name = expect_ident();
        expect(TokenKind::LBrace);
        bool seen[6] = {};
        auto once = [&](int slot, const SourceSpan& span, const char* clause) {
            if (seen[slot]) error_at(span, std::string("duplicate ") + clause + " clause");
            seen[slot] = true;
        };
        while (!match(TokenKind::RBrace)) {
            const SourceSpan span = peek().span;
            switch (peek().kind) {
                case TokenKind::KwGuards:
                    advance();
                    once(0, span, "GUARDS");
                    a.guard = parse_braced_expr();
                    break;
                case TokenKind::KwEnsures:
                    advance();
                    once(1, span, "ENSURES");
                    a.ensures = parse_braced_expr();
                    break;
                case TokenKind::KwDoes:
                    advance();
                    once(2, span, "DOES");
                    a.does = parse_statements();
                    if (a.does.empty()) error_at(span, "DOES block of action " + a.name + " is empty");
                    break;
                case TokenKind::KwOnerrDoes:
                    advance();
                    once(3, span, "ONERR_DOES");
                    a.onerr_does = parse_statements();
                    break;
                case TokenKind::KwTriggers:
                    advance();
                    once(4, span, "TRIGGERS");
                    a.triggers = parse_ref_block(RefNamespace::Events, false, true);
                    break;
                case TokenKind::KwOnerrTriggers:
                    advance();
                    once(5, span, "ONERR_TRIGGERS");
                    a.onerr_triggers = parse_ref_block(RefNamespace::Events, false, true);
                    break;
                default: error_expected("action clause");
            }
        }
        if (!seen[2]) error_at(a.span, "action " + a.name + " has no DOES block");
        return a;
    }

    std::vector<Statement> parse_statements() {
        std::vector<Statement> out;
        expect(TokenKind::LBrace);
        while (!match(TokenKind::RBrace)) {
            out.push_back(parse_statement());
        }
        return out;
    }

    Statement parse_statement() {
        const SourceSpan span = peek().span;
        if (check(TokenKind::Identifier) && check(TokenKind::Equal, 1)) {
            CallStmt c;
            c.span = span;
            c.binding = advance().text;
            advance();
            expect(TokenKind::KwCall);
            c.action = parse_ref(RefNamespace::Actions, false);
            expect(TokenKind::Semicolon);
            return c;
        }
        if (match(TokenKind::KwCall)) {
            CallStmt c;
            c.span = span;
            c.action = parse_ref(RefNamespace::Actions, false);
            expect(TokenKind::Semicolon);
            return c;
        }
        if (check(TokenKind::Reference) && peek().ns == RefNamespace::Metrics) {
            AssignStmt s;
            s.span = span;
            s.metric = parse_ref(RefNamespace::Metrics, false);
            expect(TokenKind::Equal);
            s.value = parse_expr();
            expect(TokenKind::Semicolon);
            return s;
        }
        if (match(TokenKind::KwSend)) {
            SendStmt s;
            s.span = span;
            s.message = parse_ref(RefNamespace::Messages, false);
            s.channel = parse_ref(RefNamespace::Channels, false);
            expect(TokenKind::Semicolon);
            return s;
        }
        if (match(TokenKind::KwFail)) {
            FailStmt f;
            f.span = span;
            f.reason = expect(TokenKind::String).text;
            expect(TokenKind::Semicolon);
            return f;
        }
        error_expected("statement");
    }

    // ---- metrics ------------------------------------------------------------

    MetricDecl parse_metric() {
        MetricDecl m;
        m.span = advance().span;
        m.name = expect_ident();
        expect(TokenKind::LBrace);
        expect(TokenKind::KwType);
        if (!check(TokenKind::Identifier) || !parse_type_name(peek().text, m.type)) {
            error_expected("boolean, integer, real or text");
        }
        advance();
        expect(TokenKind::Semicolon);
        expect(TokenKind::KwInitial);
        m.initial = parse_literal_value();
        expect(TokenKind::Semicolon);
        expect(TokenKind::RBrace);
        return m;
    }

    std::int64_t parse_int_literal() {
        bool negative = match(TokenKind::Minus);
        const Token& t = expect(TokenKind::Integer);
        std::int64_t v = to_int(t);
        return negative ? -v : v;
    }

    std::int64_t to_int(const Token& t) {
        std::int64_t v = 0;
        auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc{} || ptr != t.text.data() + t.text.size()) {
            error_at(t.span, "integer literal out of range");
            throw Abort{};
        }
        return v;
    }

    double to_real(const Token& t) {
        double v = 0;
        auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc{} || ptr != t.text.data() + t.text.size()) {
            error_at(t.span, "real literal out of range");
            throw Abort{};
        }
        return v;
    }

    Value parse_literal_value() {
        const bool negative = match(TokenKind::Minus);
        if (check(TokenKind::Integer)) {
            std::int64_t v = to_int(advance());
            return negative ? -v : v;
        }
        if (check(TokenKind::Real)) {
            double v = to_real(advance());
            return negative ? -v : v;
        }
        if (negative) error_expected("numeric literal");
        if (match(TokenKind::True)) return true;
        if (match(TokenKind::False)) return false;
        if (check(TokenKind::String)) return advance().text;
        error_expected("literal");
    }

    // ---- expressions --------------------------------------------------------
    // or := and (OR and)*; and := not (AND not)*; not := NOT not | cmp;
    // cmp := sum (op sum)?; sum := unary ((+|-) unary)*; unary := - unary | primary

    Expr parse_braced_expr() {
        expect(TokenKind::LBrace);
        Expr e = parse_expr();
        expect(TokenKind::RBrace);
        return e;
    }

    Expr parse_expr() { return parse_or(); }

    static Expr binary(Expr::Kind kind, Expr lhs, Expr rhs, SourceSpan span) {
        Expr e;
        e.kind = kind;
        e.span = std::move(span);
        e.operands.push_back(std::move(lhs));
        e.operands.push_back(std::move(rhs));
        return e;
    }

    Expr parse_or() {
        Expr lhs = parse_and();
        while (check(TokenKind::KwOr)) {
            SourceSpan span = advance().span;
            lhs = binary(Expr::Kind::Or, std::move(lhs), parse_and(), span);
        }
        return lhs;
    }

    Expr parse_and() {
        Expr lhs = parse_not();
        while (check(TokenKind::KwAnd)) {
            SourceSpan span = advance().span;
            lhs = binary(Expr::Kind::And, std::move(lhs), parse_not(), span);
        }
        return lhs;
    }

    Expr parse_not() {
        if (check(TokenKind::KwNot)) {
            Expr e;
            e.kind = Expr::Kind::Not;
            e.span = advance().span;
            e.operands.push_back(parse_not());
            return e;
        }
        return parse_compare();
    }

    Expr parse_compare() {
        Expr lhs = parse_sum();
        CompareOp op;
        switch (peek().kind) {
            case TokenKind::Equal: op = CompareOp::Eq; break;
            case TokenKind::NotEqual: op = CompareOp::Ne; break;
            case TokenKind::Less: op = CompareOp::Lt; break;
            case TokenKind::LessEqual: op = CompareOp::Le; break;
            case TokenKind::Greater: op = CompareOp::Gt; break;
            case TokenKind::GreaterEqual: op = CompareOp::Ge; break;
            default: return lhs;
        }
        SourceSpan span = advance().span;
        Expr e = binary(Expr::Kind::Compare, std::move(lhs), parse_sum(), span);
        e.op = op;
        return e;
    }

    Expr parse_sum() {
        Expr lhs = parse_unary();
        while (check(TokenKind::Plus) || check(TokenKind::Minus)) {
            const Token& t = advance();
            auto kind = t.kind == TokenKind::Plus ? Expr::Kind::Add : Expr::Kind::Sub;
            lhs = binary(kind, std::move(lhs), parse_unary(), t.span);
        }
        return lhs;
    }

    Expr parse_unary() {
        if (check(TokenKind::Minus)) {
            SourceSpan span = advance().span;
            // A minus directly before a numeric literal folds into the literal.
            if (check(TokenKind::Integer) || check(TokenKind::Real)) {
                const Token& t = advance();
                Expr e;
                e.kind = Expr::Kind::Literal;
                e.span = span;
                if (t.kind == TokenKind::Integer) {
                    e.literal = -to_int(t);
                } else {
                    e.literal = -to_real(t);
                }
                return e;
            }
            Expr e;
            e.kind = Expr::Kind::Neg;
            e.span = span;
            e.operands.push_back(parse_unary());
            return e;
        }
        return parse_primary();
    }

    Expr parse_primary() {
        if (at_end()) error_expected("expression");
        Expr e;
        e.span = peek().span;
        switch (peek().kind) {
            case TokenKind::LParen: {
                advance();
                Expr inner = parse_expr();
                expect(TokenKind::RParen);
                return inner;
            }
            case TokenKind::Integer:
            case TokenKind::Real:
            case TokenKind::True:
            case TokenKind::False:
            case TokenKind::String:
                e.kind = Expr::Kind::Literal;
                e.literal = parse_literal_value();
                return e;
            case TokenKind::Reference:
                if (peek().ns == RefNamespace::Metrics) {
                    e.kind = Expr::Kind::Metric;
                    e.ref = parse_ref(RefNamespace::Metrics, false);
                    return e;
                }
                if (peek().ns == RefNamespace::Fluents) {
                    e.kind = Expr::Kind::Fluent;
                    e.ref = parse_ref(RefNamespace::Fluents, false);
                    return e;
                }
                break;
            case TokenKind::Identifier:
                e.kind = Expr::Kind::Local;
                e.local = advance().text;
                return e;
            default: break;
        }
        error_expected("expression");
    }

    std::span<const Token> toks_;
    std::string file_;
    std::size_t pos_ = 0;
    std::vector<Diagnostic> errors_;
};

}  // namespace

ParseOutcome parse(std::span<const Token> tokens, const std::string& file) {
    return Parser(tokens, file).run();
}

ParseOutcome parse_source(std::string_view source, const std::string& file) {
    std::vector<Token> tokens;
    try {
        tokens = tokenize(source, file);
    } catch (const LexError& e) {
        ParseOutcome out;
        out.errors.push_back({Severity::Error, "E-LEX", e.what(), e.span()});
        return out;
    }
    return parse(tokens, file);
}

ParseOutcome parse_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_source(buf.str(), path);
}

}  // namespace asslkit::syntax
