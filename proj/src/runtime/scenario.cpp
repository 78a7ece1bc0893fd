#include "asslkit/runtime/scenario.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "asslkit/syntax/lexer.hpp"

namespace asslkit::runtime {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

/// Splits off the first whitespace-delimited word.
std::string_view next_word(std::string_view& rest) {
    rest = trim(rest);
    std::size_t end = rest.find_first_of(" \t");
    std::string_view word = rest.substr(0, end);
    rest = end == std::string_view::npos ? std::string_view{} : trim(rest.substr(end));
    return word;
}

template <typename T>
bool parse_number(std::string_view text, T& out) {
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size();
}

class Binder {
public:
    Binder(const Model& model, int line) : model_(model), line_(line) {}

    [[noreturn]] void fail(const std::string& message) const { throw ScenarioError(line_, message); }

    /// Resolves `tier.name` or a bare name unique across tiers.
    template <typename Get>
    std::pair<std::size_t, std::size_t> tier_member(std::string_view text, const char* what, Get members) const {
        std::vector<std::pair<std::size_t, std::size_t>> found;
        const auto dot = text.find('.');
        for (std::size_t t = 0; t < model_.tiers.size(); ++t) {
            std::string_view name = text;
            if (dot != std::string_view::npos) {
                if (text.substr(0, dot) != model_.tiers[t].name) continue;
                name = text.substr(dot + 1);
            }
            const auto& list = members(model_.tiers[t]);
            for (std::size_t i = 0; i < list.size(); ++i) {
                if (list[i].name == name) found.emplace_back(t, i);
            }
        }
        if (found.empty()) fail(std::string("unknown ") + what + " '" + std::string(text) + "'");
        if (found.size() > 1) fail(std::string("ambiguous ") + what + " '" + std::string(text) + "'; qualify it as tier.name");
        return found.front();
    }

    template <typename List>
    std::size_t global(std::string_view text, const char* what, const List& list) const {
        std::vector<std::size_t> found;
        for (std::size_t i = 0; i < list.size(); ++i) {
            if (list[i].qualified == text || list[i].name == text) found.push_back(i);
        }
        if (found.empty()) fail(std::string("unknown ") + what + " '" + std::string(text) + "'");
        if (found.size() > 1) fail(std::string("ambiguous ") + what + " '" + std::string(text) + "'");
        return found.front();
    }

    Value value(std::string_view text, ValueType type) const {
        std::vector<syntax::Token> toks;
        try {
            toks = syntax::tokenize(text);
        } catch (const syntax::LexError& e) {
            fail(std::string("bad value: ") + e.what());
        }
        using syntax::TokenKind;
        bool negative = false;
        std::size_t i = 0;
        if (i < toks.size() && toks[i].kind == TokenKind::Minus) {
            negative = true;
            ++i;
        }
        if (i + 1 != toks.size()) fail("expected one literal value, found '" + std::string(text) + "'");
        const auto& tok = toks[i];
        Value v;
        if (tok.kind == TokenKind::Integer) {
            std::int64_t n = 0;
            if (!parse_number(tok.text, n)) fail("integer out of range");
            v = negative ? -n : n;
        } else if (tok.kind == TokenKind::Real) {
            double d = 0;
            if (!parse_number(tok.text, d)) fail("real out of range");
            v = negative ? -d : d;
        } else if (!negative && (tok.kind == TokenKind::True || tok.kind == TokenKind::False)) {
            v = tok.kind == TokenKind::True;
        } else if (!negative && tok.kind == TokenKind::String) {
            v = tok.text;
        } else {
            fail("expected a literal value, found '" + std::string(text) + "'");
        }
        if (type == ValueType::Real && syntax::type_of(v) == ValueType::Integer) {
            v = static_cast<double>(std::get<std::int64_t>(v));
        }
        if (syntax::type_of(v) != type) {
            fail("value " + syntax::render_value(v) + " does not match metric type " +
                 std::string(syntax::type_name(type)));
        }
        return v;
    }

private:
    const Model& model_;
    int line_;
};

}  // namespace

std::string describe_stimulus(const Model& model, const Stimulus& s) {
    switch (s.kind) {
        case Stimulus::Kind::Inject: return "inject " + model.event_name({s.tier, s.target});
        case Stimulus::Kind::Set:
            return "set " + model.qualified(s.tier, model.tiers[s.tier].metrics[s.target].name) + " " +
                   syntax::render_value(s.value);
        case Stimulus::Kind::Send:
            return "send " + model.messages[s.target].qualified + " " + model.channels[s.channel].qualified;
        case Stimulus::Kind::Halt: return "halt";
    }
    return {};
}

Scenario parse_scenario(const Model& model, std::string_view text) {
    Scenario sc;
    int line_no = 0;
    std::int64_t last_tick = 0;
    while (!text.empty()) {
        std::size_t nl = text.find('\n');
        std::string_view line = trim(text.substr(0, nl));
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (line.empty() || line.front() == '#') continue;

        Binder bind(model, line_no);
        std::string_view rest = line;
        std::string_view head = next_word(rest);
        if (head == "name") {
            sc.name = std::string(rest);
            continue;
        }
        if (head == "seed") {
            std::uint64_t seed = 0;
            if (!parse_number(rest, seed)) bind.fail("seed needs a non-negative integer");
            sc.seed = seed;
            continue;
        }
        if (head != "tick") bind.fail("expected 'tick', 'seed' or 'name', found '" + std::string(head) + "'");

        ScenarioStep step;
        if (!parse_number(next_word(rest), step.tick) || step.tick < 0) bind.fail("tick needs a non-negative integer");
        if (step.tick < last_tick) bind.fail("ticks must be non-decreasing");
        last_tick = step.tick;

        std::string_view verb = next_word(rest);
        Stimulus& s = step.stimulus;
        if (verb == "inject") {
            s.kind = Stimulus::Kind::Inject;
            std::tie(s.tier, s.target) =
                bind.tier_member(next_word(rest), "event", [](const TierModel& t) -> const auto& { return t.events; });
        } else if (verb == "set") {
            s.kind = Stimulus::Kind::Set;
            std::tie(s.tier, s.target) = bind.tier_member(next_word(rest), "metric",
                                                          [](const TierModel& t) -> const auto& { return t.metrics; });
            s.value = bind.value(rest, model.tiers[s.tier].metrics[s.target].type);
            rest = {};
        } else if (verb == "send") {
            s.kind = Stimulus::Kind::Send;
            s.target = bind.global(next_word(rest), "message", model.messages);
            s.channel = bind.global(next_word(rest), "channel", model.channels);
            s.tier = model.messages[s.target].sender;
        } else if (verb == "halt") {
            s.kind = Stimulus::Kind::Halt;
        } else {
            bind.fail("expected inject, set, send or halt, found '" + std::string(verb) + "'");
        }
        if (!rest.empty()) bind.fail("unexpected trailing text '" + std::string(rest) + "'");
        sc.steps.push_back(std::move(step));
    }
    return sc;
}

Scenario load_scenario(const Model& model, const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(model, buf.str());
}

std::string write_scenario(const Model& model, const Scenario& scenario) {
    std::string out;
    if (!scenario.name.empty()) out += "name " + scenario.name + "\n";
    if (scenario.seed) out += "seed " + std::to_string(*scenario.seed) + "\n";
    for (const auto& step : scenario.steps) {
        out += "tick " + std::to_string(step.tick) + " " + describe_stimulus(model, step.stimulus) + "\n";
    }
    return out;
}

}  // namespace asslkit::runtime
