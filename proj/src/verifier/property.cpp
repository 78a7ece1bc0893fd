#include "asslkit/verifier/property.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace asslkit::verifier {

namespace {

using runtime::Model;

struct Tok {
    enum class Kind { Word, Number, Text, Symbol, End };
    Kind kind = Kind::End;
    std::string text;
};

std::vector<Tok> lex(std::string_view s) {
    std::vector<Tok> out;
    std::size_t i = 0;
    while (i < s.size()) {
        const char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' || s[j] == '.')) ++j;
            out.push_back({Tok::Kind::Word, std::string(s.substr(i, j - i))});
            i = j;
        } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                   (c == '-' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
            std::size_t j = i + 1;
            while (j < s.size() && (std::isdigit(static_cast<unsigned char>(s[j])) || s[j] == '.')) ++j;
            out.push_back({Tok::Kind::Number, std::string(s.substr(i, j - i))});
            i = j;
        } else if (c == '"') {
            std::string text;
            std::size_t j = i + 1;
            while (j < s.size() && s[j] != '"') {
                if (s[j] == '\\' && j + 1 < s.size()) ++j;
                text += s[j++];
            }
            if (j >= s.size()) throw MalformedProperty("unterminated text literal");
            out.push_back({Tok::Kind::Text, text});
            i = j + 1;
        } else {
            static const char* const two[] = {"->", "<=", ">=", "!="};
            bool matched = false;
            for (const char* t : two) {
                if (s.substr(i, 2) == t) {
                    out.push_back({Tok::Kind::Symbol, t});
                    i += 2;
                    matched = true;
                    break;
                }
            }
            if (matched) continue;
            if (std::string_view("()|&!=<>").find(c) == std::string_view::npos) {
                throw MalformedProperty(std::string("unexpected character '") + c + "'");
            }
            out.push_back({Tok::Kind::Symbol, std::string(1, c)});
            ++i;
        }
    }
    out.push_back({Tok::Kind::End, ""});
    return out;
}

/// Formula with temporal operators, before shape classification.
struct Formula {
    enum class Op { State, Not, And, Or, Implies, G, F, X, U };
    Op op = Op::State;
    StateFormula state;
    std::vector<Formula> args;
};

bool is_state(const Formula& f) {
    switch (f.op) {
        case Formula::Op::State: return true;
        case Formula::Op::G:
        case Formula::Op::F:
        case Formula::Op::X:
        case Formula::Op::U: return false;
        default:
            for (const Formula& a : f.args) {
                if (!is_state(a)) return false;
            }
            return true;
    }
}

StateFormula to_state(const Formula& f) {
    if (f.op == Formula::Op::State) return f.state;
    StateFormula out;
    switch (f.op) {
        case Formula::Op::Not: out.kind = StateFormula::Kind::Not; break;
        case Formula::Op::And: out.kind = StateFormula::Kind::And; break;
        case Formula::Op::Or: out.kind = StateFormula::Kind::Or; break;
        case Formula::Op::Implies: out.kind = StateFormula::Kind::Implies; break;
        default: throw MalformedProperty("temporal operator inside a state formula");
    }
    for (const Formula& a : f.args) out.operands.push_back(to_state(a));
    return out;
}

class PropertyParser {
public:
    PropertyParser(const Model& model, std::vector<Tok> toks) : model_(model), toks_(std::move(toks)) {}

    Formula parse_all() {
        Formula f = formula();
        if (peek().kind != Tok::Kind::End) fail("unexpected '" + peek().text + "'");
        return f;
    }

private:
    const Tok& peek() const { return toks_[pos_]; }
    Tok next() { return toks_[pos_ == toks_.size() - 1 ? pos_ : pos_++]; }
    bool accept_symbol(std::string_view s) {
        if (peek().kind == Tok::Kind::Symbol && peek().text == s) {
            ++pos_;
            return true;
        }
        return false;
    }
    bool accept_word(std::string_view s) {
        if (peek().kind == Tok::Kind::Word && peek().text == s) {
            ++pos_;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& msg) { throw MalformedProperty(msg); }

    static Formula node(Formula::Op op, std::vector<Formula> args) {
        Formula f;
        f.op = op;
        f.args = std::move(args);
        return f;
    }

    Formula formula() {
        Formula lhs = until();
        if (accept_symbol("->")) return node(Formula::Op::Implies, {std::move(lhs), formula()});
        return lhs;
    }

    Formula until() {
        Formula lhs = disjunction();
        if (accept_word("U")) return node(Formula::Op::U, {std::move(lhs), disjunction()});
        return lhs;
    }

    Formula disjunction() {
        Formula lhs = conjunction();
        while (accept_symbol("|")) lhs = node(Formula::Op::Or, {std::move(lhs), conjunction()});
        return lhs;
    }

    Formula conjunction() {
        Formula lhs = unary();
        while (accept_symbol("&")) lhs = node(Formula::Op::And, {std::move(lhs), unary()});
        return lhs;
    }

    Formula unary() {
        if (accept_symbol("!") || accept_word("not")) return node(Formula::Op::Not, {unary()});
        if (accept_word("G")) return node(Formula::Op::G, {unary()});
        if (accept_word("F")) return node(Formula::Op::F, {unary()});
        if (accept_word("X")) return node(Formula::Op::X, {unary()});
        if (accept_word("implies")) return binary(Formula::Op::Implies);
        if (accept_word("and")) return binary(Formula::Op::And);
        if (accept_word("or")) return binary(Formula::Op::Or);
        if (accept_word("U")) return binary(Formula::Op::U);
        if (accept_symbol("(")) {
            Formula inner = formula();
            if (!accept_symbol(")")) fail("expected ')'");
            return inner;
        }
        Formula f;
        f.state.atom = atom();
        return f;
    }

    Formula binary(Formula::Op op) {
        Formula a = unary();
        return node(op, {std::move(a), unary()});
    }

    std::pair<std::size_t, std::size_t> resolve(const std::string& kind, const std::string& name,
                                                  std::optional<std::size_t> (*find)(const runtime::TierModel&,
                                                                                     const std::string&)) {
        const auto dot = name.find('.');
        if (dot != std::string::npos) {
            const std::string tier = name.substr(0, dot);
            for (std::size_t t = 0; t < model_.tiers.size(); ++t) {
                if (model_.tiers[t].name != tier) continue;
                if (auto i = find(model_.tiers[t], name.substr(dot + 1))) return {t, *i};
            }
            throw UnresolvedAtom("unknown " + kind + " '" + name + "'");
        }
        std::optional<std::pair<std::size_t, std::size_t>> found;
        for (std::size_t t = 0; t < model_.tiers.size(); ++t) {
            if (auto i = find(model_.tiers[t], name)) {
                if (found) throw UnresolvedAtom("ambiguous " + kind + " '" + name + "'; qualify it with a tier");
                found = {{t, *i}};
            }
        }
        if (!found) throw UnresolvedAtom("unknown " + kind + " '" + name + "'");
        return *found;
    }

    template <typename List>
    static std::optional<std::size_t> find_in(const List& list, const std::string& name) {
        for (std::size_t i = 0; i < list.size(); ++i) {
            if (list[i].name == name) return i;
        }
        return std::nullopt;
    }

    std::string name_after(const std::string& keyword) {
        if (peek().kind != Tok::Kind::Word) fail("expected a name after '" + keyword + "'");
        return next().text;
    }

    Atom atom() {
        Atom a;
        const Tok t = next();
        if (t.kind != Tok::Kind::Word) {
            fail(t.kind == Tok::Kind::End ? "unexpected end of property" : "unexpected '" + t.text + "'");
        }
        if (t.text == "true") return a;
        if (t.text == "false") {
            a.kind = Atom::Kind::False;
            return a;
        }
        if (t.text == "quiescent") {
            a.kind = Atom::Kind::Quiescent;
            return a;
        }
        if (t.text == "fluent") {
            a.kind = Atom::Kind::Fluent;
            std::tie(a.tier, a.index) = resolve("fluent", name_after(t.text), [](const runtime::TierModel& tm,
                                                                                   const std::string& n) {
                return find_in(tm.fluents, n);
            });
            return a;
        }
        if (t.text == "event") {
            a.kind = Atom::Kind::Event;
            std::tie(a.tier, a.index) = resolve("event", name_after(t.text), [](const runtime::TierModel& tm,
                                                                                 const std::string& n) {
                return find_in(tm.events, n);
            });
            return a;
        }
        if (t.text == "metric") {
            a.kind = Atom::Kind::Metric;
            std::tie(a.tier, a.index) = resolve("metric", name_after(t.text), [](const runtime::TierModel& tm,
                                                                                  const std::string& n) {
                return find_in(tm.metrics, n);
            });
            const runtime::ValueType type = model_.tiers[a.tier].metrics[a.index].type;
            static const std::pair<const char*, syntax::CompareOp> ops[] = {
                {"=", syntax::CompareOp::Eq}, {"!=", syntax::CompareOp::Ne}, {"<", syntax::CompareOp::Lt},
                {"<=", syntax::CompareOp::Le}, {">", syntax::CompareOp::Gt}, {">=", syntax::CompareOp::Ge}};
            for (const auto& [spelling, op] : ops) {
                if (accept_symbol(spelling)) {
                    a.op = op;
                    a.literal = literal(type);
                    if (type == runtime::ValueType::Boolean && op != syntax::CompareOp::Eq &&
                        op != syntax::CompareOp::Ne) {
                        fail("boolean metrics only compare with = and !=");
                    }
                    return a;
                }
            }
            if (type != runtime::ValueType::Boolean) fail("metric '" + model_.tiers[a.tier].metrics[a.index].name +
                                                          "' is not boolean; compare it with a literal");
            return a;
        }
        fail("unknown atom '" + t.text + "'");
    }

    Value literal(runtime::ValueType type) {
        const Tok t = next();
        using runtime::ValueType;
        switch (type) {
            case ValueType::Boolean:
                if (t.kind == Tok::Kind::Word && (t.text == "true" || t.text == "false")) return t.text == "true";
                break;
            case ValueType::Integer:
                if (t.kind == Tok::Kind::Number && t.text.find('.') == std::string::npos) {
                    std::int64_t v = 0;
                    auto r = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
                    if (r.ec == std::errc() && r.ptr == t.text.data() + t.text.size()) return v;
                }
                break;
            case ValueType::Real:
                if (t.kind == Tok::Kind::Number) {
                    try {
                        std::size_t used = 0;
                        double v = std::stod(t.text, &used);
                        if (used == t.text.size()) return v;
                    } catch (const std::exception&) {
                    }
                }
                break;
            case ValueType::Text:
                if (t.kind == Tok::Kind::Text) return t.text;
                break;
        }
        fail("expected a " + std::string(syntax::type_name(type)) + " literal, found '" + t.text + "'");
    }

    const Model& model_;
    std::vector<Tok> toks_;
    std::size_t pos_ = 0;
};

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

void thresholds_of(const StateFormula& f, std::vector<std::vector<std::vector<Value>>>& out) {
    if (f.kind == StateFormula::Kind::Atom) {
        if (f.atom.kind == Atom::Kind::Metric && f.atom.op) out[f.atom.tier][f.atom.index].push_back(f.atom.literal);
        return;
    }
    for (const auto& o : f.operands) thresholds_of(o, out);
}

}  // namespace

std::string_view shape_name(Property::Shape s) {
    switch (s) {
        case Property::Shape::Always: return "G p";
        case Property::Shape::Eventually: return "F p";
        case Property::Shape::Response: return "G(p -> F q)";
        case Property::Shape::NextResponse: return "G(p -> X q)";
        case Property::Shape::Until: return "p U q";
    }
    return "?";
}

Property parse_property(const Model& model, std::string_view text) {
    PropertyParser parser(model, lex(text));
    Formula f = parser.parse_all();
    Property p;
    p.text = trim(text);
    const auto unsupported = [] {
        return MalformedProperty("unsupported property shape; use G p, F p, G(p -> F q), G(p -> X q) or p U q");
    };
    using Op = Formula::Op;
    if (f.op == Op::U) {
        if (!is_state(f.args[0]) || !is_state(f.args[1])) throw unsupported();
        p.shape = Property::Shape::Until;
        p.p = to_state(f.args[0]);
        p.q = to_state(f.args[1]);
        return p;
    }
    if (f.op == Op::F) {
        if (!is_state(f.args[0])) throw unsupported();
        p.shape = Property::Shape::Eventually;
        p.p = to_state(f.args[0]);
        return p;
    }
    if (f.op != Op::G) throw unsupported();
    const Formula& body = f.args[0];
    if (is_state(body)) {
        p.shape = Property::Shape::Always;
        p.p = to_state(body);
        return p;
    }
    if (body.op != Op::Implies || !is_state(body.args[0])) throw unsupported();
    const Formula& rhs = body.args[1];
    if ((rhs.op != Op::F && rhs.op != Op::X) || !is_state(rhs.args[0])) throw unsupported();
    p.shape = rhs.op == Op::F ? Property::Shape::Response : Property::Shape::NextResponse;
    p.p = to_state(body.args[0]);
    p.q = to_state(rhs.args[0]);
    return p;
}

PropertyFile parse_property_file(const Model& model, std::string_view text) {
    PropertyFile file;
    bool explicit_env = false;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const std::string s = trim(raw);
        if (s.empty() || s[0] == '#') continue;
        const std::string prefix = "line " + std::to_string(line) + ": ";
        try {
            if (s.rfind("env ", 0) == 0) {
                explicit_env = true;
                runtime::Scenario sc;
                try {
                    sc = runtime::parse_scenario(model, "tick 0 " + s.substr(4));
                } catch (const runtime::ScenarioError& e) {
                    const std::string what = e.what();
                    throw MalformedProperty(what.substr(what.find(": ") + 2));
                }
                if (sc.steps.size() != 1 || sc.steps[0].stimulus.kind == runtime::Stimulus::Kind::Halt) {
                    throw MalformedProperty("env lines take one inject, set or send stimulus");
                }
                file.env.push_back(sc.steps[0].stimulus);
            } else {
                file.properties.push_back(parse_property(model, s));
            }
        } catch (const UnresolvedAtom& e) {
            throw UnresolvedAtom(prefix + e.what());
        } catch (const MalformedProperty& e) {
            throw MalformedProperty(prefix + e.what());
        }
    }
    if (!explicit_env) file.env = default_env(model);
    return file;
}

PropertyFile load_property_file(const Model& model, const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_property_file(model, buf.str());
}

std::vector<runtime::Stimulus> default_env(const Model& model) {
    std::vector<runtime::Stimulus> env;
    for (std::size_t t = 0; t < model.tiers.size(); ++t) {
        for (std::size_t e = 0; e < model.tiers[t].events.size(); ++e) {
            if (!model.tiers[t].events[e].injectable) continue;
            runtime::Stimulus s;
            s.kind = runtime::Stimulus::Kind::Inject;
            s.tier = t;
            s.target = e;
            env.push_back(s);
        }
    }
    return env;
}

void collect_thresholds(const StateFormula& f, std::vector<std::vector<std::vector<Value>>>& out) {
    thresholds_of(f, out);
}

}  // namespace asslkit::verifier
