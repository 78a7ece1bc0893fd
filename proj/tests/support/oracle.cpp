#include "oracle.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <random>
#include <sstream>
#include <stdexcept>

namespace oracle {

namespace {

using namespace asslkit::syntax;

// ---------------------------------------------------------------- generator

struct Gen {
    std::mt19937_64 rng;
    int below(int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); }
    bool chance(int percent) { return below(100) < percent; }
};

std::string bool_expr(Gen& g, int metrics, int fluents, const std::vector<std::string>& locals, int depth) {
    const int pick = g.below(depth > 1 ? 4 : 7);
    if (depth > 1 || pick >= 4) {
        const int leaf = g.below(3 + (locals.empty() ? 0 : 1));
        if (leaf == 0 || (leaf == 1 && metrics == 0)) return g.chance(50) ? "true" : "false";
        if (leaf == 1) return "METRICS.m" + std::to_string(g.below(metrics));
        if (leaf == 2) return fluents > 0 ? "FLUENTS.f" + std::to_string(g.below(fluents)) : "true";
        return locals[static_cast<std::size_t>(g.below(static_cast<int>(locals.size())))];
    }
    switch (pick) {
        case 0: return "NOT " + bool_expr(g, metrics, fluents, locals, depth + 1);
        case 1:
            return "(" + bool_expr(g, metrics, fluents, locals, depth + 1) + " AND " +
                   bool_expr(g, metrics, fluents, locals, depth + 1) + ")";
        case 2:
            return "(" + bool_expr(g, metrics, fluents, locals, depth + 1) + " OR " +
                   bool_expr(g, metrics, fluents, locals, depth + 1) + ")";
        default:
            return "(" + bool_expr(g, metrics, fluents, locals, depth + 1) + (g.chance(50) ? " = " : " != ") +
                   bool_expr(g, metrics, fluents, locals, depth + 1) + ")";
    }
}

}  // namespace

SmallSpec random_small_spec(std::uint64_t seed) {
    Gen g{std::mt19937_64(seed * 0x9e3779b97f4a7c15ULL + 17)};
    const int metrics = g.below(3);
    const int events = 2 + g.below(3);
    const int fluents = 1 + g.below(2);
    const int actions = 1 + g.below(3);
    auto ev = [](int i) { return "EVENTS.e" + std::to_string(i); };

    std::ostringstream s;
    s << "AS s { }\nAE w {\n  SELF_G {\n";
    std::vector<std::pair<int, int>> lifecycle;  // initiating and terminating event per fluent
    for (int f = 0; f < fluents; ++f) {
        const int init = g.below(events);
        int term = g.below(events - 1);
        if (term >= init) ++term;
        lifecycle.push_back({init, term});
        s << "    FLUENT f" << f << " { INITIATED_BY { " << ev(init) << " } TERMINATED_BY { " << ev(term) << " } }\n";
    }
    for (int f = 0; f < fluents; ++f) {
        s << "    MAPPING { CONDITIONS { f" << f;
        if (fluents > 1 && g.chance(25)) s << ", f" << (1 - f);
        s << " } DO_ACTIONS { ACTIONS.a" << g.below(actions) << " } }\n";
    }
    s << "  }\n";
    for (int a = 0; a < actions; ++a) {
        std::vector<std::string> locals;
        std::ostringstream does;
        const int statements = 1 + g.below(3);
        for (int k = 0; k < statements; ++k) {
            const int kind = g.below(10);
            if (kind < 2 && a + 1 < actions) {
                const int callee = a + 1 + g.below(actions - a - 1);
                if (g.chance(50)) {
                    const std::string local = "r" + std::to_string(locals.size());
                    does << local << " = call ACTIONS.a" << callee << "; ";
                    locals.push_back(local);
                } else {
                    does << "call ACTIONS.a" << callee << "; ";
                }
            } else if (kind < 3) {
                does << "fail \"f" << a << "\"; ";
            } else if (metrics > 0) {
                does << "METRICS.m" << g.below(metrics) << " = " << bool_expr(g, metrics, fluents, locals, 1) << "; ";
            } else {
                does << "fail \"f" << a << "\"; ";
            }
        }
        s << "  ACTION a" << a << " {\n";
        if (g.chance(40)) s << "    GUARDS { " << bool_expr(g, metrics, fluents, {}, 1) << " }\n";
        if (g.chance(25)) s << "    ENSURES { " << bool_expr(g, metrics, fluents, locals, 1) << " }\n";
        s << "    DOES { " << does.str() << "}\n";
        if (metrics > 0 && g.chance(30)) {
            s << "    ONERR_DOES { METRICS.m" << g.below(metrics) << " = " << (g.chance(50) ? "true" : "false")
              << "; }\n";
        }
        if (g.chance(50)) s << "    TRIGGERS { " << ev(g.below(events)) << " }\n";
        if (g.chance(40)) s << "    ONERR_TRIGGERS { " << ev(g.below(events)) << " }\n";
        s << "  }\n";
    }
    SmallSpec out;
    bool any_injectable = false;
    for (int e = 0; e < events; ++e) {
        const bool injectable = g.chance(60) || (e == events - 1 && !any_injectable);
        any_injectable = any_injectable || injectable;
        s << "  EVENT e" << e << " { ";
        if (injectable) {
            s << "INJECTABLE; ";
            out.env.push_back("inject w.e" + std::to_string(e));
        }
        if (g.chance(30)) s << "GUARDS { " << bool_expr(g, metrics, fluents, {}, 1) << " } ";
        if (metrics > 0 && g.chance(35)) s << "ACTIVATION { CHANGED { METRICS.m" << g.below(metrics) << " } } ";
        s << "}\n";
    }
    for (int m = 0; m < metrics; ++m) {
        s << "  METRIC m" << m << " { TYPE boolean; INITIAL " << (g.chance(50) ? "true" : "false") << "; }\n";
        if (g.chance(40)) out.env.push_back("set w.m" + std::to_string(m) + (g.chance(50) ? " true" : " false"));
    }
    s << "}\n";
    out.text = s.str();

    std::vector<std::string> atoms = {"quiescent"};
    for (int f = 0; f < fluents; ++f) atoms.push_back("fluent f" + std::to_string(f));
    for (int e = 0; e < events; ++e) atoms.push_back("event e" + std::to_string(e));
    for (int m = 0; m < metrics; ++m) atoms.push_back("metric m" + std::to_string(m));
    auto atom = [&] {
        std::string a = atoms[static_cast<std::size_t>(g.below(static_cast<int>(atoms.size())))];
        return g.chance(30) ? "!(" + a + ")" : a;
    };
    out.properties = {
        "G (" + atom() + " | " + atom() + ")",
        "F (" + atom() + ")",
        "G (" + atom() + " -> F (" + atom() + "))",
        "G (implies (" + atom() + ") (X (" + atom() + ")))",
        "(" + atom() + ") U (" + atom() + ")",
        "G (fluent f0 -> F (!(fluent f0)))",
    };
    return out;
}

namespace {

// ---------------------------------------------------------------- interpreter

struct Flat {
    const Tier* ae = nullptr;
    std::vector<const FluentDecl*> fluents;
    std::vector<std::pair<const PolicyDecl*, const MappingDecl*>> mappings;

    int event(const std::string& n) const { return index_of(ae->events, n); }
    int action(const std::string& n) const { return index_of(ae->actions, n); }
    int metric(const std::string& n) const { return index_of(ae->metrics, n); }
    int fluent(const std::string& n) const {
        for (std::size_t i = 0; i < fluents.size(); ++i) {
            if (fluents[i]->name == n) return static_cast<int>(i);
        }
        throw std::logic_error("fluent " + n);
    }
    template <typename T>
    static int index_of(const std::vector<T>& v, const std::string& n) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (v[i].name == n) return static_cast<int>(i);
        }
        throw std::logic_error("name " + n);
    }
};

struct State {
    std::vector<bool> fluents;
    std::vector<bool> metrics;
    std::deque<int> pending;
    std::vector<bool> used;
    int just = -1;
};

std::string key(const State& s) {
    std::string k = "f/";
    for (bool b : s.fluents) k += b ? '1' : '0';
    k += "|m/";
    for (std::size_t i = 0; i < s.metrics.size(); ++i) k += (i ? "," : "") + std::string(s.metrics[i] ? "true" : "false");
    k += "|c|p";
    for (std::size_t i = 0; i < s.pending.size(); ++i) k += (i ? ",1:" : "1:") + std::to_string(s.pending[i]);
    k += "|t|u";
    for (bool b : s.used) k += b ? '1' : '0';
    k += "|j";
    k += s.just < 0 ? "-" : "1:" + std::to_string(s.just);
    return k;
}

class Interp {
public:
    Interp(const Flat& flat, State& s) : f_(flat), s_(s) {}

    bool eval(const Expr& e, const std::map<std::string, bool>* locals) const {
        switch (e.kind) {
            case Expr::Kind::Literal: return std::get<bool>(e.literal);
            case Expr::Kind::Metric: return s_.metrics[static_cast<std::size_t>(f_.metric(e.ref.name))];
            case Expr::Kind::Fluent: return s_.fluents[static_cast<std::size_t>(f_.fluent(e.ref.name))];
            case Expr::Kind::Local: {
                if (!locals) return false;
                auto it = locals->find(e.local);
                return it != locals->end() && it->second;
            }
            case Expr::Kind::Not: return !eval(e.operands[0], locals);
            case Expr::Kind::And: return eval(e.operands[0], locals) && eval(e.operands[1], locals);
            case Expr::Kind::Or: return eval(e.operands[0], locals) || eval(e.operands[1], locals);
            case Expr::Kind::Compare: {
                const bool a = eval(e.operands[0], locals);
                const bool b = eval(e.operands[1], locals);
                return e.op == CompareOp::Eq ? a == b : a != b;
            }
            default: throw std::logic_error("non-boolean expression in a small spec");
        }
    }

    void assign(int metric, bool v) {
        s_.metrics[static_cast<std::size_t>(metric)] = v;
        const std::string& name = f_.ae->metrics[static_cast<std::size_t>(metric)].name;
        for (std::size_t e = 0; e < f_.ae->events.size(); ++e) {
            for (const auto& c : f_.ae->events[e].activation) {
                if (c.kind == ActivationClause::Kind::Changed && c.ref.name == name) s_.pending.push_back(static_cast<int>(e));
            }
        }
    }

    enum class Result { Ok, Rejected, Error };

    Result run_action(int a) {
        const ActionDecl& act = f_.ae->actions[static_cast<std::size_t>(a)];
        if (act.guard && !eval(*act.guard, nullptr)) return Result::Rejected;
        std::map<std::string, bool> locals;
        bool ok = run(act.does, locals);
        if (ok && act.ensures && !eval(*act.ensures, &locals)) ok = false;
        if (ok) {
            for (const auto& t : act.triggers) s_.pending.push_back(f_.event(t.name));
            return Result::Ok;
        }
        std::map<std::string, bool> err_locals;
        run(act.onerr_does, err_locals);
        for (const auto& t : act.onerr_triggers) s_.pending.push_back(f_.event(t.name));
        return Result::Error;
    }

    bool run(const std::vector<Statement>& body, std::map<std::string, bool>& locals) {
        for (const Statement& st : body) {
            if (const auto* c = std::get_if<CallStmt>(&st)) {
                const Result r = run_action(f_.action(c->action.name));
                if (r == Result::Error) return false;
                if (!c->binding.empty()) locals[c->binding] = r == Result::Ok;
            } else if (const auto* as = std::get_if<AssignStmt>(&st)) {
                assign(f_.metric(as->metric.name), eval(as->value, &locals));
            } else if (std::holds_alternative<FailStmt>(st)) {
                return false;
            } else {
                throw std::logic_error("send in a small spec");
            }
        }
        return true;
    }

    void raise(int e) {
        const EventDecl& ev = f_.ae->events[static_cast<std::size_t>(e)];
        s_.just = -1;
        if (ev.guard && !eval(*ev.guard, nullptr)) return;
        s_.just = e;
        const auto names = [&](const std::vector<Reference>& refs) {
            return std::any_of(refs.begin(), refs.end(), [&](const Reference& r) { return r.name == ev.name; });
        };
        std::vector<bool> rose(f_.fluents.size(), false);
        for (std::size_t i = 0; i < f_.fluents.size(); ++i) {
            if (!s_.fluents[i] && names(f_.fluents[i]->initiated_by)) {
                s_.fluents[i] = true;
                rose[i] = true;
            } else if (s_.fluents[i] && names(f_.fluents[i]->terminated_by)) {
                s_.fluents[i] = false;
            }
        }
        std::vector<const MappingDecl*> firing;
        for (const auto& [policy, m] : f_.mappings) {
            bool any = false;
            bool all = true;
            for (const auto& c : m->conditions) {
                const auto i = static_cast<std::size_t>(f_.fluent(c.name));
                any = any || rose[i];
                all = all && s_.fluents[i];
            }
            if (any && all) firing.push_back(m);
        }
        for (const MappingDecl* m : firing) {
            for (const auto& a : m->do_actions) run_action(f_.action(a.name));
        }
    }

private:
    const Flat& f_;
    State& s_;
};

std::set<std::string> labels_of(const Flat& f, const State& s) {
    std::set<std::string> out;
    for (std::size_t i = 0; i < f.fluents.size(); ++i) {
        if (s.fluents[i]) out.insert("fluent:w." + f.fluents[i]->name);
    }
    for (std::size_t i = 0; i < s.metrics.size(); ++i) {
        if (s.metrics[i]) out.insert("metric:w." + f.ae->metrics[i].name);
    }
    if (s.just >= 0) out.insert("event:w." + f.ae->events[static_cast<std::size_t>(s.just)].name);
    if (s.pending.empty()) out.insert("quiescent");
    return out;
}

}  // namespace

Graph enumerate(const SpecificationTree& tree, const std::vector<std::string>& env, std::size_t max_states) {
    Flat flat;
    flat.ae = &tree.ae_tiers.at(0);
    for (const auto& p : flat.ae->policies) {
        for (const auto& fl : p.fluents) flat.fluents.push_back(&fl);
    }
    for (const auto& p : flat.ae->policies) {
        for (const auto& m : p.mappings) flat.mappings.push_back({&p, &m});
    }

    State init;
    init.fluents.assign(flat.fluents.size(), false);
    for (const auto& m : flat.ae->metrics) init.metrics.push_back(std::get<bool>(m.initial));
    init.used.assign(env.size(), false);

    Graph g;
    g.initial = key(init);
    std::map<std::string, State> seen{{g.initial, init}};
    std::deque<std::string> work{g.initial};
    while (!work.empty()) {
        const std::string from = work.front();
        work.pop_front();
        const State s = seen.at(from);
        g.states.insert(from);
        g.labels[from] = labels_of(flat, s);

        std::vector<std::pair<std::string, State>> next;
        if (!s.pending.empty()) {
            State t = s;
            const int e = t.pending.front();
            t.pending.pop_front();
            Interp(flat, t).raise(e);
            next.push_back({"step w." + flat.ae->events[static_cast<std::size_t>(e)].name, t});
        } else {
            for (std::size_t i = 0; i < env.size(); ++i) {
                if (s.used[i]) continue;
                State t = s;
                t.used[i] = true;
                t.just = -1;
                std::istringstream words(env[i]);
                std::string verb, target, value;
                words >> verb >> target >> value;
                const std::string name = target.substr(2);
                if (verb == "inject") {
                    t.pending.push_back(flat.event(name));
                } else {
                    Interp(flat, t).assign(flat.metric(name), value == "true");
                }
                next.push_back({env[i], t});
            }
            if (std::any_of(s.used.begin(), s.used.end(), [](bool b) { return b; })) {
                State t = s;
                std::fill(t.used.begin(), t.used.end(), false);
                t.just = -1;
                next.push_back({"tick", t});
            }
        }
        for (auto& [label, t] : next) {
            const std::string to = key(t);
            if (!seen.count(to)) {
                if (seen.size() >= max_states) {
                    g.complete = false;
                    continue;
                }
                seen.emplace(to, t);
                work.push_back(to);
            }
            g.edges.insert({from, label, to});
        }
    }
    return g;
}

namespace {

// ---------------------------------------------------------------- properties

/// Minimal re-implementation of the property language for generated texts.
struct Node {
    std::string op;  // atom text, "!", "&", "|", "->", "G", "F", "X", "U"
    std::vector<Node> args;
};

class PropParser {
public:
    explicit PropParser(const std::string& text) {
        std::string cur;
        auto flush = [&] {
            if (!cur.empty()) toks_.push_back(cur);
            cur.clear();
        };
        for (std::size_t i = 0; i < text.size(); ++i) {
            const char c = text[i];
            if (c == ' ') {
                flush();
            } else if (c == '(' || c == ')' || c == '|' || c == '&' || c == '!') {
                flush();
                toks_.push_back(std::string(1, c));
            } else if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
                flush();
                toks_.push_back("->");
                ++i;
            } else {
                cur += c;
            }
        }
        flush();
    }

    Node parse() {
        Node n = implication();
        if (pos_ != toks_.size()) throw std::logic_error("trailing tokens");
        return n;
    }

private:
    bool at(const std::string& t) const { return pos_ < toks_.size() && toks_[pos_] == t; }
    Node implication() {
        Node l = until();
        if (at("->")) {
            ++pos_;
            return {"->", {l, implication()}};
        }
        return l;
    }
    Node until() {
        Node l = disj();
        if (at("U")) {
            ++pos_;
            return {"U", {l, disj()}};
        }
        return l;
    }
    Node disj() {
        Node l = conj();
        while (at("|")) {
            ++pos_;
            l = {"|", {l, conj()}};
        }
        return l;
    }
    Node conj() {
        Node l = unary();
        while (at("&")) {
            ++pos_;
            l = {"&", {l, unary()}};
        }
        return l;
    }
    Node unary() {
        const std::string t = toks_.at(pos_++);
        if (t == "!" || t == "G" || t == "F" || t == "X") return {t, {unary()}};
        if (t == "implies") {
            Node a = unary();
            return {"->", {a, unary()}};
        }
        if (t == "(") {
            Node n = implication();
            ++pos_;
            return n;
        }
        if (t == "quiescent" || t == "true" || t == "false") return {t, {}};
        return {t + ":w." + toks_.at(pos_++), {}};
    }

    std::vector<std::string> toks_;
    std::size_t pos_ = 0;
};

bool sat(const Node& n, const std::set<std::string>& labels) {
    if (n.op == "!") return !sat(n.args[0], labels);
    if (n.op == "&") return sat(n.args[0], labels) && sat(n.args[1], labels);
    if (n.op == "|") return sat(n.args[0], labels) || sat(n.args[1], labels);
    if (n.op == "->") return !sat(n.args[0], labels) || sat(n.args[1], labels);
    if (n.op == "true") return true;
    if (n.op == "false") return false;
    return labels.count(n.op) > 0;
}

struct Adjacency {
    std::vector<std::string> names;
    std::map<std::string, std::size_t> index;
    std::vector<std::set<std::size_t>> succ;
};

Adjacency adjacency(const Graph& g) {
    Adjacency a;
    for (const auto& s : g.states) {
        a.index[s] = a.names.size();
        a.names.push_back(s);
    }
    a.succ.resize(a.names.size());
    for (const auto& [from, label, to] : g.edges) a.succ[a.index[from]].insert(a.index[to]);
    for (std::size_t s = 0; s < a.succ.size(); ++s) {
        if (a.succ[s].empty()) a.succ[s].insert(s);  // stutter
    }
    return a;
}

/// Greatest fixpoint of Z = phi & EX Z.
std::vector<bool> eg(const Adjacency& a, const std::vector<bool>& phi) {
    std::vector<bool> z = phi;
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t s = 0; s < z.size(); ++s) {
            if (!z[s]) continue;
            bool keep = false;
            for (std::size_t t : a.succ[s]) keep = keep || z[t];
            if (!keep) {
                z[s] = false;
                changed = true;
            }
        }
    }
    return z;
}

/// Least fixpoint of Z = target | (through & EX Z).
std::vector<bool> eu(const Adjacency& a, const std::vector<bool>& through, const std::vector<bool>& target) {
    std::vector<bool> z = target;
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t s = 0; s < z.size(); ++s) {
            if (z[s] || !through[s]) continue;
            for (std::size_t t : a.succ[s]) {
                if (z[t]) {
                    z[s] = true;
                    changed = true;
                    break;
                }
            }
        }
    }
    return z;
}

}  // namespace

Answer evaluate(const Graph& g, const std::string& property) {
    const Node root = PropParser(property).parse();
    const Adjacency a = adjacency(g);
    const std::size_t n = a.names.size();
    const std::size_t init = a.index.at(g.initial);
    auto states_where = [&](const Node& f, bool value) {
        std::vector<bool> out(n);
        for (std::size_t s = 0; s < n; ++s) out[s] = sat(f, g.labels.at(a.names[s])) == value;
        return out;
    };
    const std::vector<bool> everywhere(n, true);
    auto reachable_any = [&](const std::vector<bool>& set) {
        const auto r = eu(a, everywhere, set);
        return r[init];
    };

    if (root.op == "U") {
        const auto p = states_where(root.args[0], true);
        const auto q = states_where(root.args[1], true);
        std::vector<bool> waiting(n), failed(n);
        for (std::size_t s = 0; s < n; ++s) {
            waiting[s] = p[s] && !q[s];
            failed[s] = !p[s] && !q[s];
        }
        const auto bad = eu(a, waiting, failed);
        const auto stuck = eg(a, waiting);
        return bad[init] || stuck[init] ? Answer::Violated : Answer::Holds;
    }
    if (root.op == "F") return eg(a, states_where(root.args[0], false))[init] ? Answer::Violated : Answer::Holds;
    const Node& body = root.args[0];
    if (body.op == "->" && (body.args[1].op == "F" || body.args[1].op == "X")) {
        const auto p = states_where(body.args[0], true);
        const auto not_q = states_where(body.args[1].args[0], false);
        std::vector<bool> target(n);
        if (body.args[1].op == "F") {
            const auto stuck = eg(a, not_q);
            for (std::size_t s = 0; s < n; ++s) target[s] = p[s] && stuck[s];
        } else {
            for (std::size_t s = 0; s < n; ++s) {
                for (std::size_t t : a.succ[s]) target[s] = target[s] || (p[s] && not_q[t]);
            }
        }
        return reachable_any(target) ? Answer::Violated : Answer::Holds;
    }
    return reachable_any(states_where(body, false)) ? Answer::Violated : Answer::Holds;
}

}  // namespace oracle
