#include "asslkit/verifier/lts.hpp"

#include <algorithm>
#include <sstream>
#include <thread>
#include <unordered_map>

namespace asslkit::verifier {

namespace {

using runtime::CompiledExpr;
using runtime::CompiledStatement;
using runtime::Model;

bool numeric(runtime::ValueType t) { return t == runtime::ValueType::Integer || t == runtime::ValueType::Real; }

/// Marks metrics that appear anywhere other than `metric op literal`.
struct Eligibility {
    const Model& model;
    std::size_t tier;
    std::vector<std::vector<bool>>& exact;
    std::vector<std::vector<std::vector<Value>>>& found;

    void expr(const CompiledExpr& e) {
        using K = CompiledExpr::Kind;
        if (e.kind == K::Metric) {
            exact[tier][e.slot] = true;
            return;
        }
        if (e.kind == K::Compare) {
            const auto& a = e.operands[0];
            const auto& b = e.operands[1];
            if (a.kind == K::Metric && b.kind == K::Literal) {
                found[tier][a.slot].push_back(b.literal);
                return;
            }
            if (b.kind == K::Metric && a.kind == K::Literal) {
                found[tier][b.slot].push_back(a.literal);
                return;
            }
        }
        for (const auto& o : e.operands) expr(o);
    }

    void block(const std::vector<CompiledStatement>& body) {
        for (const auto& s : body) {
            if (s.kind != CompiledStatement::Kind::Assign) continue;
            if (s.value.kind == CompiledExpr::Kind::Literal) {
                found[tier][s.target].push_back(s.value.literal);
            } else {
                exact[tier][s.target] = true;
                expr(s.value);
            }
        }
    }
};

void append_event(std::string& out, runtime::EventKey e) {
    out += std::to_string(e.tier);
    out += ':';
    out += std::to_string(e.event);
}

}  // namespace

Abstraction Abstraction::none(const Model& model) {
    Abstraction a;
    for (const auto& t : model.tiers) a.thresholds.emplace_back(t.metrics.size());
    return a;
}

Abstraction Abstraction::derive(const Model& model, const std::vector<runtime::Stimulus>& env,
                                const std::vector<Property>& properties) {
    std::vector<std::vector<bool>> exact;
    std::vector<std::vector<std::vector<Value>>> found;
    for (const auto& t : model.tiers) {
        exact.emplace_back(t.metrics.size(), false);
        found.emplace_back(t.metrics.size());
    }
    for (std::size_t t = 0; t < model.tiers.size(); ++t) {
        Eligibility el{model, t, exact, found};
        const auto& tm = model.tiers[t];
        for (const auto& ev : tm.events) {
            if (ev.guard) el.expr(*ev.guard);
        }
        for (const auto& am : tm.actions) {
            if (am.guard) el.expr(*am.guard);
            if (am.ensures) el.expr(*am.ensures);
            el.block(am.does);
            el.block(am.onerr_does);
        }
    }
    for (const auto& p : properties) {
        collect_thresholds(p.p, found);
        collect_thresholds(p.q, found);
    }
    Abstraction a = none(model);
    for (std::size_t t = 0; t < model.tiers.size(); ++t) {
        for (std::size_t m = 0; m < model.tiers[t].metrics.size(); ++m) {
            const auto& mm = model.tiers[t].metrics[m];
            if (!numeric(mm.type) || exact[t][m]) continue;
            std::vector<Value> th = found[t][m];
            for (const auto& s : env) {
                if (s.kind == runtime::Stimulus::Kind::Set && s.tier == t && s.target == m) th.push_back(s.value);
            }
            th.push_back(mm.initial);
            std::sort(th.begin(), th.end());
            th.erase(std::unique(th.begin(), th.end()), th.end());
            a.thresholds[t][m] = std::move(th);
        }
    }
    return a;
}

std::size_t Abstraction::interval(std::size_t tier, std::size_t metric, const Value& v) const {
    const auto& th = *thresholds[tier][metric];
    const auto lo = std::lower_bound(th.begin(), th.end(), v);
    const std::size_t below = static_cast<std::size_t>(lo - th.begin());
    return 2 * below + (lo != th.end() && *lo == v ? 1 : 0);
}

std::string state_key(const Abstraction& abstraction, const StateVector& s,
                      runtime::GuardSnapshot snapshot) {
    const auto& rs = s.runtime;
    std::string out = "f";
    for (std::size_t t = 0; t < rs.tiers.size(); ++t) {
        if (t) out += '/';
        for (bool f : rs.tiers[t].fluents) out += f ? '1' : '0';
    }
    out += "|m";
    for (std::size_t t = 0; t < rs.tiers.size(); ++t) {
        if (t) out += '/';
        for (std::size_t m = 0; m < rs.tiers[t].metrics.size(); ++m) {
            if (m) out += ',';
            if (abstraction.abstracted(t, m)) {
                out += '#';
                out += std::to_string(abstraction.interval(t, m, rs.tiers[t].metrics[m]));
            } else {
                out += syntax::render_value(rs.tiers[t].metrics[m]);
            }
        }
    }
    out += "|c";
    for (std::size_t c = 0; c < rs.channels.size(); ++c) {
        if (c) out += '/';
        for (std::size_t i = 0; i < rs.channels[c].size(); ++i) {
            if (i) out += ',';
            out += std::to_string(rs.channels[c][i]);
        }
    }
    out += "|p";
    for (std::size_t i = 0; i < rs.pending.size(); ++i) {
        if (i) out += ',';
        append_event(out, rs.pending[i].event);
        if (snapshot == runtime::GuardSnapshot::Pre && rs.pending[i].pre) {
            const auto& pre = *rs.pending[i].pre;
            out += '@';
            out += std::to_string(pre.metric);
            out += '=';
            const std::size_t t = rs.pending[i].event.tier;
            out += abstraction.abstracted(t, pre.metric)
                       ? "#" + std::to_string(abstraction.interval(t, pre.metric, pre.old))
                       : syntax::render_value(pre.old);
        }
    }
    out += "|t";
    for (std::size_t i = 0; i < rs.timers.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(rs.timers[i]);
    }
    out += "|u";
    for (bool u : s.used) out += u ? '1' : '0';
    out += "|j";
    if (s.just_raised) {
        append_event(out, *s.just_raised);
    } else {
        out += '-';
    }
    if (s.overflow) out += "|x";
    return out;
}

bool is_quiescent(const StateVector& s) {
    if (!s.runtime.pending.empty()) return false;
    return std::all_of(s.runtime.channels.begin(), s.runtime.channels.end(), [](const auto& q) { return q.empty(); });
}

std::vector<std::string> state_labels(const Model& model, const StateVector& s) {
    std::vector<std::string> out;
    for (std::size_t t = 0; t < model.tiers.size(); ++t) {
        const auto& tm = model.tiers[t];
        for (std::size_t f = 0; f < tm.fluents.size(); ++f) {
            if (s.runtime.tiers[t].fluents[f]) out.push_back("fluent:" + model.qualified(t, tm.fluents[f].name));
        }
        for (std::size_t m = 0; m < tm.metrics.size(); ++m) {
            if (s.runtime.tiers[t].metrics[m] == Value{true}) {
                out.push_back("metric:" + model.qualified(t, tm.metrics[m].name));
            }
        }
    }
    if (s.just_raised) out.push_back("event:" + model.event_name(*s.just_raised));
    if (is_quiescent(s)) out.push_back("quiescent");
    std::sort(out.begin(), out.end());
    return out;
}

bool holds(const Model& model, const StateFormula& f, const StateVector& s) {
    using K = StateFormula::Kind;
    switch (f.kind) {
        case K::Not: return !holds(model, f.operands[0], s);
        case K::And: return holds(model, f.operands[0], s) && holds(model, f.operands[1], s);
        case K::Or: return holds(model, f.operands[0], s) || holds(model, f.operands[1], s);
        case K::Implies: return !holds(model, f.operands[0], s) || holds(model, f.operands[1], s);
        case K::Atom: break;
    }
    const Atom& a = f.atom;
    switch (a.kind) {
        case Atom::Kind::True: return true;
        case Atom::Kind::False: return false;
        case Atom::Kind::Quiescent: return is_quiescent(s);
        case Atom::Kind::Fluent: return s.runtime.tiers[a.tier].fluents[a.index];
        case Atom::Kind::Event: return s.just_raised == runtime::EventKey{a.tier, a.index};
        case Atom::Kind::Metric: {
            const Value& v = s.runtime.tiers[a.tier].metrics[a.index];
            if (!a.op) return v == Value{true};
            using syntax::CompareOp;
            switch (*a.op) {
                case CompareOp::Eq: return v == a.literal;
                case CompareOp::Ne: return v != a.literal;
                case CompareOp::Lt: return v < a.literal;
                case CompareOp::Le: return v <= a.literal;
                case CompareOp::Gt: return v > a.literal;
                case CompareOp::Ge: return v >= a.literal;
            }
        }
    }
    return false;
}

StateVector initial_state(const Model& model, const std::vector<runtime::Stimulus>& env, std::uint64_t seed) {
    StateVector s;
    s.runtime = runtime::init(model, seed);
    s.used.assign(env.size(), false);
    return s;
}

namespace {

void normalize(StateVector& s, runtime::GuardSnapshot snapshot) {
    s.runtime.tick = 0;
    for (auto& occ : s.runtime.pending) {
        occ.tick = 0;
        occ.cause = {};
        if (snapshot == runtime::GuardSnapshot::Post) occ.pre.reset();
    }
}

}  // namespace

std::vector<Successor> successors(const Model& model, const std::vector<runtime::Stimulus>& env,
                                  const runtime::Options& options, const StateVector& s) {
    std::vector<Successor> out;
    if (s.overflow || s.runtime.halted) return out;
    if (!s.runtime.pending.empty()) {
        Successor next{"step " + model.event_name(s.runtime.pending.front().event), s};
        runtime::Machine m(model, options, next.state.runtime);
        try {
            m.step();
            next.state.just_raised = m.last_raised();
        } catch (const runtime::DepthExceeded&) {
            next.state.overflow = true;
            next.state.just_raised.reset();
            next.state.runtime.pending.clear();
        }
        normalize(next.state, options.guard_snapshot);
        out.push_back(std::move(next));
        return out;
    }
    bool any_used = false;
    for (std::size_t i = 0; i < env.size(); ++i) {
        if (s.used[i]) {
            any_used = true;
            continue;
        }
        Successor next{runtime::describe_stimulus(model, env[i]), s};
        runtime::Machine m(model, options, next.state.runtime);
        m.apply(env[i], 0);
        next.state.used[i] = true;
        next.state.just_raised.reset();
        normalize(next.state, options.guard_snapshot);
        out.push_back(std::move(next));
    }
    const bool busy_channel =
        std::any_of(s.runtime.channels.begin(), s.runtime.channels.end(), [](const auto& q) { return !q.empty(); });
    if (any_used || busy_channel || !model.timers.empty()) {
        Successor next{"tick", s};
        runtime::Machine m(model, options, next.state.runtime);
        m.begin_tick();
        std::fill(next.state.used.begin(), next.state.used.end(), false);
        next.state.just_raised.reset();
        normalize(next.state, options.guard_snapshot);
        out.push_back(std::move(next));
    }
    return out;
}

Lts build_lts(const Model& model, const std::vector<runtime::Stimulus>& env, const BuildOptions& options,
              const std::vector<Property>& properties) {
    const Abstraction abstraction = Abstraction::derive(model, env, properties);
    const auto snapshot = options.runtime.guard_snapshot;
    const std::size_t max_states = std::max<std::size_t>(options.bounds.max_states, 1);
    const std::size_t max_depth = std::max<std::size_t>(options.bounds.max_depth, 1);

    Lts lts;
    lts.env = env;
    lts.abstraction = abstraction;
    lts.runtime = options.runtime;
    lts.seed = options.seed;
    std::unordered_map<std::string, std::size_t> index;
    std::vector<std::vector<Edge>> out_edges;

    auto add_state = [&](StateVector s, std::string key, std::size_t depth) {
        index.emplace(key, lts.states.size());
        lts.labels.push_back(state_labels(model, s));
        lts.states.push_back(std::move(s));
        lts.keys.push_back(std::move(key));
        lts.expanded.push_back(false);
        lts.depth.push_back(depth);
        out_edges.emplace_back();
    };
    {
        StateVector init = initial_state(model, env, options.seed);
        std::string key = state_key(abstraction, init, snapshot);
        add_state(std::move(init), std::move(key), 0);
    }

    const unsigned jobs = std::max(1u, options.jobs);
    std::size_t layer_begin = 0;
    std::size_t depth = 0;
    while (layer_begin < lts.states.size()) {
        const std::size_t layer_end = lts.states.size();
        const std::size_t count = layer_end - layer_begin;
        std::vector<std::vector<Successor>> succ(count);
        std::vector<std::vector<std::string>> succ_keys(count);
        auto work = [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) {
                succ[i] = successors(model, env, options.runtime, lts.states[layer_begin + i]);
                for (const auto& n : succ[i]) succ_keys[i].push_back(state_key(abstraction, n.state, snapshot));
            }
        };
        if (jobs == 1 || count < 2 * jobs) {
            work(0, count);
        } else {
            std::vector<std::thread> threads;
            const std::size_t chunk = (count + jobs - 1) / jobs;
            for (unsigned j = 0; j < jobs; ++j) {
                const std::size_t lo = j * chunk;
                const std::size_t hi = std::min(count, lo + chunk);
                if (lo >= hi) break;
                threads.emplace_back(work, lo, hi);
            }
            for (auto& t : threads) t.join();
        }

        // Merge in state order so numbering does not depend on the worker count.
        for (std::size_t i = 0; i < count; ++i) {
            const std::size_t from = layer_begin + i;
            if (succ[i].empty()) {
                lts.expanded[from] = true;
                continue;
            }
            if (depth >= max_depth) {
                lts.truncated = true;
                continue;
            }
            bool complete = true;
            for (std::size_t k = 0; k < succ[i].size(); ++k) {
                auto it = index.find(succ_keys[i][k]);
                std::size_t to;
                if (it != index.end()) {
                    to = it->second;
                } else if (lts.states.size() < max_states) {
                    to = lts.states.size();
                    add_state(std::move(succ[i][k].state), std::move(succ_keys[i][k]), depth + 1);
                } else {
                    lts.truncated = true;
                    complete = false;
                    continue;
                }
                out_edges[from].push_back({from, std::move(succ[i][k].label), to});
            }
            lts.expanded[from] = complete;
        }
        layer_begin = layer_end;
        ++depth;
    }

    lts.edge_begin.push_back(0);
    for (auto& list : out_edges) {
        std::sort(list.begin(), list.end(), [](const Edge& a, const Edge& b) {
            return std::tie(a.label, a.to) < std::tie(b.label, b.to);
        });
        for (auto& e : list) lts.edges.push_back(std::move(e));
        lts.edge_begin.push_back(lts.edges.size());
    }
    return lts;
}

std::string to_dot(const Lts& lts) {
    const auto escape = [](const std::string& s) {
        std::string out;
        for (char c : s) {
            if (c == '"' || c == '\\') out += '\\';
            out += c;
        }
        return out;
    };
    std::ostringstream out;
    out << "digraph lts {\n";
    if (lts.truncated) out << "  label=\"truncated\";\n";
    out << "  node [shape=box];\n";
    for (std::size_t s = 0; s < lts.size(); ++s) {
        out << "  s" << s << " [label=\"s" << s;
        for (const auto& l : lts.labels[s]) out << "\\n" << escape(l);
        out << "\"";
        if (s == 0) out << ", peripheries=2";
        if (!lts.expanded[s]) out << ", style=dashed";
        out << "];\n";
    }
    for (const Edge& e : lts.edges) {
        out << "  s" << e.from << " -> s" << e.to << " [label=\"" << escape(e.label) << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

}  // namespace asslkit::verifier
