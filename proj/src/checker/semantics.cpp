#include <algorithm>
#include <functional>
#include <set>

#include "asslkit/checker/checker.hpp"

namespace asslkit::checker {

using namespace syntax;

namespace {

void warn(std::vector<Diagnostic>& out, const std::string& message, const SourceSpan& span) {
    out.push_back({Severity::Warning, "W-UNREACHABLE", message, span});
}

void error(std::vector<Diagnostic>& out, const std::string& code, const std::string& message, const SourceSpan& span) {
    out.push_back({Severity::Error, code, message, span});
}

void collect_calls(const std::vector<Statement>& body, const TierSymbols& sym, std::vector<std::size_t>& out) {
    for (const Statement& s : body) {
        if (const auto* c = std::get_if<CallStmt>(&s)) {
            auto it = sym.actions.find(c->action.name);
            if (it != sym.actions.end()) out.push_back(it->second);
        }
    }
}

/// Tarjan over the action call graph of one tier; one E-CYCLE per recursive component.
void check_cycles(const Tier& t, const TierSymbols& sym, std::vector<Diagnostic>& out) {
    const std::size_t n = t.actions.size();
    std::vector<std::vector<std::size_t>> calls(n);
    for (std::size_t i = 0; i < n; ++i) {
        collect_calls(t.actions[i].does, sym, calls[i]);
        collect_calls(t.actions[i].onerr_does, sym, calls[i]);
    }
    std::vector<int> index(n, -1), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    int counter = 0;
    std::function<void(std::size_t)> visit = [&](std::size_t v) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = true;
        for (std::size_t w : calls[v]) {
            if (index[w] < 0) {
                visit(w);
                low[v] = std::min(low[v], low[w]);
            } else if (on_stack[w]) {
                low[v] = std::min(low[v], index[w]);
            }
        }
        if (low[v] != index[v]) return;
        std::vector<std::size_t> component;
        std::size_t w;
        do {
            w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            component.push_back(w);
        } while (w != v);
        const bool self_loop = std::count(calls[v].begin(), calls[v].end(), v) > 0;
        if (component.size() < 2 && !self_loop) return;
        std::sort(component.begin(), component.end());
        std::string names;
        for (std::size_t c : component) names += (names.empty() ? "" : ", ") + t.actions[c].name;
        const ActionDecl& first = t.actions[component.front()];
        error(out, "E-CYCLE", "actions call each other recursively: " + names, first.span);
    };
    for (std::size_t v = 0; v < n; ++v) {
        if (index[v] < 0) visit(v);
    }
}

void check_protocol(const InteractionProtocol& p, std::vector<Diagnostic>& out) {
    for (const ChannelDecl& c : p.channels) {
        if (c.capacity < 1) {
            error(out, "E-CAPACITY", "channel '" + c.name + "' needs capacity >= 1, found " + std::to_string(c.capacity),
                  c.span);
        }
    }
}

void check_tier(const Tier& t, const TierSymbols& sym, std::vector<Diagnostic>& out) {
    for (const PolicyDecl& p : t.policies) {
        if (p.fluents.empty()) error(out, "E-EMPTY", "policy " + p.name + " declares no fluents", p.span);
        std::set<std::string> mapped;
        for (const MappingDecl& m : p.mappings) {
            for (const auto& c : m.conditions) mapped.insert(c.name);
        }
        for (const FluentDecl& f : p.fluents) {
            std::set<std::string> initiators;
            for (const auto& r : f.initiated_by) initiators.insert(r.name);
            for (const auto& r : f.terminated_by) {
                if (initiators.count(r.name)) {
                    error(out, "E-FLUENT-OVERLAP",
                          "event '" + r.name + "' both initiates and terminates fluent '" + f.name + "'", r.span);
                }
            }
            if (!mapped.count(f.name)) {
                warn(out, "fluent '" + f.name + "' is not used by any mapping of " + p.name, f.span);
            }
        }
    }

    check_cycles(t, sym, out);

    std::set<std::string> triggered;
    for (const ActionDecl& a : t.actions) {
        for (const auto& r : a.triggers) triggered.insert(r.name);
        for (const auto& r : a.onerr_triggers) triggered.insert(r.name);
    }
    for (const EventDecl& e : t.events) {
        for (const auto& c : e.activation) {
            if (c.kind == ActivationClause::Kind::Elapsed && c.ticks < 1) {
                error(out, "E-RANGE", "ELAPSED period of event '" + e.name + "' must be >= 1 tick", c.span);
            }
        }
        if (e.activation.empty() && !e.injectable && !triggered.count(e.name)) {
            warn(out, "event '" + e.name + "' has no activation, is never triggered and is not INJECTABLE", e.span);
        }
    }
    if (t.aeip) check_protocol(*t.aeip, out);
}

}  // namespace

std::vector<Diagnostic> check_semantics(const SpecificationTree& tree, const SymbolTable& symbols) {
    std::vector<Diagnostic> out;
    if (tree.asip) check_protocol(*tree.asip, out);
    for (std::size_t i = 0; i < tier_count(tree); ++i) check_tier(tier_at(tree, i), symbols.tiers[i], out);
    sort_diagnostics(out);
    return out;
}

}  // namespace asslkit::checker
