#include <set>

#include "asslkit/checker/checker.hpp"
#include "asslkit/syntax/printer.hpp"

namespace asslkit::checker {

using namespace syntax;

std::optional<std::size_t> SymbolTable::find_tier(const std::string& name) const {
    auto it = tier_index.find(name);
    if (it == tier_index.end()) return std::nullopt;
    return it->second;
}

std::size_t tier_count(const SpecificationTree& tree) { return tree.ae_tiers.size() + 1; }

const Tier& tier_at(const SpecificationTree& tree, std::size_t index) {
    return index == 0 ? tree.as_tier : tree.ae_tiers.at(index - 1);
}

namespace {

class Resolver {
public:
    explicit Resolver(const SpecificationTree& tree) : tree_(tree) {}

    ResolveResult run() {
        declare_tiers();
        if (tree_.asip) declare_protocol(*tree_.asip, kSharedScope);
        for (std::size_t i = 0; i < tier_count(tree_); ++i) declare_tier(i);
        for (std::size_t i = 0; i < tier_count(tree_); ++i) resolve_tier(i);
        return {std::move(table_), std::move(diags_)};
    }

private:
    void error(const std::string& code, const std::string& message, const SourceSpan& span) {
        diags_.push_back({Severity::Error, code, message, span});
    }

    void undefined(const std::string& what, const Reference& ref, const std::string& tier) {
        error("E-UNDEF", what + " '" + ref.name + "' is not declared in " + tier, ref.span);
    }

    template <typename Map, typename V>
    void declare(Map& map, const std::string& name, V value, const std::string& what, const SourceSpan& span) {
        if (!map.emplace(name, value).second) error("E-DUP", "duplicate " + what + " '" + name + "'", span);
    }

    void declare_tiers() {
        table_.tiers.resize(tier_count(tree_));
        for (std::size_t i = 0; i < tier_count(tree_); ++i) {
            const Tier& t = tier_at(tree_, i);
            table_.tiers[i].name = t.name;
            declare(table_.tier_index, t.name, i, "tier", t.span);
        }
    }

    std::size_t tier_ref(const Name& n) {
        if (auto idx = table_.find_tier(n.text)) return *idx;
        error("E-UNDEF", "tier '" + n.text + "' is not declared", n.span);
        return 0;
    }

    void declare_protocol(const InteractionProtocol& p, int owner) {
        std::set<std::string> seen_messages;
        std::set<std::string> seen_channels;
        for (const auto& m : p.messages) {
            if (!seen_messages.insert(m.name).second) {
                error("E-DUP", "duplicate message '" + m.name + "'", m.span);
                continue;
            }
            table_.messages.push_back(
                {m.name, owner, tier_ref(m.sender), tier_ref(m.receiver), &m});
        }
        for (const auto& c : p.channels) {
            if (!seen_channels.insert(c.name).second) {
                error("E-DUP", "duplicate channel '" + c.name + "'", c.span);
                continue;
            }
            table_.channels.push_back(
                {c.name, owner, static_cast<std::size_t>(std::max<std::int64_t>(c.capacity, 0)), &c});
        }
    }

    void declare_tier(std::size_t index) {
        const Tier& t = tier_at(tree_, index);
        TierSymbols& sym = table_.tiers[index];
        for (std::size_t i = 0; i < t.policies.size(); ++i) {
            const PolicyDecl& p = t.policies[i];
            declare(sym.policies, p.name, i, "policy", p.span);
            for (std::size_t f = 0; f < p.fluents.size(); ++f) {
                declare(sym.fluents, p.fluents[f].name, FluentSymbol{i, f}, "fluent", p.fluents[f].span);
            }
        }
        for (std::size_t i = 0; i < t.actions.size(); ++i) declare(sym.actions, t.actions[i].name, i, "action", t.actions[i].span);
        for (std::size_t i = 0; i < t.events.size(); ++i) declare(sym.events, t.events[i].name, i, "event", t.events[i].span);
        for (std::size_t i = 0; i < t.metrics.size(); ++i) declare(sym.metrics, t.metrics[i].name, i, "metric", t.metrics[i].span);

        if (t.aeip) {
            const std::size_t first_message = table_.messages.size();
            const std::size_t first_channel = table_.channels.size();
            declare_protocol(*t.aeip, static_cast<int>(index));
            for (std::size_t m = first_message; m < table_.messages.size(); ++m) {
                sym.messages[table_.messages[m].name] = m;
            }
            for (std::size_t c = first_channel; c < table_.channels.size(); ++c) {
                sym.channels[table_.channels[c].name] = c;
            }
        }
        // Shared declarations are visible unless a local one of the same name exists,
        // which is reported as ambiguous.
        for (std::size_t m = 0; m < table_.messages.size(); ++m) {
            const auto& msg = table_.messages[m];
            if (msg.owner != kSharedScope) continue;
            auto [it, inserted] = sym.messages.emplace(msg.name, m);
            if (!inserted) {
                error("E-DUP", "message '" + msg.name + "' is declared in both ASIP and the AEIP of " + t.name,
                      table_.messages[it->second].decl->span);
            }
        }
        for (std::size_t c = 0; c < table_.channels.size(); ++c) {
            const auto& ch = table_.channels[c];
            if (ch.owner != kSharedScope) continue;
            auto [it, inserted] = sym.channels.emplace(ch.name, c);
            if (!inserted) {
                error("E-DUP", "channel '" + ch.name + "' is declared in both ASIP and the AEIP of " + t.name,
                      table_.channels[it->second].decl->span);
            }
        }
        for (const Name& f : t.friends) {
            auto idx = table_.find_tier(f.text);
            if (!idx || *idx == 0) error("E-UNDEF", "friend '" + f.text + "' is not a declared AE", f.span);
        }
    }

    void ref(const TierSymbols& sym, const Reference& r) {
        const std::map<std::string, std::size_t>* map = nullptr;
        const char* what = "";
        switch (r.ns) {
            case RefNamespace::Events: map = &sym.events; what = "event"; break;
            case RefNamespace::Actions: map = &sym.actions; what = "action"; break;
            case RefNamespace::Metrics: map = &sym.metrics; what = "metric"; break;
            case RefNamespace::Messages: map = &sym.messages; what = "message"; break;
            case RefNamespace::Channels: map = &sym.channels; what = "channel"; break;
            case RefNamespace::Fluents:
                if (!sym.fluents.count(r.name)) undefined("fluent", r, sym.name);
                return;
        }
        if (!map->count(r.name)) undefined(what, r, sym.name);
    }

    void expr(const TierSymbols& sym, const Expr& e, const std::set<std::string>& locals) {
        switch (e.kind) {
            case Expr::Kind::Metric:
            case Expr::Kind::Fluent: ref(sym, e.ref); break;
            case Expr::Kind::Local:
                if (!locals.count(e.local)) {
                    error("E-UNDEF", "local binding '" + e.local + "' is not bound here", e.span);
                }
                break;
            default: break;
        }
        for (const Expr& op : e.operands) expr(sym, op, locals);
    }

    void statements(const TierSymbols& sym, const std::vector<Statement>& body, std::set<std::string>& locals) {
        for (const Statement& s : body) {
            if (const auto* c = std::get_if<CallStmt>(&s)) {
                ref(sym, c->action);
                if (!c->binding.empty()) locals.insert(c->binding);
            } else if (const auto* a = std::get_if<AssignStmt>(&s)) {
                ref(sym, a->metric);
                expr(sym, a->value, locals);
            } else if (const auto* m = std::get_if<SendStmt>(&s)) {
                ref(sym, m->message);
                ref(sym, m->channel);
            }
        }
    }

    void resolve_tier(std::size_t index) {
        const Tier& t = tier_at(tree_, index);
        const TierSymbols& sym = table_.tiers[index];
        const std::set<std::string> none;

        for (const PolicyDecl& p : t.policies) {
            std::set<std::string> own;
            for (const FluentDecl& f : p.fluents) {
                own.insert(f.name);
                for (const auto& r : f.initiated_by) ref(sym, r);
                for (const auto& r : f.terminated_by) ref(sym, r);
            }
            for (const MappingDecl& m : p.mappings) {
                for (const auto& c : m.conditions) {
                    if (!own.count(c.name)) {
                        error("E-UNDEF", "fluent '" + c.name + "' is not declared in policy " + p.name, c.span);
                    }
                }
                for (const auto& a : m.do_actions) ref(sym, a);
            }
        }
        for (const ActionDecl& a : t.actions) {
            if (a.guard) expr(sym, *a.guard, none);
            std::set<std::string> locals;
            statements(sym, a.does, locals);
            if (a.ensures) expr(sym, *a.ensures, locals);
            std::set<std::string> onerr_locals;
            statements(sym, a.onerr_does, onerr_locals);
            for (const auto& r : a.triggers) ref(sym, r);
            for (const auto& r : a.onerr_triggers) ref(sym, r);
        }
        for (const EventDecl& e : t.events) {
            if (e.guard) expr(sym, *e.guard, none);
            for (const auto& c : e.activation) {
                if (c.kind != ActivationClause::Kind::Elapsed) ref(sym, c.ref);
            }
        }
    }

    const SpecificationTree& tree_;
    SymbolTable table_;
    std::vector<Diagnostic> diags_;
};

}  // namespace

ResolveResult resolve(const SpecificationTree& tree) {
    ResolveResult r = Resolver(tree).run();
    sort_diagnostics(r.diagnostics);
    return r;
}

}  // namespace asslkit::checker
