#include <algorithm>
#include <deque>
#include <map>

#include "asslkit/testgen/testgen.hpp"

namespace asslkit::testgen {

namespace {

using namespace syntax;

/// Declarations of one spec with their outgoing references.
class DeclGraph {
public:
    explicit DeclGraph(const checker::CheckedSpec& spec) : spec_(spec) {
        const auto& tree = *spec.tree;
        if (tree.asip) add_protocol("ASIP", *tree.asip);
        for (std::size_t t = 0; t < spec.tier_count(); ++t) {
            const Tier& tier = spec.tier(t);
            const std::string& name = tier.name;
            if (tier.aeip) add_protocol(name, *tier.aeip);
            for (const auto& p : tier.policies) {
                const std::string key = name + "/policy/" + p.name;
                add(key, &p);
                for (const auto& f : p.fluents) {
                    for (const auto& r : f.initiated_by) link(key, name + "/event/" + r.name);
                    for (const auto& r : f.terminated_by) link(key, name + "/event/" + r.name);
                }
                for (const auto& m : p.mappings) {
                    for (const auto& r : m.do_actions) link(key, name + "/action/" + r.name);
                }
            }
            for (const auto& a : tier.actions) {
                const std::string key = name + "/action/" + a.name;
                add(key, &a);
                if (a.guard) expr(t, key, *a.guard);
                if (a.ensures) expr(t, key, *a.ensures);
                for (const auto* body : {&a.does, &a.onerr_does}) {
                    for (const auto& s : *body) statement(t, key, s);
                }
                for (const auto& r : a.triggers) link(key, name + "/event/" + r.name);
                for (const auto& r : a.onerr_triggers) link(key, name + "/event/" + r.name);
            }
            for (const auto& e : tier.events) {
                const std::string key = name + "/event/" + e.name;
                add(key, &e);
                if (e.guard) expr(t, key, *e.guard);
                for (const auto& c : e.activation) {
                    switch (c.kind) {
                        case ActivationClause::Kind::Changed: link(key, name + "/metric/" + c.ref.name); break;
                        case ActivationClause::Kind::Sent:
                        case ActivationClause::Kind::Received: link(key, message_key(t, c.ref.name)); break;
                        case ActivationClause::Kind::Elapsed: break;
                    }
                }
            }
            for (const auto& m : tier.metrics) add(name + "/metric/" + m.name, &m);
        }
    }

    /// Structural equality of the declaration behind `key` in both graphs.
    bool same(const DeclGraph& other, const std::string& key) const {
        const auto a = decls_.find(key);
        const auto b = other.decls_.find(key);
        if (a == decls_.end() || b == other.decls_.end()) return false;
        return a->second == b->second;
    }

    std::vector<std::string> keys() const {
        std::vector<std::string> out;
        for (const auto& [k, _] : decls_) out.push_back(k);
        return out;
    }

    std::set<std::string> closure(const std::string& from) const {
        std::set<std::string> seen{from};
        std::deque<std::string> work{from};
        while (!work.empty()) {
            const std::string k = work.front();
            work.pop_front();
            auto it = edges_.find(k);
            if (it == edges_.end()) continue;
            for (const auto& next : it->second) {
                if (seen.insert(next).second) work.push_back(next);
            }
        }
        return seen;
    }

private:
    using Decl = std::variant<const PolicyDecl*, const ActionDecl*, const EventDecl*, const MetricDecl*,
                              const MessageDecl*, const ChannelDecl*>;

    struct Compared {
        Decl decl;
        bool operator==(const Compared& o) const {
            if (decl.index() != o.decl.index()) return false;
            return std::visit(
                [&](const auto* a) { return *a == *std::get<std::remove_cvref_t<decltype(a)>>(o.decl); }, decl);
        }
    };

    void add(const std::string& key, Decl d) { decls_.emplace(key, Compared{d}); }
    void link(const std::string& from, const std::string& to) { edges_[from].insert(to); }

    void add_protocol(const std::string& scope, const InteractionProtocol& p) {
        for (const auto& m : p.messages) {
            const std::string key = scope + "/message/" + m.name;
            add(key, &m);
            for (const auto& c : p.channels) link(key, scope + "/channel/" + c.name);
        }
        for (const auto& c : p.channels) add(scope + "/channel/" + c.name, &c);
    }

    std::string scope_of(int owner) const {
        return owner == checker::kSharedScope ? "ASIP" : spec_.symbols.tiers[static_cast<std::size_t>(owner)].name;
    }

    std::string message_key(std::size_t tier, const std::string& name) const {
        const auto& syms = spec_.symbols.tiers[tier].messages;
        auto it = syms.find(name);
        if (it == syms.end()) return "?/message/" + name;
        return scope_of(spec_.symbols.messages[it->second].owner) + "/message/" + name;
    }

    std::string channel_key(std::size_t tier, const std::string& name) const {
        const auto& syms = spec_.symbols.tiers[tier].channels;
        auto it = syms.find(name);
        if (it == syms.end()) return "?/channel/" + name;
        return scope_of(spec_.symbols.channels[it->second].owner) + "/channel/" + name;
    }

    void expr(std::size_t tier, const std::string& from, const Expr& e) {
        const std::string& name = spec_.symbols.tiers[tier].name;
        if (e.kind == Expr::Kind::Metric) link(from, name + "/metric/" + e.ref.name);
        if (e.kind == Expr::Kind::Fluent) {
            const auto& fl = spec_.symbols.tiers[tier].fluents;
            auto it = fl.find(e.ref.name);
            if (it != fl.end()) link(from, name + "/policy/" + spec_.tier(tier).policies[it->second.policy].name);
        }
        for (const auto& o : e.operands) expr(tier, from, o);
    }

    void statement(std::size_t tier, const std::string& from, const Statement& s) {
        const std::string& name = spec_.symbols.tiers[tier].name;
        if (const auto* c = std::get_if<CallStmt>(&s)) link(from, name + "/action/" + c->action.name);
        if (const auto* a = std::get_if<AssignStmt>(&s)) {
            link(from, name + "/metric/" + a->metric.name);
            expr(tier, from, a->value);
        }
        if (const auto* m = std::get_if<SendStmt>(&s)) {
            link(from, message_key(tier, m->message.name));
            link(from, channel_key(tier, m->channel.name));
        }
    }

    const checker::CheckedSpec& spec_;
    std::map<std::string, Compared> decls_;
    std::map<std::string, std::set<std::string>> edges_;
};

void impacted_in(const runtime::Model& model, const DeclGraph& graph, const std::set<std::string>& changed,
                 std::set<std::string>& out) {
    for (PolicyRef p : all_policies(model)) {
        const std::string key = model.tiers[p.tier].name + "/policy/" + model.tiers[p.tier].policies[p.policy];
        for (const auto& k : graph.closure(key)) {
            if (changed.count(k)) {
                out.insert(policy_name(model, p));
                break;
            }
        }
    }
}

}  // namespace

bool ImpactSet::contains(const std::string& policy) const {
    return std::binary_search(policies.begin(), policies.end(), policy);
}

ImpactSet impact(const runtime::Model& old_model, const runtime::Model& new_model) {
    const DeclGraph before(old_model.spec);
    const DeclGraph after(new_model.spec);
    std::set<std::string> changed;
    for (const auto& k : before.keys()) {
        if (!before.same(after, k)) changed.insert(k);
    }
    for (const auto& k : after.keys()) {
        if (!after.same(before, k)) changed.insert(k);
    }
    std::set<std::string> policies;
    impacted_in(old_model, before, changed, policies);
    impacted_in(new_model, after, changed, policies);
    ImpactSet out;
    out.changed.assign(changed.begin(), changed.end());
    out.policies.assign(policies.begin(), policies.end());
    return out;
}

Suite regenerate(const Suite& old_suite, const runtime::Model& old_model, const runtime::Model& new_model,
                 std::size_t* regenerated) {
    const ImpactSet imp = impact(old_model, new_model);
    Suite out;
    std::size_t count = 0;
    for (PolicyRef p : all_policies(new_model)) {
        const std::string name = policy_name(new_model, p);
        if (imp.contains(name)) {
            auto tests = generate(new_model, enumerate_paths(new_model, p).paths);
            count += tests.size();
            out.insert(out.end(), tests.begin(), tests.end());
            continue;
        }
        for (const auto& t : old_suite) {
            if (t.policy == name) out.push_back(t);
        }
    }
    if (regenerated) *regenerated = count;
    return out;
}

}  // namespace asslkit::testgen
