#include <algorithm>
#include <functional>

#include "asslkit/testgen/testgen.hpp"

namespace asslkit::testgen {

namespace {

using runtime::CompiledExpr;
using runtime::CompiledStatement;
using runtime::Model;
using runtime::Stimulus;
using runtime::Value;

constexpr std::size_t kMaxAttempts = 4096;

class PathPlanner {
public:
    PathPlanner(const Model& model, const PolicyPath& path)
        : model_(model), path_(path), tier_(path.policy.tier), tm_(model.tiers[path.policy.tier]) {
        relevant_.assign(tm_.metrics.size(), false);
        candidates_.resize(tm_.metrics.size());
        collect_candidates();
        collect_relevant();
    }

    GeneratedTest plan() {
        GeneratedTest test;
        test.policy = policy_name(model_, path_.policy);
        test.id = path_.id;
        test.assertions = assertions();

        const std::vector<Stimulus> initiators = raise_options(path_.initiator);
        if (initiators.empty()) {
            test.note = "event " + tm_.events[path_.initiator].name + " cannot be raised by a stimulus";
            return test;
        }
        std::vector<std::optional<Stimulus>> followups{std::nullopt};
        for (const auto& s : raise_options(path_.terminator)) followups.push_back(s);

        std::vector<std::size_t> metrics;
        for (std::size_t m = 0; m < relevant_.size(); ++m) {
            if (relevant_[m] && candidates_[m].size() > 1) metrics.push_back(m);
        }
        std::size_t attempts = 0;
        bool found = false;
        const auto try_presets = [&](const std::vector<std::pair<std::size_t, Value>>& presets) {
            for (const auto& init : initiators) {
                for (const auto& follow : followups) {
                    if (++attempts > kMaxAttempts) return true;
                    std::string text = scenario_text(presets, init, follow);
                    test.scenario_text = text;
                    if (run_test(model_, test).outcome.passed) {
                        found = true;
                        return true;
                    }
                }
            }
            return false;
        };
        for (std::size_t size = 0; size <= metrics.size() && !found && attempts <= kMaxAttempts; ++size) {
            if (for_each_preset(metrics, size, try_presets)) break;
        }
        if (found) {
            test.feasible = true;
        } else {
            test.scenario_text.clear();
            test.note = attempts > kMaxAttempts ? "search budget exhausted before forcing the branches"
                                                : "no metric presets force the chosen branches";
        }
        return test;
    }

private:
    /// Non-initial values of `size` metrics, in index then candidate order.
    bool for_each_preset(const std::vector<std::size_t>& metrics, std::size_t size,
                         const std::function<bool(const std::vector<std::pair<std::size_t, Value>>&)>& visit) {
        std::vector<std::size_t> chosen;
        std::vector<std::pair<std::size_t, Value>> presets;
        std::function<bool(std::size_t)> pick = [&](std::size_t from) -> bool {
            if (chosen.size() == size) {
                std::function<bool(std::size_t)> values = [&](std::size_t i) -> bool {
                    if (i == chosen.size()) return visit(presets);
                    const auto& cands = candidates_[chosen[i]];
                    for (std::size_t c = 1; c < cands.size(); ++c) {
                        presets.push_back({chosen[i], cands[c]});
                        const bool stop = values(i + 1);
                        presets.pop_back();
                        if (stop) return true;
                    }
                    return false;
                };
                return values(0);
            }
            for (std::size_t i = from; i < metrics.size(); ++i) {
                chosen.push_back(metrics[i]);
                const bool stop = pick(i + 1);
                chosen.pop_back();
                if (stop) return true;
            }
            return false;
        };
        return pick(0);
    }

    std::string scenario_text(const std::vector<std::pair<std::size_t, Value>>& presets, const Stimulus& init,
                              const std::optional<Stimulus>& follow) const {
        runtime::Scenario sc;
        sc.name = path_.id;
        for (const auto& [m, v] : presets) {
            Stimulus s;
            s.kind = Stimulus::Kind::Set;
            s.tier = tier_;
            s.target = m;
            s.value = v;
            sc.steps.push_back({0, s});
        }
        const auto& mapping = tm_.mappings[path_.mapping];
        for (std::size_t f : mapping.conditions) {
            if (f == path_.fluent) continue;
            for (std::size_t e : tm_.fluents[f].initiated_by) {
                auto options = raise_options(e);
                if (options.empty()) continue;
                sc.steps.push_back({1, options.front()});
                break;
            }
        }
        sc.steps.push_back({2, init});
        if (follow) sc.steps.push_back({4, *follow});
        Stimulus halt;
        halt.kind = Stimulus::Kind::Halt;
        sc.steps.push_back({6, halt});
        return runtime::write_scenario(model_, sc);
    }

    std::vector<Stimulus> raise_options(std::size_t event) const {
        std::vector<Stimulus> out;
        if (tm_.events[event].injectable) {
            Stimulus s;
            s.kind = Stimulus::Kind::Inject;
            s.tier = tier_;
            s.target = event;
            out.push_back(s);
        }
        for (std::size_t m = 0; m < tm_.metrics.size(); ++m) {
            const auto& subs = tm_.metrics[m].changed_subscribers;
            if (std::find(subs.begin(), subs.end(), event) == subs.end()) continue;
            for (const Value& v : candidates_[m]) {
                Stimulus s;
                s.kind = Stimulus::Kind::Set;
                s.tier = tier_;
                s.target = m;
                s.value = v;
                out.push_back(s);
            }
        }
        for (std::size_t i = 0; i < model_.messages.size(); ++i) {
            const auto& msg = model_.messages[i];
            const bool sent = std::find(msg.sent_subscribers.begin(), msg.sent_subscribers.end(),
                                        runtime::EventKey{tier_, event}) != msg.sent_subscribers.end();
            const bool received = msg.receiver == tier_ && std::find(msg.received_subscribers.begin(),
                                                                     msg.received_subscribers.end(),
                                                                     event) != msg.received_subscribers.end();
            if (!sent && !received) continue;
            if (auto channel = channel_for(i)) {
                Stimulus s;
                s.kind = Stimulus::Kind::Send;
                s.tier = msg.sender;
                s.target = i;
                s.channel = *channel;
                out.push_back(s);
            }
        }
        return out;
    }

    /// The first channel declared in the message's own protocol, else the first channel.
    std::optional<std::size_t> channel_for(std::size_t message) const {
        if (model_.channels.empty()) return std::nullopt;
        const std::string& q = model_.messages[message].qualified;
        const std::string scope = q.substr(0, q.find('.'));
        for (std::size_t c = 0; c < model_.channels.size(); ++c) {
            const std::string& cq = model_.channels[c].qualified;
            if (cq.substr(0, cq.find('.')) == scope) return c;
        }
        return 0;
    }

    void add_candidate(std::size_t m, Value v) {
        const auto type = tm_.metrics[m].type;
        if (type == runtime::ValueType::Real) {
            if (const auto* i = std::get_if<std::int64_t>(&v)) v = static_cast<double>(*i);
        }
        if (syntax::type_of(v) != type) return;
        auto& c = candidates_[m];
        if (std::find(c.begin(), c.end(), v) == c.end()) c.push_back(std::move(v));
    }

    void around(std::size_t m, const Value& v) {
        add_candidate(m, v);
        if (const auto* i = std::get_if<std::int64_t>(&v)) {
            add_candidate(m, Value{*i - 1});
            add_candidate(m, Value{*i + 1});
        } else if (const auto* d = std::get_if<double>(&v)) {
            add_candidate(m, Value{*d - 0.5});
            add_candidate(m, Value{*d + 0.5});
        }
    }

    void thresholds(const CompiledExpr& e) {
        using K = CompiledExpr::Kind;
        if (e.kind == K::Compare) {
            const auto& a = e.operands[0];
            const auto& b = e.operands[1];
            if (a.kind == K::Metric && b.kind == K::Literal) around(a.slot, b.literal);
            if (b.kind == K::Metric && a.kind == K::Literal) around(b.slot, a.literal);
            if (a.kind == K::Metric && b.kind == K::Metric) {
                around(a.slot, tm_.metrics[b.slot].initial);
                around(b.slot, tm_.metrics[a.slot].initial);
            }
        }
        for (const auto& o : e.operands) thresholds(o);
    }

    void collect_candidates() {
        for (std::size_t m = 0; m < tm_.metrics.size(); ++m) {
            const auto& mm = tm_.metrics[m];
            add_candidate(m, mm.initial);
            if (mm.type == runtime::ValueType::Boolean) add_candidate(m, Value{!std::get<bool>(mm.initial)});
        }
        for (const auto& ev : tm_.events) {
            if (ev.guard) thresholds(*ev.guard);
        }
        for (const auto& am : tm_.actions) {
            if (am.guard) thresholds(*am.guard);
            if (am.ensures) thresholds(*am.ensures);
            for (const auto* body : {&am.does, &am.onerr_does}) {
                for (const auto& s : *body) {
                    if (s.kind != CompiledStatement::Kind::Assign) continue;
                    thresholds(s.value);
                    if (s.value.kind == CompiledExpr::Kind::Literal) around(s.target, s.value.literal);
                }
            }
        }
    }

    void reads(const CompiledExpr& e) {
        if (e.kind == CompiledExpr::Kind::Metric) relevant_[e.slot] = true;
        for (const auto& o : e.operands) reads(o);
    }

    void action_reads(std::size_t a, std::vector<bool>& seen) {
        if (seen[a]) return;
        seen[a] = true;
        const auto& am = tm_.actions[a];
        if (am.guard) reads(*am.guard);
        if (am.ensures) reads(*am.ensures);
        for (const auto& s : am.does) {
            if (s.kind == CompiledStatement::Kind::Assign) reads(s.value);
            if (s.kind == CompiledStatement::Kind::Call) action_reads(s.target, seen);
        }
        for (std::size_t e : am.onerr_triggers) event_reads(e);
    }

    void event_reads(std::size_t e) {
        if (tm_.events[e].guard) reads(*tm_.events[e].guard);
    }

    void collect_relevant() {
        std::vector<bool> seen(tm_.actions.size(), false);
        for (std::size_t a : tm_.mappings[path_.mapping].actions) action_reads(a, seen);
        event_reads(path_.initiator);
        event_reads(path_.terminator);
    }

    std::vector<Assertion> assertions() const {
        std::vector<Assertion> out;
        const auto line = [&](const std::string& kind, const std::string& subject, const std::string& detail,
                              bool negative = false) {
            Assertion a;
            a.negative = negative;
            a.fields[2] = kind;
            a.fields[3] = subject;
            a.fields[4] = detail;
            out.push_back(std::move(a));
        };
        const auto event = [&](std::size_t e) { return model_.qualified(tier_, tm_.events[e].name); };
        const auto& mapping = tm_.mappings[path_.mapping];
        const std::string policy = policy_name(model_, path_.policy);
        const std::string fluent = model_.qualified(tier_, tm_.fluents[path_.fluent].name);

        line("EventRaised", event(path_.initiator), "*");
        line("FluentInitiated", fluent, "by=" + event(path_.initiator));
        line("MappingFired", policy, "mapping=" + std::to_string(mapping.ordinal));
        const std::string started_by = "mapping=" + policy + "#" + std::to_string(mapping.ordinal);
        for (std::size_t i = 0; i < mapping.actions.size(); ++i) {
            const std::string action = model_.qualified(tier_, tm_.actions[mapping.actions[i]].name);
            switch (path_.branches[i]) {
                case Branch::GuardReject:
                    line("ActionRejected", action, "guard=false");
                    line("ActionStarted", action, started_by, true);
                    break;
                case Branch::Success:
                    line("ActionStarted", action, started_by);
                    line("ActionSucceeded", action, "*");
                    break;
                case Branch::Error:
                    line("ActionStarted", action, started_by);
                    line("ActionFailed", action, "*");
                    break;
            }
        }
        for (std::size_t i = 0; i < mapping.actions.size(); ++i) {
            if (path_.branches[i] != Branch::Error) continue;
            const auto& am = tm_.actions[mapping.actions[i]];
            for (std::size_t e : am.onerr_triggers) {
                line("EventRaised", event(e), "cause=onerr:" + model_.qualified(tier_, am.name));
            }
        }
        line("EventRaised", event(path_.terminator), "*");
        line("FluentTerminated", fluent, "by=" + event(path_.terminator));
        return out;
    }

    const Model& model_;
    const PolicyPath& path_;
    std::size_t tier_;
    const runtime::TierModel& tm_;
    std::vector<bool> relevant_;
    std::vector<std::vector<Value>> candidates_;
};

}  // namespace

std::vector<GeneratedTest> generate(const Model& model, const std::vector<PolicyPath>& paths) {
    std::vector<GeneratedTest> out;
    for (const auto& p : paths) out.push_back(PathPlanner(model, p).plan());
    return out;
}

Suite generate_all(const Model& model) {
    Suite suite;
    for (PolicyRef p : all_policies(model)) {
        auto tests = generate(model, enumerate_paths(model, p).paths);
        suite.insert(suite.end(), tests.begin(), tests.end());
    }
    return suite;
}

TestRun run_test(const Model& model, const GeneratedTest& test) {
    TestRun r;
    const runtime::Scenario sc = runtime::parse_scenario(model, test.scenario_text);
    r.run = runtime::run(model, sc, kTestMaxTicks, sc.seed.value_or(0));
    r.outcome = check_assertions(test.assertions, r.run.trace);
    return r;
}

double Coverage::ratio() const {
    if (required.empty()) return 1.0;
    std::size_t hit = 0;
    for (const auto& r : required) hit += covered.count(r);
    return static_cast<double>(hit) / static_cast<double>(required.size());
}

Coverage measure_coverage(const Model& model, const std::vector<PolicyPath>& paths,
                          const std::vector<runtime::Trace>& traces) {
    Coverage c;
    for (const auto& p : paths) {
        const auto& tm = model.tiers[p.policy.tier];
        const auto& mapping = tm.mappings[p.mapping];
        for (std::size_t i = 0; i < mapping.actions.size(); ++i) {
            c.required.insert({model.qualified(p.policy.tier, tm.actions[mapping.actions[i]].name), p.branches[i]});
        }
    }
    for (const auto& t : traces) {
        for (const auto& r : t.records) {
            using runtime::RecordKind;
            if (r.kind == RecordKind::ActionRejected) c.covered.insert({r.subject, Branch::GuardReject});
            if (r.kind == RecordKind::ActionSucceeded) c.covered.insert({r.subject, Branch::Success});
            if (r.kind == RecordKind::ActionFailed) c.covered.insert({r.subject, Branch::Error});
        }
    }
    return c;
}

}  // namespace asslkit::testgen
