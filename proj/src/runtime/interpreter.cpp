#include "asslkit/runtime/interpreter.hpp"

#include <algorithm>

namespace asslkit::runtime {

namespace {

using Kind = CompiledExpr::Kind;

bool compare(syntax::CompareOp op, const Value& a, const Value& b) {
    using syntax::CompareOp;
    switch (op) {
        case CompareOp::Eq: return a == b;
        case CompareOp::Ne: return a != b;
        case CompareOp::Lt: return a < b;
        case CompareOp::Le: return a <= b;
        case CompareOp::Gt: return a > b;
        case CompareOp::Ge: return a >= b;
    }
    return false;
}

Value arithmetic(bool add, const Value& a, const Value& b) {
    if (const auto* x = std::get_if<std::int64_t>(&a)) {
        // Two's-complement wraparound instead of signed overflow.
        auto ux = static_cast<std::uint64_t>(*x);
        auto uy = static_cast<std::uint64_t>(std::get<std::int64_t>(b));
        return static_cast<std::int64_t>(add ? ux + uy : ux - uy);
    }
    double x = std::get<double>(a);
    double y = std::get<double>(b);
    return add ? x + y : x - y;
}

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// FNV-1a over fluents, channel contents and timers. Metrics are left out so that
/// abstract verifier states choose the same interleaving as concrete runs.
std::uint64_t interleaving_digest(const RuntimeState& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (i * 8)) & 0xff;
            h *= 0x100000001b3ULL;
        }
    };
    for (const auto& t : s.tiers) {
        mix(t.fluents.size());
        for (bool f : t.fluents) mix(f);
    }
    for (const auto& q : s.channels) {
        mix(q.size());
        for (auto m : q) mix(m);
    }
    for (auto t : s.timers) mix(static_cast<std::uint64_t>(t));
    return h;
}

}  // namespace

Value evaluate(const CompiledExpr& e, const TierState& tier, const std::vector<bool>* locals) {
    switch (e.kind) {
        case Kind::Literal: return e.literal;
        case Kind::Metric: return tier.metrics[e.slot];
        case Kind::Fluent: return static_cast<bool>(tier.fluents[e.slot]);
        case Kind::Local: return locals ? static_cast<bool>((*locals)[e.slot]) : false;
        case Kind::Not: return !std::get<bool>(evaluate(e.operands[0], tier, locals));
        case Kind::And:
            return std::get<bool>(evaluate(e.operands[0], tier, locals)) &&
                   std::get<bool>(evaluate(e.operands[1], tier, locals));
        case Kind::Or:
            return std::get<bool>(evaluate(e.operands[0], tier, locals)) ||
                   std::get<bool>(evaluate(e.operands[1], tier, locals));
        case Kind::Compare:
            return compare(e.op, evaluate(e.operands[0], tier, locals), evaluate(e.operands[1], tier, locals));
        case Kind::Add:
        case Kind::Sub:
            return arithmetic(e.kind == Kind::Add, evaluate(e.operands[0], tier, locals),
                              evaluate(e.operands[1], tier, locals));
        case Kind::Neg: {
            Value v = evaluate(e.operands[0], tier, locals);
            if (auto* i = std::get_if<std::int64_t>(&v)) return static_cast<std::int64_t>(0 - static_cast<std::uint64_t>(*i));
            return -std::get<double>(v);
        }
    }
    return false;
}

void Machine::record(RecordKind kind, std::string subject, std::string detail) {
    if (trace_) trace_->append(state_.tick, kind, std::move(subject), std::move(detail));
}

void Machine::enqueue(EventKey e, Cause cause, std::optional<PreValue> pre) {
    state_.pending.push_back({e, std::move(cause), state_.tick, std::move(pre)});
}

bool Machine::eval_guard(const CompiledExpr& e, std::size_t tier, const std::vector<bool>* locals) const {
    return std::get<bool>(evaluate(e, state_.tiers[tier], locals));
}

void Machine::raise(const EventOccurrence& occ) {
    const std::size_t t = occ.event.tier;
    const TierModel& tm = model_.tiers[t];
    const EventModel& ev = tm.events[occ.event.event];
    const std::string name = tracing() ? model_.event_name(occ.event) : std::string();
    last_raised_.reset();

    if (ev.guard) {
        bool pass;
        if (options_.guard_snapshot == GuardSnapshot::Pre && occ.pre) {
            Value& slot = state_.tiers[t].metrics[occ.pre->metric];
            Value current = slot;
            slot = occ.pre->old;
            pass = eval_guard(*ev.guard, t, nullptr);
            slot = std::move(current);
        } else {
            pass = eval_guard(*ev.guard, t, nullptr);
        }
        if (!pass) {
            if (tracing()) record(RecordKind::EventSuppressed, name, "cause=" + occ.cause.describe());
            return;
        }
    }
    last_raised_ = occ.event;
    if (tracing()) record(RecordKind::EventRaised, name, "cause=" + occ.cause.describe());

    std::vector<bool> initiated(tm.fluents.size(), false);
    bool any_initiated = false;
    auto& fluents = state_.tiers[t].fluents;
    for (std::size_t f = 0; f < tm.fluents.size(); ++f) {
        const FluentModel& fm = tm.fluents[f];
        const auto contains = [&](const std::vector<std::size_t>& v) {
            return std::find(v.begin(), v.end(), occ.event.event) != v.end();
        };
        if (!fluents[f] && contains(fm.initiated_by)) {
            fluents[f] = true;
            initiated[f] = true;
            any_initiated = true;
            if (tracing()) record(RecordKind::FluentInitiated, model_.qualified(t, fm.name), "by=" + name);
        } else if (fluents[f] && contains(fm.terminated_by)) {
            fluents[f] = false;
            if (tracing()) record(RecordKind::FluentTerminated, model_.qualified(t, fm.name), "by=" + name);
        }
    }
    if (!any_initiated) return;

    // Fluents only change while raising, so the set of firing mappings is fixed here.
    std::vector<const MappingModel*> firing;
    for (const MappingModel& m : tm.mappings) {
        bool rising = false;
        bool all_active = true;
        for (std::size_t c : m.conditions) {
            rising = rising || initiated[c];
            all_active = all_active && fluents[c];
        }
        if (rising && all_active) firing.push_back(&m);
    }
    for (const MappingModel* m : firing) {
        const std::string policy = model_.qualified(t, tm.policies[m->policy]);
        if (tracing()) record(RecordKind::MappingFired, policy, "mapping=" + std::to_string(m->ordinal));
        for (std::size_t a : m->actions) {
            execute_action(t, a, 1, tracing() ? "mapping=" + policy + "#" + std::to_string(m->ordinal) : "");
        }
    }
}

bool Machine::step() {
    if (state_.pending.empty()) {
        last_raised_.reset();
        return false;
    }
    EventOccurrence occ = std::move(state_.pending.front());
    state_.pending.pop_front();
    raise(occ);
    return true;
}

void Machine::assign_metric(std::size_t tier, std::size_t metric, Value value) {
    Value& slot = state_.tiers[tier].metrics[metric];
    const MetricModel& mm = model_.tiers[tier].metrics[metric];
    Value old = std::move(slot);
    slot = std::move(value);
    if (tracing()) {
        record(RecordKind::MetricAssigned, model_.qualified(tier, mm.name),
               syntax::render_value(old) + " -> " + syntax::render_value(slot));
    }
    if (mm.changed_subscribers.empty()) return;
    const std::string clause = "CHANGED(" + model_.qualified(tier, mm.name) + ")";
    for (std::size_t e : mm.changed_subscribers) {
        enqueue({tier, e}, {Cause::Kind::Activation, clause}, PreValue{metric, old});
    }
}

void Machine::send_message(std::size_t message, std::size_t channel) {
    const MessageModel& msg = model_.messages[message];
    const ChannelModel& ch = model_.channels[channel];
    auto& queue = state_.channels[channel];
    if (queue.size() >= ch.capacity) {
        if (tracing()) record(RecordKind::MessageSent, msg.qualified, "channel=" + ch.qualified + " dropped");
        return;
    }
    queue.push_back(message);
    if (tracing()) record(RecordKind::MessageSent, msg.qualified, "channel=" + ch.qualified);
    for (const EventKey& e : msg.sent_subscribers) {
        enqueue(e, {Cause::Kind::Activation, "SENT(" + msg.qualified + ")"});
    }
}

bool Machine::run_block(std::size_t tier, const std::vector<CompiledStatement>& body, std::vector<bool>& locals,
                        int depth, const std::string& self, std::string& error) {
    for (const CompiledStatement& s : body) {
        switch (s.kind) {
            case CompiledStatement::Kind::Call: {
                Outcome out = execute_action(tier, s.target, depth + 1, tracing() ? "call=" + self : "");
                if (out.kind == Outcome::Kind::Error) {
                    error = "call " + model_.qualified(tier, model_.tiers[tier].actions[s.target].name) + " failed";
                    return false;
                }
                if (s.binding >= 0) locals[static_cast<std::size_t>(s.binding)] = out.kind == Outcome::Kind::Success;
                break;
            }
            case CompiledStatement::Kind::Assign:
                assign_metric(tier, s.target, evaluate(s.value, state_.tiers[tier], &locals));
                break;
            case CompiledStatement::Kind::Send: send_message(s.target, s.channel); break;
            case CompiledStatement::Kind::Fail: error = s.reason; return false;
        }
    }
    return true;
}

Outcome Machine::execute_action(std::size_t tier, std::size_t action, int depth, const std::string& cause) {
    const ActionModel& am = model_.tiers[tier].actions[action];
    const std::string self = model_.qualified(tier, am.name);
    if (depth > options_.max_call_depth) {
        throw DepthExceeded("call depth " + std::to_string(depth) + " exceeded at " + self);
    }
    if (am.guard && !eval_guard(*am.guard, tier, nullptr)) {
        if (tracing()) record(RecordKind::ActionRejected, self, "guard=false");
        return {Outcome::Kind::GuardRejected, {}};
    }
    if (tracing()) record(RecordKind::ActionStarted, self, cause);

    std::vector<bool> locals(am.local_slots, false);
    std::string error;
    bool ok = run_block(tier, am.does, locals, depth, self, error);
    if (ok && am.ensures && !std::get<bool>(evaluate(*am.ensures, state_.tiers[tier], &locals))) {
        if (tracing()) record(RecordKind::EnsuresViolated, self, "");
        error = "ensures violated";
        ok = false;
    }
    if (ok) {
        if (tracing()) record(RecordKind::ActionSucceeded, self, "");
        for (std::size_t e : am.triggers) enqueue({tier, e}, {Cause::Kind::Triggered, self});
        return {Outcome::Kind::Success, {}};
    }
    std::vector<bool> onerr_locals(am.local_slots, false);
    std::string nested;
    run_block(tier, am.onerr_does, onerr_locals, depth, self, nested);
    if (tracing()) record(RecordKind::ActionFailed, self, "reason=" + error);
    for (std::size_t e : am.onerr_triggers) enqueue({tier, e}, {Cause::Kind::OnError, self});
    return {Outcome::Kind::Error, error};
}

void Machine::begin_tick() {
    ++state_.tick;
    struct Work {
        bool delivery;
        std::size_t index;  // channel or timer
        std::size_t message;
    };
    const std::uint64_t digest = interleaving_digest(state_);
    std::vector<std::vector<Work>> per_tier(model_.tiers.size());
    for (std::size_t c = 0; c < state_.channels.size(); ++c) {
        auto& q = state_.channels[c];
        if (q.empty()) continue;
        const std::size_t m = q.front();
        q.pop_front();
        per_tier[model_.messages[m].receiver].push_back({true, c, m});
    }
    for (std::size_t i = 0; i < model_.timers.size(); ++i) {
        if (--state_.timers[i] > 0) continue;
        state_.timers[i] = model_.timers[i].period;
        per_tier[model_.timers[i].event.tier].push_back({false, i, 0});
    }

    std::vector<std::size_t> order;
    for (std::size_t t = 0; t < per_tier.size(); ++t) {
        if (!per_tier[t].empty()) order.push_back(t);
    }
    if (order.size() > 1) {
        std::uint64_t rng = state_.seed ^ digest;
        for (std::size_t i = order.size() - 1; i > 0; --i) {
            std::swap(order[i], order[splitmix64(rng) % (i + 1)]);
        }
    }
    for (std::size_t t : order) {
        for (const Work& w : per_tier[t]) {
            if (w.delivery) {
                const MessageModel& msg = model_.messages[w.message];
                if (tracing()) {
                    record(RecordKind::MessageReceived, msg.qualified,
                           "channel=" + model_.channels[w.index].qualified + " receiver=" + model_.tiers[t].name);
                }
                for (std::size_t e : msg.received_subscribers) {
                    enqueue({t, e}, {Cause::Kind::Activation, "RECEIVED(" + msg.qualified + ")"});
                }
            } else {
                const TimerModel& timer = model_.timers[w.index];
                enqueue(timer.event, {Cause::Kind::Activation, "ELAPSED(" + std::to_string(timer.period) + ")"});
            }
        }
    }
}

void Machine::apply(const Stimulus& s, std::size_t step_number) {
    switch (s.kind) {
        case Stimulus::Kind::Inject:
            enqueue({s.tier, s.target}, {Cause::Kind::Injected, "step " + std::to_string(step_number)});
            break;
        case Stimulus::Kind::Set: assign_metric(s.tier, s.target, s.value); break;
        case Stimulus::Kind::Send: send_message(s.target, s.channel); break;
        case Stimulus::Kind::Halt: state_.halted = true; break;
    }
}

void Machine::drain() {
    std::int64_t steps = 0;
    while (step()) {
        if (++steps > options_.max_steps_per_tick) {
            throw DepthExceeded("more than " + std::to_string(options_.max_steps_per_tick) +
                                " event occurrences in tick " + std::to_string(state_.tick));
        }
    }
}

bool Machine::quiescent() const {
    if (!state_.pending.empty() || !model_.timers.empty()) return false;
    return std::all_of(state_.channels.begin(), state_.channels.end(), [](const auto& q) { return q.empty(); });
}

std::string_view stop_reason_name(StopReason r) {
    switch (r) {
        case StopReason::Quiescent: return "quiescent";
        case StopReason::Halted: return "halted";
        case StopReason::MaxTicks: return "max-ticks";
        case StopReason::DepthExceeded: return "depth-exceeded";
    }
    return "?";
}

RunResult run(const Model& model, const Scenario& scenario, std::int64_t max_ticks, std::uint64_t seed,
              const Options& options, const Observer& observer) {
    RunResult result;
    RuntimeState& state = result.final_state;
    state = init(model, seed);
    Machine machine(model, options, state, &result.trace);

    auto drain = [&] {
        std::int64_t steps = 0;
        while (machine.step()) {
            if (observer) {
                Transition tr;
                tr.kind = Transition::Kind::Step;
                tr.raised = machine.last_raised();
                observer(tr, state);
            }
            if (++steps > options.max_steps_per_tick) {
                throw DepthExceeded("more than " + std::to_string(options.max_steps_per_tick) +
                                    " event occurrences in tick " + std::to_string(state.tick));
            }
        }
    };

    std::size_t next = 0;
    try {
        while (true) {
            while (next < scenario.steps.size() && scenario.steps[next].tick <= state.tick) {
                const Stimulus& s = scenario.steps[next].stimulus;
                ++next;
                machine.apply(s, next);
                if (observer) {
                    Transition tr;
                    tr.kind = Transition::Kind::Stimulus;
                    tr.stimulus = &s;
                    observer(tr, state);
                }
                if (state.halted) {
                    result.reason = StopReason::Halted;
                    return result;
                }
                drain();
            }
            if (next == scenario.steps.size() && machine.quiescent()) {
                result.reason = StopReason::Quiescent;
                return result;
            }
            if (state.tick >= max_ticks) {
                result.reason = StopReason::MaxTicks;
                return result;
            }
            machine.begin_tick();
            if (observer) {
                Transition tr;
                tr.kind = Transition::Kind::Tick;
                observer(tr, state);
            }
            drain();
        }
    } catch (const DepthExceeded& e) {
        result.trace.append(state.tick, RecordKind::DepthExceeded, "run", e.what());
        state.halted = true;
        result.reason = StopReason::DepthExceeded;
    }
    return result;
}

}  // namespace asslkit::runtime
