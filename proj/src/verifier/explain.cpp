#include <sstream>
#include <stdexcept>

#include "asslkit/verifier/check.hpp"

namespace asslkit::verifier {

namespace {

using runtime::Model;

std::string describe_state(const Lts& lts, std::size_t s) {
    std::string out = "s" + std::to_string(s) + " {";
    for (std::size_t i = 0; i < lts.labels[s].size(); ++i) {
        out += i ? ", " : "";
        out += lts.labels[s][i];
    }
    return out + "}";
}

/// States the replayed run must pass through, in order.
std::vector<std::size_t> expected_states(const Counterexample& cex) {
    std::vector<std::size_t> out = cex.states;
    if (cex.loop_start && !cex.loop_label.empty()) out.push_back(cex.states[*cex.loop_start]);
    return out;
}

std::vector<std::string> expected_steps(const Counterexample& cex) {
    std::vector<std::string> out = cex.steps;
    if (cex.loop_start && !cex.loop_label.empty()) out.push_back(cex.loop_label);
    return out;
}

const Counterexample& require_cex(const Verdict& verdict) {
    if (verdict.result != Verdict::Result::Violated || !verdict.counterexample) {
        throw std::logic_error("only violated verdicts have a counterexample");
    }
    return *verdict.counterexample;
}

}  // namespace

Explanation explain(const Model& model, const Lts& lts, const Property& property, const Verdict& verdict) {
    const Counterexample& cex = require_cex(verdict);
    Explanation ex;
    std::ostringstream text;
    text << "Violated: " << property.text << "\n";
    text << "counterexample (" << cex.steps.size() << (cex.steps.size() == 1 ? " step" : " steps")
         << (cex.loop_start ? ", lasso" : "") << "):\n";
    text << "  " << describe_state(lts, cex.states[0]) << "\n";
    for (std::size_t i = 0; i < cex.steps.size(); ++i) {
        text << "  " << (i + 1) << ". " << cex.steps[i] << "\n";
        text << "     " << describe_state(lts, cex.states[i + 1]) << "\n";
    }
    if (cex.loop_start) {
        if (cex.loop_label.empty()) {
            text << "  loop: s" << cex.states.back() << " has no successors and stays there forever\n";
        } else {
            text << "  loop: " << cex.loop_label << " returns to s" << cex.states[*cex.loop_start] << " (after step "
                 << *cex.loop_start << ")\n";
        }
    }
    ex.text = text.str();

    ex.scenario.name = "counterexample";
    ex.scenario.seed = lts.seed;
    std::int64_t tick = 0;
    for (const std::string& label : expected_steps(cex)) {
        if (label == "tick") {
            ++tick;
            continue;
        }
        if (label.rfind("step ", 0) == 0) continue;
        for (const auto& s : lts.env) {
            if (runtime::describe_stimulus(model, s) == label) {
                ex.scenario.steps.push_back({tick, s});
                break;
            }
        }
    }
    runtime::Stimulus halt;
    halt.kind = runtime::Stimulus::Kind::Halt;
    ex.scenario.steps.push_back({tick, halt});
    return ex;
}

ReplayResult replay(const Model& model, const Lts& lts, const Property& property, const Verdict& verdict) {
    const Counterexample& cex = require_cex(verdict);
    const Explanation ex = explain(model, lts, property, verdict);

    std::vector<StateVector> observed;
    StateVector current = initial_state(model, lts.env, lts.seed);
    observed.push_back(current);
    const auto observer = [&](const runtime::Transition& tr, const runtime::RuntimeState& rs) {
        switch (tr.kind) {
            case runtime::Transition::Kind::Stimulus:
                if (tr.stimulus->kind == runtime::Stimulus::Kind::Halt) return;
                for (std::size_t i = 0; i < lts.env.size(); ++i) {
                    if (lts.env[i] == *tr.stimulus) current.used[i] = true;
                }
                current.just_raised.reset();
                break;
            case runtime::Transition::Kind::Tick:
                std::fill(current.used.begin(), current.used.end(), false);
                current.just_raised.reset();
                break;
            case runtime::Transition::Kind::Step: current.just_raised = tr.raised; break;
        }
        current.runtime = rs;
        observed.push_back(current);
    };
    const std::int64_t last_tick = ex.scenario.steps.back().tick;
    runtime::run(model, ex.scenario, last_tick + 1, lts.seed, lts.runtime, observer);

    ReplayResult result;
    const auto expected = expected_states(cex);
    if (observed.size() < expected.size()) {
        result.message = "run ended after " + std::to_string(observed.size()) + " states, expected at least " +
                         std::to_string(expected.size());
        return result;
    }
    for (std::size_t i = 0; i < expected.size(); ++i) {
        const std::string key = state_key(lts.abstraction, observed[i], lts.runtime.guard_snapshot);
        if (key != lts.keys[expected[i]]) {
            result.message = "state " + std::to_string(i) + " differs: expected " + lts.keys[expected[i]] + ", got " + key;
            return result;
        }
    }
    result.followed = true;

    const auto sat = [&](const StateFormula& f, std::size_t i) { return holds(model, f, observed[i]); };
    const std::size_t last = expected.size() - 1;
    const std::size_t loop_from = cex.loop_start.value_or(last);
    bool ok = true;
    switch (property.shape) {
        case Property::Shape::Always: ok = !sat(property.p, last); break;
        case Property::Shape::Eventually:
            for (std::size_t i = 0; i <= last; ++i) ok = ok && !sat(property.p, i);
            break;
        case Property::Shape::Response:
            ok = sat(property.p, cex.trigger);
            for (std::size_t i = cex.trigger; i <= last; ++i) ok = ok && !sat(property.q, i);
            ok = ok && loop_from >= cex.trigger;
            break;
        case Property::Shape::NextResponse:
            ok = sat(property.p, cex.trigger) && !sat(property.q, std::min(cex.trigger + 1, last));
            break;
        case Property::Shape::Until:
            for (std::size_t i = 0; i < last; ++i) ok = ok && sat(property.p, i) && !sat(property.q, i);
            ok = ok && !sat(property.q, last) && (cex.loop_start ? sat(property.p, last) : !sat(property.p, last));
            break;
    }
    result.falsified = ok;
    result.message = ok ? "replayed " + std::to_string(expected.size()) + " states" : "replayed states satisfy the property";
    return result;
}

}  // namespace asslkit::verifier
