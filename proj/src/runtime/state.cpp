#include "asslkit/runtime/state.hpp"

namespace asslkit::runtime {

std::string Cause::describe() const {
    switch (kind) {
        case Kind::Activation: return "activation:" + text;
        case Kind::Triggered: return "triggered:" + text;
        case Kind::OnError: return "onerr:" + text;
        case Kind::Injected: return "injected:" + text;
    }
    return text;
}

RuntimeState init(const Model& model, std::uint64_t seed) {
    RuntimeState s;
    s.seed = seed;
    for (const auto& t : model.tiers) {
        TierState ts;
        ts.fluents.assign(t.fluents.size(), false);
        for (const auto& m : t.metrics) ts.metrics.push_back(m.initial);
        s.tiers.push_back(std::move(ts));
    }
    s.channels.resize(model.channels.size());
    for (const auto& timer : model.timers) s.timers.push_back(timer.period);
    return s;
}

}  // namespace asslkit::runtime
