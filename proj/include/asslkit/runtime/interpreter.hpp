#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

#include "asslkit/runtime/model.hpp"
#include "asslkit/runtime/scenario.hpp"
#include "asslkit/runtime/state.hpp"
#include "asslkit/runtime/trace.hpp"

namespace asslkit::runtime {

enum class GuardSnapshot { Post, Pre };

struct Options {
    GuardSnapshot guard_snapshot = GuardSnapshot::Post;
    int max_call_depth = 32;
    std::int64_t max_steps_per_tick = 100000;
};

struct Outcome {
    enum class Kind { Success, GuardRejected, Error };
    Kind kind = Kind::Success;
    std::string reason;
};

class DepthExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Single-step semantics over one RuntimeState. Records go to `trace` when given;
/// the verifier runs without one.
class Machine {
public:
    Machine(const Model& model, const Options& options, RuntimeState& state, Trace* trace = nullptr)
        : model_(model), options_(options), state_(state), trace_(trace) {}

    /// Evaluates the event guard, then updates fluents and fires mappings on rising edges.
    void raise(const EventOccurrence& occurrence);

    /// Dequeues and raises one pending occurrence; false if nothing was pending.
    bool step();

    void assign_metric(std::size_t tier, std::size_t metric, Value value);
    Outcome execute_action(std::size_t tier, std::size_t action, int depth, const std::string& cause);
    void send_message(std::size_t message, std::size_t channel);

    /// Advances logical time: one delivery per non-empty channel, timer expiries.
    void begin_tick();

    /// `step_number` labels the injection cause. Halt sets state.halted.
    void apply(const Stimulus& s, std::size_t step_number);

    /// Steps until nothing is pending. Throws DepthExceeded.
    void drain();

    bool quiescent() const;

    /// The event raised by the last step, if its guard passed.
    std::optional<EventKey> last_raised() const { return last_raised_; }

private:
    bool tracing() const { return trace_ != nullptr; }
    void record(RecordKind kind, std::string subject, std::string detail);
    void enqueue(EventKey e, Cause cause, std::optional<PreValue> pre = std::nullopt);
    bool eval_guard(const CompiledExpr& e, std::size_t tier, const std::vector<bool>* locals) const;
    bool run_block(std::size_t tier, const std::vector<CompiledStatement>& body, std::vector<bool>& locals,
                   int depth, const std::string& self, std::string& error);

    const Model& model_;
    Options options_;
    RuntimeState& state_;
    Trace* trace_;
    std::optional<EventKey> last_raised_;
};

Value evaluate(const CompiledExpr& e, const TierState& tier, const std::vector<bool>* locals);

enum class StopReason { Quiescent, Halted, MaxTicks, DepthExceeded };
std::string_view stop_reason_name(StopReason r);

struct RunResult {
    Trace trace;
    RuntimeState final_state;
    StopReason reason = StopReason::Quiescent;
};

struct Transition {
    enum class Kind { Stimulus, Tick, Step };
    Kind kind = Kind::Step;
    const Stimulus* stimulus = nullptr;  // Stimulus
    std::optional<EventKey> raised;      // Step
};

using Observer = std::function<void(const Transition&, const RuntimeState&)>;

/// Applies stimuli at their ticks, drains pending work after each, and advances
/// time until a halt, quiescence with the scenario exhausted, or `max_ticks`.
RunResult run(const Model& model, const Scenario& scenario, std::int64_t max_ticks, std::uint64_t seed,
              const Options& options = {}, const Observer& observer = {});

}  // namespace asslkit::runtime
