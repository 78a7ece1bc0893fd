#include "asslkit/runtime/model.hpp"

#include <map>

namespace asslkit::runtime {

using namespace syntax;

namespace {

class Compiler {
public:
    explicit Compiler(const checker::CheckedSpec& spec) : spec_(spec), syms_(spec.symbols) {}

    std::shared_ptr<const Model> run() {
        auto model = std::make_shared<Model>();
        model->spec = spec_;
        model_ = model.get();
        for (const auto& m : syms_.messages) {
            MessageModel mm;
            mm.name = m.name;
            mm.qualified = scope(m.owner) + "." + m.name;
            mm.sender = m.sender;
            mm.receiver = m.receiver;
            model_->messages.push_back(std::move(mm));
        }
        for (const auto& c : syms_.channels) {
            model_->channels.push_back({c.name, scope(c.owner) + "." + c.name, c.capacity});
        }
        for (std::size_t t = 0; t < syms_.tiers.size(); ++t) declare_tier(t);
        for (std::size_t t = 0; t < syms_.tiers.size(); ++t) compile_tier(t);
        return model;
    }

private:
    std::string scope(int owner) const {
        return owner == checker::kSharedScope ? "ASIP" : syms_.tiers[static_cast<std::size_t>(owner)].name;
    }

    void declare_tier(std::size_t t) {
        const Tier& tier = spec_.tier(t);
        TierModel tm;
        tm.name = tier.name;
        for (const auto& m : tier.metrics) tm.metrics.push_back({m.name, m.type, m.initial, {}});
        for (const auto& e : tier.events) tm.events.push_back({e.name, e.injectable, std::nullopt});
        for (const auto& a : tier.actions) {
            ActionModel am;
            am.name = a.name;
            tm.actions.push_back(std::move(am));
        }
        model_->tiers.push_back(std::move(tm));
    }

    std::size_t lookup(const std::map<std::string, std::size_t>& map, const std::string& name) const {
        return map.at(name);
    }

    std::size_t fluent_slot(std::size_t t, const std::string& name) const { return fluent_slots_[t].at(name); }

    CompiledExpr expr(std::size_t t, const Expr& e, const std::map<std::string, std::size_t>* locals) {
        CompiledExpr c;
        c.kind = static_cast<CompiledExpr::Kind>(e.kind);
        c.literal = e.literal;
        c.op = e.op;
        switch (e.kind) {
            case Expr::Kind::Metric: c.slot = lookup(syms_.tiers[t].metrics, e.ref.name); break;
            case Expr::Kind::Fluent: c.slot = fluent_slot(t, e.ref.name); break;
            case Expr::Kind::Local: c.slot = locals->at(e.local); break;
            default: break;
        }
        for (const auto& op : e.operands) c.operands.push_back(expr(t, op, locals));
        return c;
    }

    std::vector<CompiledStatement> block(std::size_t t, const std::vector<Statement>& body,
                                         std::map<std::string, std::size_t>& locals, std::size_t& slots) {
        const auto& sym = syms_.tiers[t];
        std::vector<CompiledStatement> out;
        for (const Statement& s : body) {
            CompiledStatement cs;
            if (const auto* c = std::get_if<CallStmt>(&s)) {
                cs.kind = CompiledStatement::Kind::Call;
                cs.target = lookup(sym.actions, c->action.name);
                if (!c->binding.empty()) {
                    auto [it, inserted] = locals.emplace(c->binding, slots);
                    if (inserted) ++slots;
                    cs.binding = static_cast<int>(it->second);
                }
            } else if (const auto* a = std::get_if<AssignStmt>(&s)) {
                cs.kind = CompiledStatement::Kind::Assign;
                cs.target = lookup(sym.metrics, a->metric.name);
                cs.value = expr(t, a->value, &locals);
            } else if (const auto* m = std::get_if<SendStmt>(&s)) {
                cs.kind = CompiledStatement::Kind::Send;
                cs.target = lookup(sym.messages, m->message.name);
                cs.channel = lookup(sym.channels, m->channel.name);
            } else {
                cs.kind = CompiledStatement::Kind::Fail;
                cs.reason = std::get<FailStmt>(s).reason;
            }
            out.push_back(std::move(cs));
        }
        return out;
    }

    std::vector<std::size_t> events(std::size_t t, const std::vector<Reference>& refs) {
        std::vector<std::size_t> out;
        for (const auto& r : refs) out.push_back(lookup(syms_.tiers[t].events, r.name));
        return out;
    }

    void compile_tier(std::size_t t) {
        const Tier& tier = spec_.tier(t);
        const auto& sym = syms_.tiers[t];
        TierModel& tm = model_->tiers[t];
        if (fluent_slots_.size() <= t) fluent_slots_.resize(t + 1);

        for (std::size_t p = 0; p < tier.policies.size(); ++p) {
            tm.policies.push_back(tier.policies[p].name);
            for (const auto& f : tier.policies[p].fluents) {
                fluent_slots_[t][f.name] = tm.fluents.size();
                tm.fluents.push_back({f.name, p, events(t, f.initiated_by), events(t, f.terminated_by)});
            }
        }
        for (std::size_t p = 0; p < tier.policies.size(); ++p) {
            const auto& mappings = tier.policies[p].mappings;
            for (std::size_t k = 0; k < mappings.size(); ++k) {
                MappingModel mm;
                mm.policy = p;
                mm.ordinal = k;
                for (const auto& c : mappings[k].conditions) mm.conditions.push_back(fluent_slot(t, c.name));
                for (const auto& a : mappings[k].do_actions) mm.actions.push_back(lookup(sym.actions, a.name));
                tm.mappings.push_back(std::move(mm));
            }
        }
        for (std::size_t i = 0; i < tier.actions.size(); ++i) {
            const ActionDecl& a = tier.actions[i];
            ActionModel& am = tm.actions[i];
            if (a.guard) am.guard = expr(t, *a.guard, nullptr);
            std::map<std::string, std::size_t> locals;
            std::size_t slots = 0;
            am.does = block(t, a.does, locals, slots);
            if (a.ensures) am.ensures = expr(t, *a.ensures, &locals);
            std::map<std::string, std::size_t> onerr_locals;
            am.onerr_does = block(t, a.onerr_does, onerr_locals, slots);
            am.local_slots = slots;
            am.triggers = events(t, a.triggers);
            am.onerr_triggers = events(t, a.onerr_triggers);
        }
        for (std::size_t i = 0; i < tier.events.size(); ++i) {
            const EventDecl& e = tier.events[i];
            if (e.guard) tm.events[i].guard = expr(t, *e.guard, nullptr);
            for (const auto& c : e.activation) {
                switch (c.kind) {
                    case ActivationClause::Kind::Changed:
                        tm.metrics[lookup(sym.metrics, c.ref.name)].changed_subscribers.push_back(i);
                        break;
                    case ActivationClause::Kind::Sent:
                        model_->messages[lookup(sym.messages, c.ref.name)].sent_subscribers.push_back({t, i});
                        break;
                    case ActivationClause::Kind::Received: {
                        auto& msg = model_->messages[lookup(sym.messages, c.ref.name)];
                        // Only the receiving tier observes a delivery.
                        if (msg.receiver == t) msg.received_subscribers.push_back(i);
                        break;
                    }
                    case ActivationClause::Kind::Elapsed:
                        model_->timers.push_back({{t, i}, c.ticks});
                        break;
                }
            }
        }
    }

    const checker::CheckedSpec& spec_;
    const checker::SymbolTable& syms_;
    Model* model_ = nullptr;
    std::vector<std::map<std::string, std::size_t>> fluent_slots_;
};

}  // namespace

std::shared_ptr<const Model> compile(const checker::CheckedSpec& spec) { return Compiler(spec).run(); }

}  // namespace asslkit::runtime
