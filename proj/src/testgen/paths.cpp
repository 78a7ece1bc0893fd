#include <algorithm>
#include <optional>

#include "asslkit/testgen/testgen.hpp"

namespace asslkit::testgen {

namespace {

using runtime::CompiledExpr;
using runtime::CompiledStatement;

std::optional<bool> constant(const CompiledExpr& e) {
    using K = CompiledExpr::Kind;
    switch (e.kind) {
        case K::Literal:
            if (const auto* b = std::get_if<bool>(&e.literal)) return *b;
            return std::nullopt;
        case K::Not: {
            auto v = constant(e.operands[0]);
            if (v) return !*v;
            return std::nullopt;
        }
        case K::And: {
            auto a = constant(e.operands[0]);
            auto b = constant(e.operands[1]);
            if ((a && !*a) || (b && !*b)) return false;
            if (a && b) return true;
            return std::nullopt;
        }
        case K::Or: {
            auto a = constant(e.operands[0]);
            auto b = constant(e.operands[1]);
            if ((a && *a) || (b && *b)) return true;
            if (a && b) return false;
            return std::nullopt;
        }
        case K::Compare:
            if (e.operands[0].kind == K::Literal && e.operands[1].kind == K::Literal) {
                runtime::TierState empty;
                return std::get<bool>(runtime::evaluate(e, empty, nullptr));
            }
            return std::nullopt;
        default: return std::nullopt;
    }
}

bool can_fail(const runtime::TierModel& tm, std::size_t action, int depth = 0) {
    const auto& am = tm.actions[action];
    if (depth > 64) return true;
    if (am.ensures && constant(*am.ensures) != std::optional<bool>(true)) return true;
    for (const CompiledStatement& s : am.does) {
        if (s.kind == CompiledStatement::Kind::Fail) return true;
        if (s.kind == CompiledStatement::Kind::Call && can_fail(tm, s.target, depth + 1)) return true;
    }
    return false;
}

bool can_succeed(const runtime::ActionModel& am) {
    if (am.ensures && constant(*am.ensures) == std::optional<bool>(false)) return false;
    for (const CompiledStatement& s : am.does) {
        if (s.kind == CompiledStatement::Kind::Fail) return false;
    }
    return true;
}

std::vector<Branch> branches_of(const runtime::TierModel& tm, std::size_t action) {
    const auto& am = tm.actions[action];
    const std::optional<bool> guard = am.guard ? constant(*am.guard) : std::optional<bool>(true);
    if (guard == std::optional<bool>(false)) return {Branch::GuardReject};
    std::vector<Branch> out;
    if (!guard) out.push_back(Branch::GuardReject);
    if (can_succeed(am)) out.push_back(Branch::Success);
    if (can_fail(tm, action)) out.push_back(Branch::Error);
    return out;
}

}  // namespace

std::string policy_name(const runtime::Model& model, PolicyRef p) {
    return model.qualified(p.tier, model.tiers[p.tier].policies[p.policy]);
}

std::vector<PolicyRef> all_policies(const runtime::Model& model) {
    std::vector<PolicyRef> out;
    for (std::size_t t = 0; t < model.tiers.size(); ++t) {
        for (std::size_t p = 0; p < model.tiers[t].policies.size(); ++p) out.push_back({t, p});
    }
    return out;
}

char branch_letter(Branch b) {
    switch (b) {
        case Branch::GuardReject: return 'R';
        case Branch::Success: return 'S';
        case Branch::Error: return 'E';
    }
    return '?';
}

std::string_view branch_name(Branch b) {
    switch (b) {
        case Branch::GuardReject: return "guard-reject";
        case Branch::Success: return "success";
        case Branch::Error: return "error";
    }
    return "?";
}

PathSet enumerate_paths(const runtime::Model& model, PolicyRef policy) {
    PathSet out;
    const auto& tm = model.tiers[policy.tier];
    bool any_mapping = false;
    for (std::size_t mi = 0; mi < tm.mappings.size(); ++mi) {
        const auto& mapping = tm.mappings[mi];
        if (mapping.policy != policy.policy) continue;
        any_mapping = true;

        std::vector<std::vector<Branch>> options;
        for (std::size_t a : mapping.actions) options.push_back(branches_of(tm, a));
        std::vector<std::vector<Branch>> products{{}};
        for (const auto& opt : options) {
            std::vector<std::vector<Branch>> next;
            for (const auto& prefix : products) {
                for (Branch b : opt) {
                    next.push_back(prefix);
                    next.back().push_back(b);
                }
            }
            products = std::move(next);
        }

        std::vector<std::size_t> seen_initiators;
        for (std::size_t f : mapping.conditions) {
            for (std::size_t init : tm.fluents[f].initiated_by) {
                if (std::find(seen_initiators.begin(), seen_initiators.end(), init) != seen_initiators.end()) continue;
                seen_initiators.push_back(init);
                for (const auto& branches : products) {
                    for (std::size_t term : tm.fluents[f].terminated_by) {
                        PolicyPath p;
                        p.policy = policy;
                        p.mapping = mi;
                        p.fluent = f;
                        p.initiator = init;
                        p.branches = branches;
                        p.terminator = term;
                        std::string letters;
                        for (Branch b : branches) letters += branch_letter(b);
                        p.id = "m" + std::to_string(mapping.ordinal) + "_" + tm.events[init].name + "_" + letters + "_" +
                               tm.events[term].name;
                        out.paths.push_back(std::move(p));
                    }
                }
            }
        }
    }
    if (!any_mapping) out.warnings.push_back("policy " + policy_name(model, policy) + " has no mappings; no paths");
    return out;
}

}  // namespace asslkit::testgen
