#include "asslkit/verifier/check.hpp"

#include <algorithm>
#include <deque>

namespace asslkit::verifier {

namespace {

using runtime::Model;

StateFormula negate(const StateFormula& f) {
    StateFormula n;
    n.kind = StateFormula::Kind::Not;
    n.operands.push_back(f);
    return n;
}

class Checker {
public:
    Checker(const Model& model, const Lts& lts) : model_(model), lts_(lts) {}

    std::vector<bool> sat(const StateFormula& f) const {
        std::vector<bool> out(lts_.size());
        for (std::size_t s = 0; s < lts_.size(); ++s) out[s] = holds(model_, f, lts_.states[s]);
        return out;
    }

    bool deadlock(std::size_t s) const { return lts_.expanded[s] && lts_.edge_begin[s] == lts_.edge_begin[s + 1]; }

    /// Breadth-first search from the initial state through `through` states (all
    /// states when empty) to the first state in `target`.
    std::optional<Counterexample> path_to(const std::vector<bool>& target, const std::vector<bool>& through = {}) const {
        const std::size_t n = lts_.size();
        std::vector<std::size_t> parent(n, n);
        std::vector<std::size_t> via(n, 0);
        std::vector<bool> seen(n, false);
        std::deque<std::size_t> queue{0};
        seen[0] = true;
        while (!queue.empty()) {
            const std::size_t s = queue.front();
            queue.pop_front();
            if (target[s]) {
                Counterexample cex;
                for (std::size_t cur = s; cur != n; cur = parent[cur]) {
                    cex.states.push_back(cur);
                    if (parent[cur] != n) cex.steps.push_back(lts_.edges[via[cur]].label);
                }
                std::reverse(cex.states.begin(), cex.states.end());
                std::reverse(cex.steps.begin(), cex.steps.end());
                cex.trigger = cex.states.size() - 1;
                return cex;
            }
            if (!through.empty() && !through[s]) continue;
            for (std::size_t e = lts_.edge_begin[s]; e < lts_.edge_begin[s + 1]; ++e) {
                const std::size_t t = lts_.edges[e].to;
                if (seen[t]) continue;
                seen[t] = true;
                parent[t] = s;
                via[t] = e;
                queue.push_back(t);
            }
        }
        return std::nullopt;
    }

    /// States with an infinite path of `phi` states, using only expanded states;
    /// a state without successors stutters forever.
    std::vector<bool> eg(const std::vector<bool>& phi) const {
        const std::size_t n = lts_.size();
        std::vector<bool> in(n);
        for (std::size_t s = 0; s < n; ++s) in[s] = phi[s] && lts_.expanded[s];
        std::vector<std::size_t> count(n, 0);
        std::vector<std::vector<std::size_t>> preds(n);
        for (const Edge& e : lts_.edges) {
            preds[e.to].push_back(e.from);
            if (in[e.to]) ++count[e.from];
        }
        std::vector<std::size_t> work;
        for (std::size_t s = 0; s < n; ++s) {
            if (in[s] && count[s] == 0 && !deadlock(s)) work.push_back(s);
        }
        while (!work.empty()) {
            const std::size_t s = work.back();
            work.pop_back();
            if (!in[s]) continue;
            in[s] = false;
            for (std::size_t p : preds[s]) {
                if (in[p] && --count[p] == 0 && !deadlock(p)) work.push_back(p);
            }
        }
        return in;
    }

    /// Extends `cex` (ending in a state of `set`) greedily inside `set` until a state repeats.
    void close_lasso(Counterexample& cex, const std::vector<bool>& set) const {
        std::vector<std::size_t> position(lts_.size(), lts_.size());
        for (std::size_t i = 0; i < cex.states.size(); ++i) position[cex.states[i]] = i;
        const std::size_t start = cex.states.size() - 1;
        // Positions before `start` belong to the prefix and must not close the loop.
        for (std::size_t i = 0; i < start; ++i) position[cex.states[i]] = lts_.size();
        std::size_t cur = cex.states.back();
        while (true) {
            if (deadlock(cur)) {
                cex.loop_start = cex.states.size() - 1;
                return;
            }
            const Edge* chosen = nullptr;
            for (std::size_t e = lts_.edge_begin[cur]; e < lts_.edge_begin[cur + 1]; ++e) {
                if (set[lts_.edges[e].to]) {
                    chosen = &lts_.edges[e];
                    break;
                }
            }
            if (position[chosen->to] != lts_.size()) {
                cex.loop_start = position[chosen->to];
                cex.loop_label = chosen->label;
                return;
            }
            position[chosen->to] = cex.states.size();
            cex.states.push_back(chosen->to);
            cex.steps.push_back(chosen->label);
            cur = chosen->to;
        }
    }

private:
    const Model& model_;
    const Lts& lts_;
};

Verdict violated(Counterexample cex) {
    Verdict v;
    v.result = Verdict::Result::Violated;
    v.counterexample = std::move(cex);
    return v;
}

}  // namespace

std::string_view result_name(Verdict::Result r) {
    switch (r) {
        case Verdict::Result::Holds: return "Holds";
        case Verdict::Result::Violated: return "Violated";
        case Verdict::Result::Inconclusive: return "Inconclusive";
    }
    return "?";
}

Verdict check(const Model& model, const Lts& lts, const Property& property) {
    Checker c(model, lts);
    const std::size_t n = lts.size();
    switch (property.shape) {
        case Property::Shape::Always: {
            if (auto cex = c.path_to(c.sat(negate(property.p)))) return violated(std::move(*cex));
            break;
        }
        case Property::Shape::Eventually: {
            const auto set = c.eg(c.sat(negate(property.p)));
            if (set[0]) {
                Counterexample cex;
                cex.states.push_back(0);
                c.close_lasso(cex, set);
                return violated(std::move(cex));
            }
            break;
        }
        case Property::Shape::Response: {
            const auto set = c.eg(c.sat(negate(property.q)));
            const auto p = c.sat(property.p);
            std::vector<bool> target(n);
            for (std::size_t s = 0; s < n; ++s) target[s] = p[s] && set[s];
            if (auto cex = c.path_to(target)) {
                c.close_lasso(*cex, set);
                return violated(std::move(*cex));
            }
            break;
        }
        case Property::Shape::NextResponse: {
            const auto p = c.sat(property.p);
            const auto q = c.sat(property.q);
            std::vector<bool> target(n);
            for (std::size_t s = 0; s < n; ++s) {
                if (!p[s] || !lts.expanded[s]) continue;
                if (c.deadlock(s)) {
                    target[s] = !q[s];
                    continue;
                }
                for (std::size_t e = lts.edge_begin[s]; e < lts.edge_begin[s + 1]; ++e) {
                    if (!q[lts.edges[e].to]) target[s] = true;
                }
            }
            if (auto cex = c.path_to(target)) {
                const std::size_t s = cex->states.back();
                if (c.deadlock(s)) {
                    cex->loop_start = cex->states.size() - 1;
                } else {
                    for (std::size_t e = lts.edge_begin[s]; e < lts.edge_begin[s + 1]; ++e) {
                        if (q[lts.edges[e].to]) continue;
                        cex->states.push_back(lts.edges[e].to);
                        cex->steps.push_back(lts.edges[e].label);
                        break;
                    }
                }
                return violated(std::move(*cex));
            }
            break;
        }
        case Property::Shape::Until: {
            const auto p = c.sat(property.p);
            const auto q = c.sat(property.q);
            std::vector<bool> waiting(n);
            std::vector<bool> failed(n);
            for (std::size_t s = 0; s < n; ++s) {
                waiting[s] = p[s] && !q[s];
                failed[s] = !p[s] && !q[s];
            }
            if (auto cex = c.path_to(failed, waiting)) return violated(std::move(*cex));
            const auto set = c.eg(waiting);
            if (auto cex = c.path_to(set, waiting)) {
                c.close_lasso(*cex, set);
                cex->trigger = 0;
                return violated(std::move(*cex));
            }
            break;
        }
    }
    Verdict v;
    v.result = lts.truncated ? Verdict::Result::Inconclusive : Verdict::Result::Holds;
    return v;
}

}  // namespace asslkit::verifier
