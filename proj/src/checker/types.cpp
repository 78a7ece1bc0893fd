#include "asslkit/checker/checker.hpp"

namespace asslkit::checker {

using namespace syntax;

namespace {

class TypeChecker {
public:
    TypeChecker(const SpecificationTree& tree, const SymbolTable& symbols) : tree_(tree), symbols_(symbols) {}

    std::vector<Diagnostic> run() {
        for (std::size_t i = 0; i < tier_count(tree_); ++i) check_tier(i);
        return std::move(diags_);
    }

private:
    void error(const std::string& message, const SourceSpan& span) {
        diags_.push_back({Severity::Error, "E-TYPE", message, span});
    }

    std::optional<ValueType> metric_type(const Reference& r) const {
        auto it = symbols_.tiers[tier_].metrics.find(r.name);
        if (it == symbols_.tiers[tier_].metrics.end()) return std::nullopt;
        return tier_at(tree_, tier_).metrics[it->second].type;
    }

    static std::string name(ValueType t) { return std::string(type_name(t)); }

    /// Type of `e`, or nullopt after reporting a mismatch inside it.
    std::optional<ValueType> type(const Expr& e) {
        switch (e.kind) {
            case Expr::Kind::Literal: return type_of(e.literal);
            case Expr::Kind::Metric: return metric_type(e.ref);
            case Expr::Kind::Fluent:
            case Expr::Kind::Local: return ValueType::Boolean;
            case Expr::Kind::Not: {
                auto t = type(e.operands[0]);
                if (!t) return std::nullopt;
                if (*t != ValueType::Boolean) {
                    error("NOT expects boolean, found " + name(*t), e.span);
                    return std::nullopt;
                }
                return ValueType::Boolean;
            }
            case Expr::Kind::And:
            case Expr::Kind::Or: {
                auto l = type(e.operands[0]);
                auto r = type(e.operands[1]);
                if (!l || !r) return std::nullopt;
                if (*l != ValueType::Boolean || *r != ValueType::Boolean) {
                    error(std::string(e.kind == Expr::Kind::And ? "AND" : "OR") + " expects boolean operands, found " +
                              name(*l) + " and " + name(*r),
                          e.span);
                    return std::nullopt;
                }
                return ValueType::Boolean;
            }
            case Expr::Kind::Compare: {
                auto l = type(e.operands[0]);
                auto r = type(e.operands[1]);
                if (!l || !r) return std::nullopt;
                if (*l != *r) {
                    error("cannot compare " + name(*l) + " with " + name(*r), e.span);
                    return std::nullopt;
                }
                if (*l == ValueType::Boolean && e.op != CompareOp::Eq && e.op != CompareOp::Ne) {
                    error("boolean values are unordered; '" + std::string(compare_op_spelling(e.op)) +
                              "' needs numbers or text",
                          e.span);
                    return std::nullopt;
                }
                return ValueType::Boolean;
            }
            case Expr::Kind::Add:
            case Expr::Kind::Sub: {
                auto l = type(e.operands[0]);
                auto r = type(e.operands[1]);
                if (!l || !r) return std::nullopt;
                if (*l != *r || (*l != ValueType::Integer && *l != ValueType::Real)) {
                    error("arithmetic needs two integers or two reals, found " + name(*l) + " and " + name(*r),
                          e.span);
                    return std::nullopt;
                }
                return *l;
            }
            case Expr::Kind::Neg: {
                auto t = type(e.operands[0]);
                if (!t) return std::nullopt;
                if (*t != ValueType::Integer && *t != ValueType::Real) {
                    error("negation needs a number, found " + name(*t), e.span);
                    return std::nullopt;
                }
                return *t;
            }
        }
        return std::nullopt;
    }

    void expect_boolean(const Expr& e, const std::string& clause) {
        auto t = type(e);
        if (t && *t != ValueType::Boolean) error(clause + " must be boolean, found " + name(*t), e.span);
    }

    void statements(const std::vector<Statement>& body) {
        for (const Statement& s : body) {
            const auto* a = std::get_if<AssignStmt>(&s);
            if (!a) continue;
            auto target = metric_type(a->metric);
            auto value = type(a->value);
            if (target && value && *target != *value) {
                error("cannot assign " + name(*value) + " to " + name(*target) + " metric '" + a->metric.name + "'",
                      a->span);
            }
        }
    }

    void check_tier(std::size_t index) {
        tier_ = index;
        const Tier& t = tier_at(tree_, index);
        for (const MetricDecl& m : t.metrics) {
            if (type_of(m.initial) != m.type) {
                error("initial value of metric '" + m.name + "' is " + name(type_of(m.initial)) + ", declared " +
                          name(m.type),
                      m.span);
            }
        }
        for (const EventDecl& e : t.events) {
            if (e.guard) expect_boolean(*e.guard, "guard of event '" + e.name + "'");
        }
        for (const ActionDecl& a : t.actions) {
            if (a.guard) expect_boolean(*a.guard, "guard of action '" + a.name + "'");
            if (a.ensures) expect_boolean(*a.ensures, "ENSURES of action '" + a.name + "'");
            statements(a.does);
            statements(a.onerr_does);
        }
    }

    const SpecificationTree& tree_;
    const SymbolTable& symbols_;
    std::size_t tier_ = 0;
    std::vector<Diagnostic> diags_;
};

}  // namespace

std::vector<Diagnostic> check_types(const SpecificationTree& tree, const SymbolTable& symbols) {
    auto diags = TypeChecker(tree, symbols).run();
    sort_diagnostics(diags);
    return diags;
}

}  // namespace asslkit::checker
