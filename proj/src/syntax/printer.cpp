#include "asslkit/syntax/printer.hpp"

#include <sstream>

namespace asslkit::syntax {
namespace {

int precedence(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Or: return 1;
        case Expr::Kind::And: return 2;
        case Expr::Kind::Not: return 3;
        case Expr::Kind::Compare: return 4;
        case Expr::Kind::Add:
        case Expr::Kind::Sub: return 5;
        case Expr::Kind::Neg: return 6;
        default: return 7;
    }
}

bool is_numeric_literal(const Expr& e) {
    return e.kind == Expr::Kind::Literal &&
           (type_of(e.literal) == ValueType::Integer || type_of(e.literal) == ValueType::Real);
}

void emit_expr(std::ostream& out, const Expr& e);

void emit_operand(std::ostream& out, const Expr& e, int min_precedence) {
    if (precedence(e) < min_precedence) {
        out << '(';
        emit_expr(out, e);
        out << ')';
    } else {
        emit_expr(out, e);
    }
}

void emit_binary(std::ostream& out, const Expr& e, std::string_view op, bool associative_left) {
    const int p = precedence(e);
    emit_operand(out, e.operands[0], associative_left ? p : p + 1);
    out << ' ' << op << ' ';
    emit_operand(out, e.operands[1], p + 1);
}

void emit_expr(std::ostream& out, const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Literal: out << render_value(e.literal); break;
        case Expr::Kind::Metric:
        case Expr::Kind::Fluent: out << print_reference(e.ref); break;
        case Expr::Kind::Local: out << e.local; break;
        case Expr::Kind::Not:
            out << "NOT ";
            emit_operand(out, e.operands[0], 3);
            break;
        case Expr::Kind::Neg:
            out << '-';
            // `-5` would re-read as a negative literal rather than a negation.
            if (is_numeric_literal(e.operands[0])) {
                out << '(';
                emit_expr(out, e.operands[0]);
                out << ')';
            } else {
                emit_operand(out, e.operands[0], 6);
            }
            break;
        case Expr::Kind::And: emit_binary(out, e, "AND", true); break;
        case Expr::Kind::Or: emit_binary(out, e, "OR", true); break;
        case Expr::Kind::Add: emit_binary(out, e, "+", true); break;
        case Expr::Kind::Sub: emit_binary(out, e, "-", true); break;
        case Expr::Kind::Compare: emit_binary(out, e, compare_op_spelling(e.op), false); break;
    }
}

class Printer {
public:
    std::string print(const SpecificationTree& tree) {
        tier(tree.as_tier);
        if (tree.asip) {
            out_ << '\n';
            protocol("ASIP", *tree.asip);
        }
        for (const Tier& ae : tree.ae_tiers) {
            out_ << '\n';
            tier(ae);
        }
        return out_.str();
    }

private:
    void line(const std::string& text) { out_ << std::string(indent_ * 2, ' ') << text << '\n'; }
    void open(const std::string& head) {
        line(head + " {");
        ++indent_;
    }
    void close() {
        --indent_;
        line("}");
    }

    static std::string ref_list(const std::vector<Reference>& refs) {
        if (refs.empty()) return "{ }";
        std::string s = "{ ";
        for (std::size_t i = 0; i < refs.size(); ++i) {
            if (i) s += ", ";
            s += print_reference(refs[i]);
        }
        return s + " }";
    }

    void tier(const Tier& t) {
        const bool empty = t.slos.empty() && t.policies.empty() && t.actions.empty() && t.events.empty() &&
                           t.metrics.empty() && !t.architecture && t.friends.empty() && !t.aeip &&
                           t.recovery_protocol.empty() && t.behavior_models.empty() && t.outcomes.empty();
        const std::string head = (t.kind == TierKind::System ? "AS " : "AE ") + t.name;
        if (empty) {
            line(head + " { }");
            return;
        }
        open(head);
        for (const auto& b : t.slos) opaque(b);
        if (t.architecture) opaque(*t.architecture);
        if (!t.friends.empty()) {
            std::string s = "FRIENDS { ";
            for (std::size_t i = 0; i < t.friends.size(); ++i) {
                if (i) s += ", ";
                s += t.friends[i].text;
            }
            line(s + " }");
        }
        if (t.aeip) protocol("AEIP", *t.aeip);
        for (const auto& p : t.policies) policy(p);
        for (const auto& a : t.actions) action(a);
        for (const auto& e : t.events) event(e);
        for (const auto& m : t.metrics) {
            line("METRIC " + m.name + " { TYPE " + std::string(type_name(m.type)) + "; INITIAL " +
                 render_value(m.initial) + "; }");
        }
        for (const auto& b : t.recovery_protocol) opaque(b);
        for (const auto& b : t.behavior_models) opaque(b);
        for (const auto& b : t.outcomes) opaque(b);
        close();
    }

    void opaque(const OpaqueBlock& b) {
        std::string head = b.keyword;
        if (!b.name.empty()) head += " " + b.name;
        line(head + (b.body.empty() ? " { }" : " { " + b.body + " }"));
    }

    void protocol(const std::string& keyword, const InteractionProtocol& p) {
        if (p.messages.empty() && p.channels.empty() && p.functions.empty() && p.managed_elements.empty()) {
            line(keyword + " { }");
            return;
        }
        open(keyword);
        for (const auto& m : p.messages) {
            line("MESSAGE " + m.name + " { SENDER " + m.sender.text + "; RECEIVER " + m.receiver.text + "; }");
        }
        for (const auto& c : p.channels) {
            line("CHANNEL " + c.name + " { CAPACITY " + std::to_string(c.capacity) + "; }");
        }
        for (const auto& f : p.functions) opaque(f);
        for (const auto& m : p.managed_elements) opaque(m);
        close();
    }

    void policy(const PolicyDecl& p) {
        open(p.name);
        for (const auto& f : p.fluents) {
            open("FLUENT " + f.name);
            line("INITIATED_BY " + ref_list(f.initiated_by));
            line("TERMINATED_BY " + ref_list(f.terminated_by));
            close();
        }
        for (const auto& m : p.mappings) {
            open("MAPPING");
            line("CONDITIONS " + ref_list(m.conditions));
            line("DO_ACTIONS " + ref_list(m.do_actions));
            close();
        }
        close();
    }

    void statements(const std::string& keyword, const std::vector<Statement>& body) {
        if (body.empty()) {
            line(keyword + " { }");
            return;
        }
        open(keyword);
        for (const auto& s : body) line(print_statement(s));
        close();
    }

    void action(const ActionDecl& a) {
        open("ACTION " + a.name);
        if (a.guard) line("GUARDS { " + print_expr(*a.guard) + " }");
        if (a.ensures) line("ENSURES { " + print_expr(*a.ensures) + " }");
        statements("DOES", a.does);
        if (!a.onerr_does.empty()) statements("ONERR_DOES", a.onerr_does);
        if (!a.triggers.empty()) line("TRIGGERS " + ref_list(a.triggers));
        if (!a.onerr_triggers.empty()) line("ONERR_TRIGGERS " + ref_list(a.onerr_triggers));
        close();
    }

    void event(const EventDecl& e) {
        if (!e.injectable && !e.guard && e.activation.empty()) {
            line("EVENT " + e.name + " { }");
            return;
        }
        open("EVENT " + e.name);
        if (e.injectable) line("INJECTABLE;");
        if (e.guard) line("GUARDS { " + print_expr(*e.guard) + " }");
        if (!e.activation.empty()) {
            std::string s = "ACTIVATION { ";
            for (std::size_t i = 0; i < e.activation.size(); ++i) {
                const auto& c = e.activation[i];
                if (i) s += ", ";
                switch (c.kind) {
                    case ActivationClause::Kind::Sent: s += "SENT { " + print_reference(c.ref) + " }"; break;
                    case ActivationClause::Kind::Received: s += "RECEIVED { " + print_reference(c.ref) + " }"; break;
                    case ActivationClause::Kind::Changed: s += "CHANGED { " + print_reference(c.ref) + " }"; break;
                    case ActivationClause::Kind::Elapsed: s += "ELAPSED { " + std::to_string(c.ticks) + " }"; break;
                }
            }
            line(s + " }");
        }
        close();
    }

    std::ostringstream out_;
    int indent_ = 0;
};

}  // namespace

std::string print_reference(const Reference& r) {
    if (!r.qualified) return r.name;
    return std::string(namespace_prefix(r.ns)) + "." + r.name;
}

std::string print_expr(const Expr& e) {
    std::ostringstream out;
    emit_expr(out, e);
    return out.str();
}

std::string print_statement(const Statement& s) {
    struct Visitor {
        std::string operator()(const CallStmt& c) const {
            std::string head = c.binding.empty() ? "" : c.binding + " = ";
            return head + "call " + print_reference(c.action) + ";";
        }
        std::string operator()(const AssignStmt& a) const {
            return print_reference(a.metric) + " = " + print_expr(a.value) + ";";
        }
        std::string operator()(const SendStmt& m) const {
            return "send " + print_reference(m.message) + " " + print_reference(m.channel) + ";";
        }
        std::string operator()(const FailStmt& f) const { return "fail " + quote_text(f.reason) + ";"; }
    };
    return std::visit(Visitor{}, s);
}

std::string pretty_print(const SpecificationTree& tree) { return Printer().print(tree); }

}  // namespace asslkit::syntax
