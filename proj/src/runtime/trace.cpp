#include "asslkit/runtime/trace.hpp"

namespace asslkit::runtime {

std::string_view record_kind_name(RecordKind kind) {
    switch (kind) {
        case RecordKind::EventRaised: return "EventRaised";
        case RecordKind::EventSuppressed: return "EventSuppressed";
        case RecordKind::FluentInitiated: return "FluentInitiated";
        case RecordKind::FluentTerminated: return "FluentTerminated";
        case RecordKind::MappingFired: return "MappingFired";
        case RecordKind::ActionStarted: return "ActionStarted";
        case RecordKind::ActionSucceeded: return "ActionSucceeded";
        case RecordKind::ActionFailed: return "ActionFailed";
        case RecordKind::ActionRejected: return "ActionRejected";
        case RecordKind::MetricAssigned: return "MetricAssigned";
        case RecordKind::MessageSent: return "MessageSent";
        case RecordKind::MessageReceived: return "MessageReceived";
        case RecordKind::EnsuresViolated: return "EnsuresViolated";
        case RecordKind::DepthExceeded: return "DepthExceeded";
    }
    return "?";
}

std::string format_record(const TraceRecord& r) {
    std::string out = std::to_string(r.seq);
    out += '\t';
    out += std::to_string(r.tick);
    out += '\t';
    out += record_kind_name(r.kind);
    out += '\t';
    out += r.subject;
    out += '\t';
    out += r.detail;
    return out;
}

void Trace::append(std::int64_t tick, RecordKind kind, std::string subject, std::string detail) {
    records.push_back({records.size() + 1, tick, kind, std::move(subject), std::move(detail)});
}

std::string Trace::to_text() const {
    std::string out;
    for (const auto& r : records) {
        out += format_record(r);
        out += '\n';
    }
    return out;
}

}  // namespace asslkit::runtime
