#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace asslkit::runtime {

enum class RecordKind {
    EventRaised,
    EventSuppressed,
    FluentInitiated,
    FluentTerminated,
    MappingFired,
    ActionStarted,
    ActionSucceeded,
    ActionFailed,
    ActionRejected,
    MetricAssigned,
    MessageSent,
    MessageReceived,
    EnsuresViolated,
    DepthExceeded,
};

std::string_view record_kind_name(RecordKind kind);

struct TraceRecord {
    std::uint64_t seq = 0;
    std::int64_t tick = 0;
    RecordKind kind = RecordKind::EventRaised;
    std::string subject;  // qualified `tier.name`
    std::string detail;
};

/// `seq<TAB>tick<TAB>kind<TAB>subject<TAB>detail`
std::string format_record(const TraceRecord& r);

struct Trace {
    std::vector<TraceRecord> records;

    void append(std::int64_t tick, RecordKind kind, std::string subject, std::string detail);
    std::string to_text() const;  // one record per line
};

}  // namespace asslkit::runtime
