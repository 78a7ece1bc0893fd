#include <sstream>
#include <stdexcept>

#include "asslkit/testgen/testgen.hpp"

namespace asslkit::testgen {

bool glob_match(std::string_view pattern, std::string_view text) {
    std::size_t p = 0;
    std::size_t t = 0;
    std::size_t star = std::string_view::npos;
    std::size_t resume = 0;
    while (t < text.size()) {
        if (p < pattern.size() && pattern[p] == '*') {
            star = p++;
            resume = t;
        } else if (p < pattern.size() && pattern[p] == text[t]) {
            ++p;
            ++t;
        } else if (star != std::string_view::npos) {
            p = star + 1;
            t = ++resume;
        } else {
            return false;
        }
    }
    while (p < pattern.size() && pattern[p] == '*') ++p;
    return p == pattern.size();
}

std::string format_assertion(const Assertion& a) {
    std::string out = a.negative ? "!\t" : "";
    for (std::size_t i = 0; i < a.fields.size(); ++i) {
        if (i) out += '\t';
        out += a.fields[i];
    }
    return out;
}

Assertion parse_assertion(std::string_view line) {
    Assertion a;
    if (line.substr(0, 2) == "!\t") {
        a.negative = true;
        line.remove_prefix(2);
    }
    std::size_t field = 0;
    std::size_t start = 0;
    while (true) {
        const std::size_t tab = line.find('\t', start);
        if (field == a.fields.size()) throw std::invalid_argument("too many fields in assertion");
        a.fields[field++] = std::string(line.substr(start, tab - start));
        if (tab == std::string_view::npos) break;
        start = tab + 1;
    }
    if (field != a.fields.size()) throw std::invalid_argument("assertion needs 5 tab-separated fields");
    return a;
}

std::string format_assertions(const std::vector<Assertion>& list) {
    std::string out;
    for (const auto& a : list) out += format_assertion(a) + "\n";
    return out;
}

std::vector<Assertion> parse_assertions(std::string_view text) {
    std::vector<Assertion> out;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        out.push_back(parse_assertion(line));
    }
    return out;
}

namespace {

bool matches(const Assertion& a, const runtime::TraceRecord& r) {
    const std::string values[] = {std::to_string(r.seq), std::to_string(r.tick),
                                  std::string(runtime::record_kind_name(r.kind)), r.subject, r.detail};
    for (std::size_t i = 0; i < a.fields.size(); ++i) {
        if (!glob_match(a.fields[i], values[i])) return false;
    }
    return true;
}

}  // namespace

CheckOutcome check_assertions(const std::vector<Assertion>& assertions, const runtime::Trace& trace) {
    CheckOutcome out;
    std::size_t next = 0;
    for (const Assertion& a : assertions) {
        if (a.negative) {
            for (const auto& r : trace.records) {
                if (matches(a, r)) {
                    out.message = "unexpected record " + runtime::format_record(r) + " for " + format_assertion(a);
                    return out;
                }
            }
            continue;
        }
        while (next < trace.records.size() && !matches(a, trace.records[next])) ++next;
        if (next == trace.records.size()) {
            out.message = "no record matches " + format_assertion(a);
            return out;
        }
        ++next;
    }
    out.passed = true;
    return out;
}

}  // namespace asslkit::testgen
