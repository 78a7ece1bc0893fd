#include "doctest.h"

#include "asslkit/checker/checker.hpp"
#include "fixtures.hpp"

using namespace asslkit;
using namespace asslkit::checker;

namespace {

std::vector<std::string> codes(const CheckResult& r) {
    std::vector<std::string> out;
    for (const auto& d : r.diagnostics) out.push_back(d.code);
    return out;
}

/// Wraps tier members into a minimal worker spec with one boolean metric `flag`.
std::string worker(const std::string& body) {
    return "AS s { }\nAE w {\n" + body + "\nMETRIC flag { TYPE boolean; INITIAL false; }\n}\n";
}

const char* kPolicy = R"(
SELF_P {
  FLUENT f { INITIATED_BY { EVENTS.up } TERMINATED_BY { EVENTS.down } }
  MAPPING { CONDITIONS { f } DO_ACTIONS { ACTIONS.act } }
}
EVENT up { INJECTABLE; }
EVENT down { INJECTABLE; }
)";

}  // namespace

TEST_SUITE("checker") {

TEST_CASE("figures spec checks with zero diagnostics") {
    auto r = check_source(fixtures::figures_spec_text(), "spec.assl");
    CHECK(r.spec);
    CHECK(r.diagnostics.empty());
    const auto& syms = r.spec->symbols;
    REQUIRE(syms.tiers.size() == 3);
    CHECK(syms.tiers[2].name == "antsWorker");
    CHECK(syms.tiers[2].fluents.count("inSecurityCheck") == 1);
    REQUIRE(syms.messages.size() == 1);
    CHECK(syms.messages[0].sender == 1);
    CHECK(syms.messages[0].receiver == 2);
    CHECK(syms.tiers[2].messages.at("privateMessage") == 0);
}

TEST_CASE("undefined mapping condition yields exactly one E-UNDEF") {
    auto r = check_source(worker(R"(
      SELF_P {
        FLUENT f { INITIATED_BY { EVENTS.up } TERMINATED_BY { EVENTS.down } }
        MAPPING { CONDITIONS { f, nonexistent } DO_ACTIONS { ACTIONS.act } }
      }
      ACTION act { DOES { METRICS.flag = true; } }
      EVENT up { INJECTABLE; } EVENT down { INJECTABLE; })"));
    CHECK_FALSE(r.spec);
    CHECK(codes(r) == std::vector<std::string>{"E-UNDEF"});
    CHECK(r.diagnostics[0].message.find("nonexistent") != std::string::npos);
}

TEST_CASE("duplicate events yield one E-DUP at the second site") {
    auto r = check_source(worker(R"(
      EVENT privateMessageSecure { INJECTABLE; }
      EVENT privateMessageSecure { INJECTABLE; })"));
    CHECK(codes(r) == std::vector<std::string>{"E-DUP"});
    CHECK(r.diagnostics[0].span.line == 5);
}

TEST_CASE("every unresolved reference is reported once") {
    auto r = check_source(worker(R"(
      ACTION a {
        GUARDS { METRICS.nope }
        DOES { call ACTIONS.ghost; send AEIP.MESSAGES.m CHANNELS.c; }
        TRIGGERS { EVENTS.never }
      })"));
    CHECK(codes(r) == std::vector<std::string>(5, "E-UNDEF"));
}

TEST_CASE("local bindings follow statement order") {
    auto guard_use = check_source(worker(R"(
      ACTION b { DOES { METRICS.flag = true; } }
      ACTION a { GUARDS { ok } DOES { ok = call ACTIONS.b; } })"));
    CHECK(codes(guard_use) == std::vector<std::string>{"E-UNDEF"});

    auto early_use = check_source(worker(R"(
      ACTION b { DOES { METRICS.flag = true; } }
      ACTION a { DOES { METRICS.flag = ok; ok = call ACTIONS.b; } })"));
    CHECK(codes(early_use) == std::vector<std::string>{"E-UNDEF"});

    auto fine = check_source(worker(R"(
      ACTION b { DOES { METRICS.flag = true; } }
      ACTION a { ENSURES { ok } DOES { ok = call ACTIONS.b; METRICS.flag = ok; } })"));
    CHECK(fine.diagnostics.empty());
}

TEST_CASE("guard over a boolean metric types cleanly") {
    auto r = check_source(worker("EVENT e { GUARDS { NOT METRICS.flag } ACTIVATION { CHANGED { METRICS.flag } } }"));
    CHECK(r.diagnostics.empty());
}

TEST_CASE("type errors") {
    auto text_to_int = check_source(worker(R"(
      METRIC count { TYPE integer; INITIAL 0; }
      ACTION a { DOES { METRICS.count = "three"; } }
      EVENT e { INJECTABLE; })"));
    CHECK(codes(text_to_int) == std::vector<std::string>{"E-TYPE"});

    auto cmp = check_source(worker(R"(
      METRIC count { TYPE integer; INITIAL 0; }
      EVENT e { GUARDS { METRICS.count > true } INJECTABLE; })"));
    CHECK(codes(cmp) == std::vector<std::string>{"E-TYPE"});

    auto more = check_source(worker(R"(
      METRIC count { TYPE integer; INITIAL 1.5; }
      METRIC r { TYPE real; INITIAL 1.5; }
      EVENT e { GUARDS { METRICS.r + 1 > 2.0 } INJECTABLE; }
      EVENT g { GUARDS { METRICS.flag < true } INJECTABLE; }
      ACTION a { ENSURES { METRICS.r } DOES { METRICS.flag = -METRICS.flag; } })"));
    CHECK(codes(more) == std::vector<std::string>(5, "E-TYPE"));
}

TEST_CASE("arithmetic and ordered text comparisons are accepted") {
    auto r = check_source(worker(R"(
      METRIC count { TYPE integer; INITIAL 0; }
      METRIC label { TYPE text; INITIAL "a"; }
      EVENT e { GUARDS { METRICS.count - 1 >= -2 AND METRICS.label < "b" } INJECTABLE; }
      ACTION a { DOES { METRICS.count = METRICS.count + 1; } })"));
    CHECK(r.diagnostics.empty());
}

TEST_CASE("overlapping fluent events") {
    auto r = check_source(worker(R"(
      SELF_P {
        FLUENT f { INITIATED_BY { EVENTS.up } TERMINATED_BY { EVENTS.down, EVENTS.up } }
        MAPPING { CONDITIONS { f } DO_ACTIONS { ACTIONS.act } }
      }
      ACTION act { DOES { METRICS.flag = true; } }
      EVENT up { INJECTABLE; } EVENT down { INJECTABLE; })"));
    CHECK(codes(r) == std::vector<std::string>{"E-FLUENT-OVERLAP"});
}

TEST_CASE("recursive calls") {
    auto r = check_source(worker(R"(
      ACTION a { DOES { call ACTIONS.b; } }
      ACTION b { DOES { METRICS.flag = true; } ONERR_DOES { call ACTIONS.a; } }
      ACTION c { DOES { call ACTIONS.c; } }
      ACTION d { DOES { call ACTIONS.a; } })"));
    REQUIRE(codes(r) == std::vector<std::string>{"E-CYCLE", "E-CYCLE"});
    CHECK(r.diagnostics[0].message == "actions call each other recursively: a, b");
    CHECK(r.diagnostics[1].message == "actions call each other recursively: c");
}

TEST_CASE("unreachable fluents and events warn without blocking") {
    auto r = check_source(worker(std::string(kPolicy) + R"(
      SELF_Q { FLUENT lonely { INITIATED_BY { EVENTS.up } TERMINATED_BY { EVENTS.silent } } }
      ACTION act { DOES { METRICS.flag = true; } }
      EVENT silent { })"));
    CHECK(r.spec);
    CHECK(codes(r) == std::vector<std::string>{"W-UNREACHABLE", "W-UNREACHABLE"});
    CHECK(r.spec->warnings.size() == 2);
}

TEST_CASE("range rules") {
    auto r = check_source(R"(
      AS s { }
      ASIP { MESSAGE m { SENDER w; RECEIVER w; } CHANNEL c { CAPACITY 0; } }
      AE w {
        SELF_EMPTY { }
        EVENT tick { ACTIVATION { ELAPSED { 0 } } }
      })");
    CHECK(codes(r) == std::vector<std::string>{"E-CAPACITY", "E-EMPTY", "E-RANGE"});
}

TEST_CASE("message scopes") {
    auto clash = check_source(R"(
      AS s { }
      ASIP { MESSAGE m { SENDER w; RECEIVER w; } }
      AE w { AEIP { MESSAGE m { SENDER w; RECEIVER w; } } })");
    CHECK(codes(clash) == std::vector<std::string>{"E-DUP"});

    auto tiers = check_source(R"(
      AS s { }
      ASIP { MESSAGE m { SENDER w; RECEIVER ghost; } }
      AE w { FRIENDS { s } })");
    CHECK(codes(tiers) == std::vector<std::string>{"E-UNDEF", "E-UNDEF"});
}

TEST_CASE("syntax errors surface through check_source") {
    auto r = check_source("AS s {", "x.assl");
    CHECK(codes(r) == std::vector<std::string>{"E-PARSE"});
}

TEST_CASE("diagnostics are deterministic and ordered") {
    const std::string text = worker(R"(
      ACTION a { DOES { call ACTIONS.ghost; METRICS.nope = 1; } TRIGGERS { EVENTS.zz } }
      EVENT e { GUARDS { METRICS.missing } })");
    auto first = check_source(text);
    auto second = check_source(text);
    REQUIRE(first.diagnostics.size() == 4);
    for (std::size_t i = 0; i < first.diagnostics.size(); ++i) {
        CHECK(format_diagnostic(first.diagnostics[i]) == format_diagnostic(second.diagnostics[i]));
        if (i) CHECK_FALSE(syntax::position_less(first.diagnostics[i].span, first.diagnostics[i - 1].span));
    }
}

}  // TEST_SUITE
