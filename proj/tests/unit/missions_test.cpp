#include "doctest.h"

#include <algorithm>
#include <map>
#include <random>

#include "asslkit/missions/missions.hpp"
#include "asslkit/runtime/interpreter.hpp"
#include "asslkit/syntax/printer.hpp"
#include "asslkit/testgen/testgen.hpp"
#include "asslkit/verifier/check.hpp"
#include "asslkit/verifier/property.hpp"
#include "fixtures.hpp"

using namespace asslkit;
using runtime::RecordKind;

namespace {

const char* kFigures23 = R"(
AS s { }
AE antsWorker {
SELF_PROTECTING {
 FLUENT inSecurityCheck {
  INITIATED_BY { EVENTS.privateMessageIsComming }
  TERMINATED_BY { EVENTS.privateMessageSecure,
                  EVENTS.privateMessageInsecure }}
 MAPPING {
  CONDITIONS { inSecurityCheck}
  DO_ACTIONS { ACTIONS.checkPrivateMessage }}}
EVENT privateMessageIsComming {
 ACTIVATION { SENT { AEIP.MESSAGES.privateMessage }}}
EVENT privateMessageInsecure {
 GUARDS { NOT METRICS.thereIsInsecureMsg }
 ACTIVATION { CHANGED { METRICS.thereIsInsecureMsg }}}
EVENT privateMessageSecure {
 GUARDS { METRICS.thereIsInsecureMsg }
 ACTIVATION { CHANGED { METRICS.thereIsInsecureMsg }}}
}
)";

struct Loaded {
    missions::MissionPackage package;
    std::shared_ptr<const runtime::Model> model;
};

Loaded load(missions::MissionPackage p) {
    auto m = p.model();
    return {std::move(p), std::move(m)};
}

runtime::RunResult run_scenario(const Loaded& l, const std::string& stem, std::uint64_t seed = 0) {
    auto sc = runtime::load_scenario(*l.model, l.package.scenario(stem).string());
    return runtime::run(*l.model, sc, 1000, sc.seed.value_or(seed));
}

runtime::RunResult run_text(const Loaded& l, const std::string& text) {
    return runtime::run(*l.model, runtime::parse_scenario(*l.model, text), 1000, 0);
}

std::size_t count(const runtime::Trace& t, RecordKind kind, const std::string& subject, const std::string& detail = "") {
    return static_cast<std::size_t>(std::count_if(t.records.begin(), t.records.end(), [&](const auto& r) {
        return r.kind == kind && r.subject == subject && (detail.empty() || r.detail == detail);
    }));
}

std::int64_t initial_int(const runtime::Model& m, const std::string& tier, const std::string& metric) {
    for (const auto& t : m.tiers) {
        if (t.name != tier) continue;
        for (const auto& mm : t.metrics) {
            if (mm.name == metric) return std::get<std::int64_t>(mm.initial);
        }
    }
    throw std::runtime_error("no metric " + tier + "." + metric);
}

/// Strict Initiated/Terminated alternation per fluent, starting inactive.
bool alternates(const runtime::Trace& t) {
    std::map<std::string, bool> active;
    for (const auto& r : t.records) {
        if (r.kind == RecordKind::FluentInitiated) {
            if (active[r.subject]) return false;
            active[r.subject] = true;
        } else if (r.kind == RecordKind::FluentTerminated) {
            if (!active[r.subject]) return false;
            active[r.subject] = false;
        }
    }
    return true;
}

}  // namespace

TEST_SUITE("missions") {

TEST_CASE("every package checks cleanly and is complete") {
    for (const auto& p : missions::all_packages()) {
        CAPTURE(p.name);
        auto r = checker::check_file(p.spec.string());
        CHECK(r.spec.has_value());
        CHECK(r.diagnostics.empty());
        CHECK_FALSE(p.scenarios.empty());
        CHECK_FALSE(p.properties.empty());
        CHECK_FALSE(p.readme.empty());
    }
    CHECK_THROWS_AS(missions::load_package("no_such_mission"), std::runtime_error);
}

TEST_CASE("every scenario stops by itself within 1000 ticks") {
    for (const auto& p : missions::all_packages()) {
        auto model = p.model();
        for (const auto& path : p.scenarios) {
            CAPTURE(path.string());
            auto sc = runtime::load_scenario(*model, path.string());
            auto r = runtime::run(*model, sc, 1000, 0);
            CHECK((r.reason == runtime::StopReason::Quiescent || r.reason == runtime::StopReason::Halted));
            CHECK(r.final_state.tick <= 1000);
            CHECK(alternates(r.trace));
        }
    }
}

TEST_CASE("every property file verifies at default bounds") {
    for (const auto& p : missions::all_packages()) {
        auto model = p.model();
        for (const auto& path : p.properties) {
            CAPTURE(path.string());
            auto pf = verifier::load_property_file(*model, path.string());
            auto lts = verifier::build_lts(*model, pf.env, {}, pf.properties);
            CHECK_FALSE(lts.truncated);
            const bool expect_violation = path.stem() == "downlink_drop";
            for (const auto& prop : pf.properties) {
                CAPTURE(prop.text);
                auto v = verifier::check(*model, lts, prop);
                CHECK(v.result != verifier::Verdict::Result::Inconclusive);
                if (!expect_violation) CHECK(v.result == verifier::Verdict::Result::Holds);
            }
        }
    }
}

TEST_CASE("self-protecting reproduces the figure declarations") {
    auto l = load(missions::ants_self_protecting());
    const auto& mission = checker::tier_at(*l.model->spec.tree, 2);
    REQUIRE(mission.name == "antsWorker");
    auto figure = fixtures::parse_ok(kFigures23);
    const auto& fig = figure.ae_tiers[0];
    REQUIRE(mission.policies.size() == 1);
    CHECK(mission.policies[0] == fig.policies[0]);
    for (std::size_t i = 0; i < 3; ++i) CHECK(mission.events[i] == fig.events[i]);

    syntax::SpecificationTree fig_only;
    fig_only.as_tier.name = "s";
    fig_only.ae_tiers.push_back(fig);
    syntax::SpecificationTree from_mission = fig_only;
    from_mission.ae_tiers[0].policies = mission.policies;
    from_mission.ae_tiers[0].events.assign(mission.events.begin(), mission.events.begin() + 3);
    CHECK(syntax::pretty_print(from_mission) == syntax::pretty_print(fig_only));
}

TEST_CASE("self-protecting scenarios") {
    auto l = load(missions::ants_self_protecting());
    auto secure = run_scenario(l, "secure");
    CHECK(count(secure.trace, RecordKind::FluentInitiated, "antsWorker.inSecurityCheck") == 1);
    CHECK(count(secure.trace, RecordKind::FluentTerminated, "antsWorker.inSecurityCheck",
                "by=antsWorker.privateMessageSecure") == 1);

    auto insecure = run_scenario(l, "insecure");
    CHECK(count(insecure.trace, RecordKind::FluentTerminated, "antsWorker.inSecurityCheck",
                "by=antsWorker.privateMessageInsecure") == 1);

    auto failure = run_scenario(l, "certificate_failure");
    CHECK(count(failure.trace, RecordKind::ActionFailed, "antsWorker.checkPrivateMessage") == 1);
    CHECK(count(failure.trace, RecordKind::EventRaised, "antsWorker.privateMessageQuarantined") == 1);
    CHECK(count(failure.trace, RecordKind::FluentTerminated, "antsWorker.inSecurityCheck") == 0);

    // The generated error-path test drives the same quarantine.
    auto suite = testgen::generate_all(*l.model);
    auto it = std::find_if(suite.begin(), suite.end(), [](const auto& t) {
        return t.id == "m0_privateMessageIsComming_E_privateMessageSecure";
    });
    REQUIRE(it != suite.end());
    auto run = testgen::run_test(*l.model, *it);
    CHECK(run.outcome.passed);
    CHECK(count(run.run.trace, RecordKind::EventRaised, "antsWorker.privateMessageQuarantined") == 1);
}

TEST_CASE("self-healing notices a dead worker within the timeout") {
    auto l = load(missions::ants_self_healing());
    const std::int64_t timeout = initial_int(*l.model, "antsRuler", "heartbeatTimeout");
    auto kill = run_scenario(l, "kill_worker");
    auto healing = fixtures::records_of(kill.trace, RecordKind::FluentInitiated, "antsRuler.inHealing");
    REQUIRE(healing.size() == 1);
    std::int64_t last_heartbeat = -1;
    for (const auto& r : kill.trace.records) {
        if (r.seq >= healing[0].seq) break;
        if (r.kind == RecordKind::MessageReceived && r.subject == "ASIP.relayedHeartbeat") last_heartbeat = r.tick;
    }
    REQUIRE(last_heartbeat >= 10);
    CHECK(healing[0].tick - last_heartbeat <= timeout);
    CHECK(healing[0].tick > last_heartbeat);
    CHECK(count(kill.trace, RecordKind::FluentTerminated, "antsRuler.inHealing", "by=antsRuler.workerReassigned") == 1);

    auto clean = run_scenario(l, "fault_free");
    CHECK(count(clean.trace, RecordKind::FluentInitiated, "antsRuler.inHealing") == 0);

    auto flood = run_scenario(l, "messenger_flood");
    CHECK(count(flood.trace, RecordKind::MessageSent, "ASIP.heartbeat", "channel=ASIP.messengerLink dropped") >= 1);
    CHECK(count(flood.trace, RecordKind::FluentInitiated, "antsRuler.inHealing") == 0);
}

TEST_CASE("self-healing detection bound holds for every kill tick and seed") {
    auto l = load(missions::ants_self_healing());
    const std::int64_t timeout = initial_int(*l.model, "antsRuler", "heartbeatTimeout");
    for (int kill = 0; kill < 16; ++kill) {
        for (std::uint64_t seed = 0; seed < 4; ++seed) {
            CAPTURE(kill);
            CAPTURE(seed);
            auto sc = runtime::parse_scenario(*l.model, "tick " + std::to_string(kill) +
                                                            " set antsWorker.workerAlive false\ntick 60 halt\n");
            auto r = runtime::run(*l.model, sc, 1000, seed);
            auto healing = fixtures::records_of(r.trace, RecordKind::FluentInitiated, "antsRuler.inHealing");
            REQUIRE(healing.size() == 1);
            std::int64_t last = 0;
            for (const auto& rec : r.trace.records) {
                if (rec.seq < healing[0].seq && rec.kind == RecordKind::MessageReceived &&
                    rec.subject == "ASIP.relayedHeartbeat") {
                    last = rec.tick;
                }
            }
            CHECK(healing[0].tick - last <= timeout);
        }
    }
}

TEST_CASE("self-configuring assigns each worker once") {
    auto l = load(missions::ants_self_configuring_and_scheduling());
    const std::int64_t workers = initial_int(*l.model, "antsRuler", "workerCount");
    auto r = run_scenario(l, "new_asteroid");
    std::size_t total = 0;
    for (int w = 1; w <= 3; ++w) {
        const std::string tier = "antsWorker" + std::to_string(w);
        const std::size_t n = count(r.trace, RecordKind::ActionSucceeded, tier + ".repartitionInstruments");
        CHECK(n == (w <= workers ? 1u : 0u));
        total += n;
    }
    CHECK(total == static_cast<std::size_t>(workers));

    auto zero = run_scenario(l, "zero_workers");
    for (int w = 1; w <= 3; ++w) {
        CHECK(count(zero.trace, RecordKind::ActionSucceeded, "antsRuler.assignWorker" + std::to_string(w)) == 0);
        CHECK(count(zero.trace, RecordKind::MessageSent, "ASIP.assignment" + std::to_string(w)) == 0);
    }
    CHECK(count(zero.trace, RecordKind::FluentTerminated, "antsRuler.inReconfiguration") == 1);

    for (int n = 0; n <= 3; ++n) {
        auto partial = run_text(l, "tick 0 set antsRuler.workerCount " + std::to_string(n) +
                                       "\ntick 1 inject antsRuler.newAsteroidDetected\n");
        std::size_t assigned = 0;
        for (const auto& rec : partial.trace.records) assigned += rec.kind == RecordKind::ActionSucceeded &&
                                                                  rec.subject.ends_with(".repartitionInstruments");
        CHECK(assigned == static_cast<std::size_t>(n));
    }
}

TEST_CASE("self-scheduling dispatches by priority") {
    auto l = load(missions::ants_self_configuring_and_scheduling());
    auto dispatch_order = [](const runtime::Trace& t) {
        std::string order;
        for (const auto& r : t.records) {
            if (r.kind == RecordKind::MessageSent && r.subject.starts_with("ASIP.exploreAsteroid")) order += r.subject.back();
        }
        return order;
    };
    // Sort oracle: higher priority first, ties to the earlier task.
    auto expected = [](std::int64_t a, std::int64_t b) {
        std::vector<std::pair<std::int64_t, char>> tasks{{a, 'A'}, {b, 'B'}};
        std::stable_sort(tasks.begin(), tasks.end(), [](auto& x, auto& y) { return x.first > y.first; });
        return std::string{tasks[0].second, tasks[1].second};
    };
    CHECK(dispatch_order(run_scenario(l, "two_asteroids").trace) == expected(1, 3));

    std::mt19937 rng(7);
    std::uniform_int_distribution<int> pick(0, 5);
    for (int i = 0; i < 40; ++i) {
        const int a = pick(rng), b = pick(rng);
        CAPTURE(a);
        CAPTURE(b);
        auto r = run_text(l, "tick 0 set antsRuler.priorityA " + std::to_string(a) + "\ntick 0 set antsRuler.priorityB " +
                                 std::to_string(b) + "\ntick 1 inject antsRuler.explorationRequested\n");
        CHECK(dispatch_order(r.trace) == expected(a, b));
        // Workers start exploring in dispatch order.
        auto started = fixtures::records_of(r.trace, RecordKind::ActionSucceeded);
        std::string explorers;
        for (const auto& rec : started) {
            if (rec.subject.ends_with(".startExploration")) explorers += rec.subject == "antsWorker1.startExploration" ? 'A' : 'B';
        }
        CHECK(explorers == expected(a, b));
    }
}

TEST_CASE("voyager session completes after every expected image") {
    auto l = load(missions::voyager_image_processing());
    const auto expected = static_cast<std::size_t>(initial_int(*l.model, "earthStation", "imagesExpected"));
    auto r = run_scenario(l, "flyby");
    auto complete = fixtures::records_of(r.trace, RecordKind::EventRaised, "earthStation.sessionComplete");
    REQUIRE(complete.size() == 1);
    std::size_t received = 0;
    for (const auto& rec : r.trace.records) {
        if (rec.seq < complete[0].seq && rec.kind == RecordKind::MessageReceived && rec.subject == "ASIP.image") ++received;
    }
    CHECK(received == expected);
    CHECK(count(r.trace, RecordKind::ActionSucceeded, "voyager.takePicture") == expected);

    auto zero = run_scenario(l, "zero_images");
    CHECK(count(zero.trace, RecordKind::MessageSent, "ASIP.image") == 0);
    CHECK(count(zero.trace, RecordKind::FluentInitiated, "earthStation.inDownlinkSession") == 0);
    CHECK(count(zero.trace, RecordKind::FluentTerminated, "voyager.inFlyby") == 1);

    auto drop = run_scenario(l, "downlink_drop");
    CHECK(count(drop.trace, RecordKind::MessageSent, "ASIP.image", "channel=ASIP.downlink dropped") == 1);
    CHECK(count(drop.trace, RecordKind::EventRaised, "earthStation.sessionComplete") == 0);
}

TEST_CASE("voyager downlink drop yields a replayable counterexample") {
    auto l = load(missions::voyager_image_processing());
    auto pf = verifier::load_property_file(*l.model, l.package.property("downlink_drop").string());
    REQUIRE(pf.properties.size() == 1);
    auto lts = verifier::build_lts(*l.model, pf.env, {}, pf.properties);
    auto v = verifier::check(*l.model, lts, pf.properties[0]);
    REQUIRE(v.result == verifier::Verdict::Result::Violated);
    REQUIRE(v.counterexample->loop_start.has_value());
    auto ex = verifier::explain(*l.model, lts, pf.properties[0], v);
    auto run = runtime::run(*l.model, ex.scenario, 1000, ex.scenario.seed.value_or(0));
    CHECK(count(run.trace, RecordKind::MessageSent, "ASIP.image", "channel=ASIP.downlink dropped") >= 1);
    auto replayed = verifier::replay(*l.model, lts, pf.properties[0], v);
    CHECK_MESSAGE(replayed.followed, replayed.message);
    CHECK_MESSAGE(replayed.falsified, replayed.message);
}

TEST_CASE("mission scenarios are reproducible") {
    for (const auto& p : missions::all_packages()) {
        auto model = p.model();
        for (const auto& path : p.scenarios) {
            auto sc = runtime::load_scenario(*model, path.string());
            const std::string first = runtime::run(*model, sc, 1000, 3).trace.to_text();
            CHECK(runtime::run(*model, sc, 1000, 3).trace.to_text() == first);
        }
    }
}

}  // TEST_SUITE
