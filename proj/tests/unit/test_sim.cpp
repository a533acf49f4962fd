// Copyright 2026 The Satellite Proxy Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "satellite/sim/harness.hpp"
#include "satellite/sim/scheduler.hpp"
#include "satellite/spawner/errors.hpp"
#include "satellite/spawner/port.hpp"

#include "support/management_world.hpp"
#include "support/tempdir.hpp"

#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

using namespace satellite;
using namespace satellite::sim;
using satellite::testing::ip;

namespace {

namespace fs = std::filesystem;

fs::path source_dir() { return SATELLITE_SOURCE_DIR; }
fs::path shipped_template() { return source_dir() / "templates" / "slurm-jupyter.sh.tmpl"; }

std::string read_file(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ScenarioResult run(const SimScenario& s) { return run_scenario(s, {.template_path = shipped_template()}); }

// A job script written by hand, independent of the shipped template.
std::string script(int minutes, const std::string& token, const std::string& url) {
    return "#!/bin/bash\n#SBATCH --job-name=t\n#SBATCH --partition=debug\n#SBATCH --time=" + std::to_string(minutes) +
           "\nSATELLITE_TOKEN=" + token + "\nSATELLITE_MANAGEMENT_URL=" + url + "\necho hi\n";
}

std::size_t index(const Transcript& t, EventKind k, std::string_view detail = {}) {
    auto i = t.index_of(k, detail);
    REQUIRE_MESSAGE(i.has_value(), "missing " << to_string(k) << " " << detail);
    return *i;
}

std::optional<std::size_t> last_index(const Transcript& t, EventKind k, std::string_view detail) {
    std::optional<std::size_t> out;
    for (std::size_t i = 0; i < t.events.size(); ++i)
        if (t.events[i].kind == k && t.events[i].detail == detail)
            out = i;
    return out;
}

void check_non_decreasing(const Transcript& t) {
    for (std::size_t i = 1; i < t.events.size(); ++i)
        REQUIRE(t.events[i - 1].t <= t.events[i].t);
}

// One scheduler with its own app threads, talking to a served registry.
struct SchedulerWorld {
    explicit SchedulerWorld(SimJobBehavior b)
        : sched(mgmt.clock, apps.ioc, b, [this](EventKind k, const std::string& d) { events.emplace_back(k, d); }) {}

    std::string issue() { return mgmt.reg.issue_token(ip("127.0.0.1"), mgmt.clock.now()).label(); }

    satellite::testing::ServedManagement mgmt;
    satellite::testing::IoThreads apps{2};
    std::vector<std::pair<EventKind, std::string>> events;
    SimulatedScheduler sched;
};

} // namespace

TEST_CASE("scenario: defaults and JSON round trip") {
    auto s = parse_scenario("{}");
    CHECK(s.queue_delay == Seconds{30});
    CHECK(s.job_outcome == JobOutcome::Runs);
    CHECK(s.app_behavior == AppBehavior::EchoHttp);
    CHECK(s.clock_step == Seconds{1});
    CHECK_FALSE(s.mapping_ttl_override);

    SimScenario t;
    t.queue_delay = Seconds{7};
    t.job_outcome = JobOutcome::DiesMidway;
    t.app_behavior = AppBehavior::SlowResponse;
    t.mapping_ttl_override = Seconds{90};
    t.clock_step = Seconds{3};
    t.job_time_minutes = 4;
    t.dies_after = Seconds{50};
    t.seed = 99;
    auto back = parse_scenario(to_json(t));
    CHECK(to_json(back) == to_json(t));
    CHECK(back.mapping_ttl() == Seconds{90});
    CHECK(back.wall_time() == Seconds{240});
}

TEST_CASE("scenario: every violation is reported") {
    std::string msg;
    try {
        parse_scenario(R"({"queue_delay": -1, "clock_step": 0, "job_outcome": "SOMETIMES",
                           "app_behavior": 3, "colour": "blue", "mapping_ttl_override": 1.5})");
    } catch (const ScenarioError& e) {
        msg = e.what();
    }
    CHECK(msg.find("queue_delay") != std::string::npos);
    CHECK(msg.find("clock_step") != std::string::npos);
    CHECK(msg.find("job_outcome") != std::string::npos);
    CHECK(msg.find("app_behavior") != std::string::npos);
    CHECK(msg.find("colour") != std::string::npos);
    CHECK(msg.find("mapping_ttl_override") != std::string::npos);
    CHECK_THROWS_AS(parse_scenario("[1]"), ScenarioError);
    CHECK_THROWS_AS(parse_scenario("{"), ScenarioError);
    CHECK_THROWS_AS(parse_scenario(R"({"mapping_ttl_override": 700, "job_time_minutes": 10})"), ScenarioError);
    CHECK_THROWS_AS(parse_scenario(R"({"job_runtime": 10, "job_outcome": "NEVER_STARTS"})"), ScenarioError);
    CHECK_NOTHROW(parse_scenario(R"({"queue_delay": 0})"));
}

TEST_CASE("scenario: shipped scenario files load") {
    int n = 0;
    for (const auto& e : fs::directory_iterator(source_dir() / "scenarios")) {
        CAPTURE(e.path());
        CHECK_NOTHROW(load_scenario(e.path()));
        ++n;
    }
    CHECK(n >= 5);
}

TEST_CASE("transcript: NDJSON round trip over random transcripts") {
    std::mt19937_64 rng(17);
    const EventKind kinds[] = {EventKind::TokenIssued, EventKind::JobSubmitted, EventKind::StatusPosted,
                               EventKind::Redeemed,    EventKind::Activated,    EventKind::FirstProxiedResponse,
                               EventKind::Destroyed,   EventKind::Expired,      EventKind::PageObserved};
    const char* details[] = {"", "PENDING", "PROXY", "NOT_FOUND", "quote \" and \\ and \n newline", "RUNNING"};
    for (int trial = 0; trial < 300; ++trial) {
        Transcript t;
        std::int64_t now = 0;
        auto n = rng() % 40;
        for (std::size_t i = 0; i < n; ++i) {
            now += static_cast<std::int64_t>(rng() % 5);
            t.add(Seconds{now}, kinds[rng() % 9], details[rng() % 6]);
        }
        auto text = t.to_ndjson();
        CHECK(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')) == n);
        CHECK(Transcript::from_ndjson(text) == t);
    }
}

TEST_CASE("transcript: page kinds and lookups") {
    Transcript t;
    t.add(Seconds{0}, EventKind::PageObserved, "PENDING");
    t.add(Seconds{5}, EventKind::StatusPosted, "RUNNING");
    t.add(Seconds{5}, EventKind::PageObserved, "PROXY");
    t.add(Seconds{9}, EventKind::PageObserved, "NOT_FOUND");
    CHECK(t.pages() == std::vector{PageKind::Pending, PageKind::Proxy, PageKind::NotFound});
    CHECK(t.index_of(EventKind::PageObserved, "PROXY") == 2u);
    CHECK(t.time_of(EventKind::StatusPosted) == Seconds{5});
    CHECK_FALSE(t.index_of(EventKind::Expired));
    CHECK_THROWS(Transcript::from_ndjson("{\"t\":1}\n"));
    CHECK_THROWS(Transcript::from_ndjson("{\"t\":1,\"event\":\"NOPE\"}\n"));
}

TEST_CASE("parse_script: reads the directives back") {
    auto p = parse_script(script(45, "a-b-c", "http://127.0.0.1:9"));
    CHECK(p.time_minutes == 45);
    CHECK(p.partition == "debug");
    CHECK(p.token == "a-b-c");
    CHECK(p.management_url == "http://127.0.0.1:9");
}

TEST_CASE("parse_script: a malformed script fails submission") {
    auto expect_submit_failure = [](const std::string& text) {
        try {
            parse_script(text);
            FAIL("accepted: " << text);
        } catch (const spawner::SpawnError& e) {
            CHECK(e.code() == spawner::SpawnErrc::Submit);
        }
    };
    expect_submit_failure("");
    expect_submit_failure("#!/bin/bash\necho no directives\n");
    expect_submit_failure("#SBATCH --partition=debug\nSATELLITE_TOKEN=a-b-c\nSATELLITE_MANAGEMENT_URL=http://x\n");
    expect_submit_failure(script(0, "a-b-c", "http://x"));
    // An unrendered template is malformed.
    expect_submit_failure(read_file(shipped_template()));
}

TEST_CASE("simulated scheduler: submissions get distinct increasing ids") {
    SchedulerWorld w({.queue_delay = Seconds{5}, .outcome = JobOutcome::NeverStarts});
    auto url = w.mgmt.base_url();
    std::vector<std::uint64_t> ids;
    for (int i = 0; i < 20; ++i)
        ids.push_back(std::stoull(w.sched.submit("x.sh", script(10, w.issue(), url))));
    for (std::size_t i = 1; i < ids.size(); ++i)
        CHECK(ids[i] > ids[i - 1]);
    CHECK(w.sched.jobs().size() == 20);
    CHECK_THROWS_AS(w.sched.submit("x.sh", "garbage"), spawner::SpawnError);
    CHECK(w.sched.jobs().size() == 20);
}

TEST_CASE("simulated scheduler: tick past the queue delay runs the job and reports it") {
    SchedulerWorld w({.queue_delay = Seconds{30}, .outcome = JobOutcome::Runs});
    auto label = w.issue();
    auto id = w.sched.submit("x.sh", script(10, label, w.mgmt.base_url()));

    w.sched.tick(w.mgmt.clock.now());
    CHECK(w.sched.job(id)->state == SimJobState::Pending);
    REQUIRE(w.mgmt.board.find(id));
    CHECK(w.mgmt.board.find(id)->state == management::JobState::Pending);
    CHECK(w.mgmt.board.find(id)->detail == "position 1 in queue");

    w.mgmt.clock.advance(Seconds{29});
    w.sched.tick(w.mgmt.clock.now());
    CHECK(w.sched.job(id)->state == SimJobState::Pending);

    w.mgmt.clock.advance(Seconds{1});
    w.sched.tick(w.mgmt.clock.now());
    auto job = w.sched.job(id);
    CHECK(job->state == SimJobState::Running);
    CHECK(job->app_alive);
    CHECK(w.mgmt.board.find(id)->state == management::JobState::Running);
    auto rec = w.mgmt.reg.find(label);
    CHECK(rec->state == registry::TokenState::Mapped);
    CHECK(rec->mapping->target_port == *job->app_port);
}

TEST_CASE("simulated scheduler: wall time kills the app and leaves expiry to the TTL") {
    SchedulerWorld w({.queue_delay = Seconds{0}, .outcome = JobOutcome::Runs});
    auto label = w.issue();
    auto id = w.sched.submit("x.sh", script(1, label, w.mgmt.base_url()));
    w.sched.tick(w.mgmt.clock.now());
    REQUIRE(w.sched.job(id)->state == SimJobState::Running);
    auto port = *w.sched.job(id)->app_port;
    CHECK(spawner::wait_for_port("127.0.0.1", port, std::chrono::seconds(2)));

    w.mgmt.clock.advance(Seconds{59});
    w.sched.tick(w.mgmt.clock.now());
    CHECK(w.sched.job(id)->app_alive);
    w.mgmt.clock.advance(Seconds{1});
    w.sched.tick(w.mgmt.clock.now());
    CHECK(w.sched.job(id)->state == SimJobState::Cancelled);
    CHECK_FALSE(w.sched.job(id)->app_alive);
    CHECK(w.mgmt.board.find(id)->state == management::JobState::Cancelled);
    CHECK(w.mgmt.reg.find(label)->state == registry::TokenState::Mapped);

    w.mgmt.clock.advance(w.mgmt.reg.config().mapping_ttl);
    auto summary = w.mgmt.reg.reconcile(w.mgmt.clock.now());
    CHECK(summary.expired == std::vector{label});
    CHECK(w.mgmt.reg.find(label)->state == registry::TokenState::Expired);
    for (const auto& [kind, _] : w.events)
        CHECK(kind != EventKind::Destroyed);
}

TEST_CASE("simulated scheduler: two jobs have independent lifecycles") {
    SchedulerWorld w({.queue_delay = Seconds{10}, .outcome = JobOutcome::Runs});
    auto a_label = w.issue();
    auto a = w.sched.submit("a.sh", script(1, a_label, w.mgmt.base_url()));
    w.sched.tick(w.mgmt.clock.now());
    w.mgmt.clock.advance(Seconds{5});
    auto b_label = w.issue();
    auto b = w.sched.submit("b.sh", script(2, b_label, w.mgmt.base_url()));
    CHECK(a != b);
    w.sched.tick(w.mgmt.clock.now());
    CHECK(w.mgmt.board.find(b)->detail == "position 2 in queue");

    w.mgmt.clock.advance(Seconds{5});
    w.sched.tick(w.mgmt.clock.now());
    CHECK(w.sched.job(a)->state == SimJobState::Running);
    CHECK(w.sched.job(b)->state == SimJobState::Pending);
    w.mgmt.clock.advance(Seconds{5});
    w.sched.tick(w.mgmt.clock.now());
    CHECK(w.sched.job(b)->state == SimJobState::Running);
    CHECK(w.sched.job(a)->app_port != w.sched.job(b)->app_port);

    w.mgmt.clock.advance(Seconds{55});
    w.sched.tick(w.mgmt.clock.now());
    CHECK(w.sched.job(a)->state == SimJobState::Cancelled);
    CHECK(w.sched.job(b)->state == SimJobState::Running);
    CHECK(w.sched.job(b)->app_alive);
}

TEST_CASE("simulated scheduler: FAILS_AT_START reports failure and never redeems") {
    SchedulerWorld w({.queue_delay = Seconds{0}, .outcome = JobOutcome::FailsAtStart});
    auto label = w.issue();
    auto id = w.sched.submit("x.sh", script(5, label, w.mgmt.base_url()));
    w.sched.tick(w.mgmt.clock.now());
    CHECK(w.sched.job(id)->state == SimJobState::Failed);
    CHECK(w.mgmt.board.find(id)->state == management::JobState::Failed);
    CHECK(w.mgmt.reg.find(label)->state == registry::TokenState::Issued);
}

TEST_CASE("harness: RUNS follows the lifecycle order") {
    SimScenario s;
    s.queue_delay = Seconds{30};
    s.job_outcome = JobOutcome::Runs;
    s.app_behavior = AppBehavior::EchoHttp;
    auto r = run(s);
    const auto& t = r.transcript;
    check_non_decreasing(t);
    CHECK(index(t, EventKind::TokenIssued) < index(t, EventKind::JobSubmitted));
    CHECK(index(t, EventKind::JobSubmitted) < index(t, EventKind::StatusPosted));
    CHECK(index(t, EventKind::StatusPosted) < index(t, EventKind::Redeemed));
    CHECK(index(t, EventKind::Redeemed) < index(t, EventKind::Activated));
    CHECK(index(t, EventKind::Activated) < index(t, EventKind::FirstProxiedResponse));
    auto activated = index(t, EventKind::Activated);
    CHECK(index(t, EventKind::PageObserved, "PENDING") < activated);
    CHECK(*last_index(t, EventKind::PageObserved, "PENDING") < activated);
    CHECK(index(t, EventKind::PageObserved, "PROXY") > activated);
    CHECK(r.url == "https://" + r.label + ".sim.satellite.test");
    CHECK_FALSE(r.job_id.empty());
}

TEST_CASE("harness: NEVER_STARTS stays pending until issuance expiry") {
    SimScenario s;
    s.queue_delay = Seconds{30};
    s.job_outcome = JobOutcome::NeverStarts;
    s.job_time_minutes = 5;
    s.issuance_grace = Seconds{60};
    s.clock_step = Seconds{10};
    auto r = run(s);
    const auto& t = r.transcript;
    check_non_decreasing(t);
    CHECK_FALSE(t.index_of(EventKind::Redeemed));
    CHECK_FALSE(t.index_of(EventKind::Activated));
    auto expired = index(t, EventKind::Expired);
    // Issued at t=0, so the token lives wall time + grace.
    CHECK(t.events[expired].t == Seconds{360});
    for (std::size_t i = 0; i < t.events.size(); ++i) {
        if (t.events[i].kind != EventKind::PageObserved)
            continue;
        CHECK(t.events[i].detail == (i < expired ? "PENDING" : "NOT_FOUND"));
    }
    CHECK(t.pages().back() == PageKind::NotFound);
}

TEST_CASE("harness: a TTL override expires the mapping on time") {
    for (int step : {1, 3}) {
        for (int interval : {1, 2, 5}) {
            SimScenario s;
            s.queue_delay = Seconds{20};
            s.mapping_ttl_override = Seconds{60};
            s.clock_step = Seconds{step};
            s.reconcile_interval = Seconds{interval};
            CAPTURE(step);
            CAPTURE(interval);
            auto r = run(s);
            const auto& t = r.transcript;
            // The job is redeemed at the first tick at or after the queue delay.
            auto start = ((s.queue_delay.count() + step - 1) / step) * step;
            CHECK(t.time_of(EventKind::Redeemed) == Seconds{start});
            auto expected = start + 60;
            auto got = t.time_of(EventKind::Expired)->count();
            CHECK(got >= expected);
            // Reconciles land on the first tick a full interval after the last one.
            auto period = ((interval + step - 1) / step) * step;
            CHECK(got <= expected + period);
            auto expired = index(t, EventKind::Expired);
            for (std::size_t i = expired; i < t.events.size(); ++i)
                if (t.events[i].kind == EventKind::PageObserved)
                    CHECK(t.events[i].detail == "NOT_FOUND");
            CHECK_FALSE(t.index_of(EventKind::Destroyed));
        }
    }
}

TEST_CASE("harness: DIES_MIDWAY shows bad gateway until the mapping expires") {
    SimScenario s;
    s.queue_delay = Seconds{10};
    s.job_outcome = JobOutcome::DiesMidway;
    s.job_time_minutes = 3;
    s.dies_after = Seconds{30};
    s.clock_step = Seconds{5};
    auto r = run(s);
    const auto& t = r.transcript;
    auto failed = index(t, EventKind::StatusPosted, "FAILED");
    CHECK(t.events[failed].t == Seconds{40});
    CHECK(index(t, EventKind::PageObserved, "BAD_GATEWAY") > failed);
    CHECK(t.time_of(EventKind::Expired) == Seconds{10 + 180});
    CHECK_FALSE(t.index_of(EventKind::Destroyed));
}

TEST_CASE("harness: job_runtime ends with destroy") {
    SimScenario s;
    s.queue_delay = Seconds{10};
    s.job_runtime = Seconds{40};
    s.clock_step = Seconds{5};
    for (auto app : {AppBehavior::EchoHttp, AppBehavior::EchoWebsocket, AppBehavior::SlowResponse}) {
        s.app_behavior = app;
        CAPTURE(to_string(app));
        auto r = run(s);
        const auto& t = r.transcript;
        CHECK(t.time_of(EventKind::Destroyed) == Seconds{50});
        CHECK(index(t, EventKind::FirstProxiedResponse) < index(t, EventKind::Destroyed));
        CHECK_FALSE(t.index_of(EventKind::Expired));
        CHECK(t.pages().back() == PageKind::NotFound);
    }
}

TEST_CASE("harness: identical scenarios give identical transcripts") {
    for (const char* name : {"runs.json", "dies_midway.json", "websocket.json"}) {
        CAPTURE(name);
        auto s = load_scenario(source_dir() / "scenarios" / name);
        auto a = run(s);
        auto b = run(s);
        CHECK(a.transcript == b.transcript);
        CHECK(a.label == b.label);
        CHECK(a.transcript.to_ndjson() == b.transcript.to_ndjson());
    }
}

TEST_CASE("harness: runs.json matches its golden transcript") {
    auto s = load_scenario(source_dir() / "scenarios" / "runs.json");
    auto r = run(s);
    auto golden = Transcript::from_ndjson(read_file(source_dir() / "tests" / "data" / "runs.golden.ndjson"));
    CHECK(r.transcript == golden);
}

TEST_CASE("harness: every shipped scenario cleans up") {
    for (const auto& e : fs::directory_iterator(source_dir() / "scenarios")) {
        CAPTURE(e.path());
        auto s = load_scenario(e.path());
        auto r = run(s);
        const auto& t = r.transcript;
        check_non_decreasing(t);
        CHECK(r.active_mappings_after == 0);
        CHECK(t.pages().back() == PageKind::NotFound);
        CHECK((t.index_of(EventKind::Expired) || t.index_of(EventKind::Destroyed)));
        CHECK(t.events.back().t <= scenario_time_bound(s));
    }
}

TEST_CASE("harness: RUNS serves proxied content within one interval of the job starting") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 12; ++trial) {
        SimScenario s;
        s.queue_delay = Seconds{static_cast<std::int64_t>(rng() % 90)};
        s.clock_step = Seconds{static_cast<std::int64_t>(1 + rng() % 6)};
        s.reconcile_interval = Seconds{static_cast<std::int64_t>(1 + rng() % 6)};
        s.job_time_minutes = 2 + static_cast<int>(rng() % 4);
        s.job_runtime = Seconds{30};
        s.seed = rng();
        CAPTURE(to_json(s));
        auto r = run(s);
        auto first = r.transcript.time_of(EventKind::FirstProxiedResponse);
        REQUIRE(first);
        auto bound = s.queue_delay + s.clock_step + std::max(s.clock_step, s.reconcile_interval);
        CHECK(*first <= bound);
        CHECK(r.active_mappings_after == 0);
    }
}

TEST_CASE("harness: work directory is kept when given") {
    satellite::testing::TempDir dir;
    SimScenario s;
    s.queue_delay = Seconds{0};
    s.job_runtime = Seconds{5};
    auto r = run_scenario(s, {.work_dir = dir.path(), .template_path = shipped_template()});
    CHECK(fs::exists(dir.path() / "journal.ndjson"));
    CHECK(fs::exists(dir.path() / "state" / "scripts" / (r.label + ".sh")));
    CHECK(fs::exists(dir.path() / "state" / "sessions" / (r.label + ".json")));
    CHECK_THROWS_AS(run_scenario(s, {}), ScenarioError);
}
