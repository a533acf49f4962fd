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

#include "satellite/common/log.hpp"
#include "satellite/http/client.hpp"
#include "satellite/http/websocket_client.hpp"
#include "satellite/ops/service.hpp"
#include "satellite/sim/scheduler.hpp"
#include "satellite/spawner/session.hpp"

#include <boost/asio/executor_work_guard.hpp>

#include <algorithm>
#include <iostream>
#include <random>
#include <thread>

namespace satellite::sim {

namespace {

namespace fs = std::filesystem;

constexpr std::string_view kDomain = "sim.satellite.test";
constexpr std::string_view kSentinelPrefix = "sim-app job ";

// io_context run by a few threads for the simulated applications.
struct AppThreads {
    explicit AppThreads(int n) : guard(ioc.get_executor()) {
        for (int i = 0; i < n; ++i)
            threads.emplace_back([this] { ioc.run(); });
    }
    ~AppThreads() {
        guard.reset();
        ioc.stop();
        for (auto& t : threads)
            t.join();
    }

    boost::asio::io_context ioc;
    boost::asio::executor_work_guard<boost::asio::io_context::executor_type> guard;
    std::vector<std::thread> threads;
};

struct WorkDir {
    explicit WorkDir(const std::optional<fs::path>& requested) {
        if (requested) {
            path = *requested;
            fs::create_directories(path);
            return;
        }
        auto tmpl = (fs::temp_directory_path() / "satellite-sim-XXXXXX").string();
        if (!::mkdtemp(tmpl.data()))
            throw ScenarioError("cannot create a work directory under " + fs::temp_directory_path().string());
        path = tmpl;
        owned = true;
    }
    ~WorkDir() {
        std::error_code ec;
        if (owned)
            fs::remove_all(path, ec);
    }

    fs::path path;
    bool owned = false;
};

PageKind classify(int status, std::string_view body) {
    switch (status) {
    case 200:
        return body.starts_with(kSentinelPrefix) ? PageKind::Proxy : PageKind::Pending;
    case 404:
        return PageKind::NotFound;
    case 502:
        return PageKind::BadGateway;
    case 504:
        return PageKind::GatewayTimeout;
    default:
        return PageKind::Other;
    }
}

PageKind fetch_http(std::uint16_t port, const std::string& host) {
    try {
        auto res = http::request("127.0.0.1", port,
                                 http::ClientRequest{.method = "GET", .target = "/", .headers = {{"Host", host}}});
        return classify(res.status, res.body);
    } catch (const http::ClientError&) {
        return PageKind::Other;
    }
}

PageKind fetch_websocket(std::uint16_t port, const std::string& host) {
    try {
        http::WsClient ws("127.0.0.1", port, "/", {.host_header = host});
        ws.send({.binary = false, .data = "ping"});
        auto echo = ws.receive();
        ws.close();
        return echo && echo->data == "ping" ? PageKind::Proxy : PageKind::Other;
    } catch (const http::WsUpgradeError& e) {
        // A refused upgrade is answered with the page a plain GET would get.
        return e.status() == 200 ? PageKind::Pending : classify(e.status(), {});
    } catch (const std::exception&) {
        return PageKind::Other;
    }
}

ops::ServiceConfig service_config(const SimScenario& s, const fs::path& work) {
    ops::ServiceConfig cfg;
    cfg.registry.trusted_cidrs = CidrSet({Cidr::from_string("127.0.0.0/8"), Cidr::from_string("::1/128")});
    cfg.registry.satellite_domain = std::string(kDomain);
    cfg.registry.wall_clock_limit = s.wall_time();
    cfg.registry.mapping_ttl = s.mapping_ttl();
    cfg.registry.issuance_grace = s.issuance_grace;
    cfg.registry.reconcile_interval = s.reconcile_interval;
    cfg.frontend.bind_address = "127.0.0.1";
    cfg.frontend.port = 0;
    cfg.frontend.dev_plaintext = true;
    cfg.management.bind_address = "127.0.0.1";
    cfg.management.port = 0;
    cfg.journal.path = work / "journal.ndjson";
    cfg.journal.fsync = false;
    return cfg;
}

spawner::SystemProfile sim_profile(const SimScenario& s, std::uint16_t management_port,
                                   const fs::path& template_path) {
    spawner::SystemProfile p;
    p.name = "sim";
    p.hostname_patterns = {"sim-*"};
    p.satellite_management_url = "http://127.0.0.1:" + std::to_string(management_port);
    p.satellite_domain = std::string(kDomain);
    p.scheduler = spawner::SchedulerKind::Simulated;
    p.default_partition = "debug";
    p.default_time_minutes = s.job_time_minutes;
    p.max_time_minutes = s.job_time_minutes;
    p.template_path = template_path;
    return p;
}

} // namespace

Seconds scenario_time_bound(const SimScenario& s) {
    auto step = std::max(s.clock_step, s.reconcile_interval);
    return s.queue_delay + s.wall_time() + s.issuance_grace + s.mapping_ttl() + 10 * step + Seconds{60};
}

ScenarioResult run_scenario(const SimScenario& scenario, const HarnessOptions& opts) {
    if (auto v = scenario.validate(); !v.empty()) {
        std::string msg = "invalid scenario:";
        for (const auto& s : v)
            msg += "\n  " + s;
        throw ScenarioError(msg);
    }
    if (opts.template_path.empty())
        throw ScenarioError("no batch script template given");

    WorkDir work(opts.work_dir);
    ManualClock clock(from_unix(1'700'000'000));
    const Timestamp t0 = clock.now();

    ScenarioResult result;
    auto record = [&](EventKind kind, std::string detail) {
        auto t = clock.now() - t0;
        if (opts.verbose)
            std::cerr << "t=" << t.count() << " " << to_string(kind) << (detail.empty() ? "" : " " + detail) << "\n";
        result.transcript.add(t, kind, std::move(detail));
    };

    std::mt19937_64 seed_rng(scenario.seed);
    ops::ServiceOptions sopts{.clock = &clock, .rng = registry::seeded_random(seed_rng()), .reconcile_thread = false};
    ops::Service service(service_config(scenario, work.path), sopts);
    service.start();

    AppThreads apps(2);
    SimulatedScheduler scheduler(clock, apps.ioc,
                                 SimJobBehavior{.queue_delay = scenario.queue_delay,
                                                .outcome = scenario.job_outcome,
                                                .app = scenario.app_behavior,
                                                .runtime = scenario.job_runtime,
                                                .dies_after = scenario.dies_after},
                                 record);

    std::vector<spawner::SystemProfile> profiles{
        sim_profile(scenario, service.management_port(), opts.template_path)};
    spawner::LaunchOptions launch;
    launch.notebook_dir = fs::absolute(work.path);
    spawner::SessionEnv env{.hostname = "sim-harness",
                            .system_name = std::nullopt,
                            .state_dir = work.path / "state",
                            .clock = &clock,
                            .client = {}};
    auto observer = [&](std::string_view stage) {
        if (stage == spawner::kStageBuild)
            record(EventKind::TokenIssued, {});
        else if (stage == spawner::kStageRegister)
            record(EventKind::JobSubmitted, {});
    };
    auto session = spawner::start_session(launch, profiles, env, &scheduler, observer);
    result.url = session.url;
    result.label = session.token;
    result.job_id = session.job_id;
    const std::string host = session.token + "." + std::string(kDomain);

    const auto bound = scenario_time_bound(scenario);
    bool proxied = false;
    bool ended = false;
    for (bool first = true;; first = false) {
        if (!first)
            clock.advance(scenario.clock_step);
        if (clock.now() - t0 > bound)
            throw ScenarioError("SCENARIO_TIMEOUT: no NOT_FOUND after the token ended within " +
                                std::to_string(bound.count()) + "s");

        scheduler.tick(clock.now());

        if (auto summary = service.reconciler().tick(clock.now())) {
            if (std::ranges::find(summary->activated, session.token) != summary->activated.end())
                record(EventKind::Activated, {});
            if (std::ranges::find(summary->expired, session.token) != summary->expired.end())
                record(EventKind::Expired, {});
        }

        auto page = scenario.app_behavior == AppBehavior::EchoWebsocket
                        ? fetch_websocket(service.frontend_port(), host)
                        : fetch_http(service.frontend_port(), host);
        record(EventKind::PageObserved, std::string(to_string(page)));
        if (page == PageKind::Proxy && !proxied) {
            proxied = true;
            record(EventKind::FirstProxiedResponse, {});
        }

        ended = ended || result.transcript.index_of(EventKind::Expired) ||
                result.transcript.index_of(EventKind::Destroyed);
        if (ended && page == PageKind::NotFound)
            break;
    }

    result.active_mappings_after = service.registry().active_mappings();
    service.stop();
    return result;
}

} // namespace satellite::sim
