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

#include "satellite/common/log.hpp"
#include "satellite/ops/config.hpp"
#include "satellite/sim/harness.hpp"
#include "satellite/sim/scheduler.hpp"
#include "satellite/spawner/errors.hpp"

#include <CLI11.hpp>

#include <boost/asio/executor_work_guard.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

namespace {

namespace fs = std::filesystem;
using namespace satellite;

constexpr int kExitScenario = 1;
constexpr int kExitUsage = 2;

volatile std::sig_atomic_t g_stop = 0;

void on_signal(int) { g_stop = 1; }

int run(const fs::path& scenario_path, const fs::path& template_path, const std::optional<fs::path>& out,
        const std::optional<fs::path>& work_dir, bool verbose) {
    sim::ScenarioResult result;
    try {
        auto scenario = sim::load_scenario(scenario_path);
        result = sim::run_scenario(scenario, {.work_dir = work_dir, .template_path = template_path, .verbose = verbose});
    } catch (const sim::ScenarioError& e) {
        std::cerr << "satellite-sim: " << e.what() << "\n";
        return kExitScenario;
    } catch (const spawner::SpawnError& e) {
        std::cerr << "satellite-sim: session failed: " << e.what() << "\n";
        return kExitScenario;
    }
    auto text = result.transcript.to_ndjson();
    if (out) {
        std::ofstream f(*out, std::ios::trunc);
        f << text;
        if (!f) {
            std::cerr << "satellite-sim: cannot write " << out->string() << "\n";
            return kExitScenario;
        }
    } else {
        std::cout << text;
    }
    std::cerr << "satellite-sim: url=" << result.url << " job=" << result.job_id
              << " active_mappings_after=" << result.active_mappings_after << "\n";
    return 0;
}

// Adopts scripts a SIMULATED profile spooled into `dir` and runs them
// against the real clock until signalled.
int spool(const fs::path& dir, sim::SimJobBehavior behavior, std::chrono::milliseconds poll) {
    SystemClock clock;
    boost::asio::io_context ioc;
    auto guard = boost::asio::make_work_guard(ioc);
    std::vector<std::thread> threads;
    for (int i = 0; i < 2; ++i)
        threads.emplace_back([&] { ioc.run(); });

    int rc = 0;
    {
        sim::SimulatedScheduler scheduler(clock, ioc, behavior, [](sim::EventKind kind, const std::string& detail) {
            log::emit(log::Level::info, "sim_event",
                      {{"kind", std::string(to_string(kind))}, {"detail", detail}});
        });
        std::set<std::string> seen;
        log::emit(log::Level::info, "spool_started", {{"dir", dir.string()}});
        while (!g_stop) {
            std::error_code ec;
            for (const auto& entry : fs::directory_iterator(dir, ec)) {
                if (entry.path().extension() != ".sh")
                    continue;
                auto id = entry.path().stem().string();
                if (!seen.insert(id).second)
                    continue;
                std::ifstream f(entry.path());
                std::stringstream text;
                text << f.rdbuf();
                try {
                    scheduler.adopt(id, text.str());
                    log::emit(log::Level::info, "spool_adopted", {{"job_id", id}});
                } catch (const spawner::SpawnError& e) {
                    log::emit(log::Level::warn, "spool_rejected", {{"job_id", id}, {"error", e.what()}});
                }
            }
            if (ec) {
                std::cerr << "satellite-sim: cannot read " << dir.string() << ": " << ec.message() << "\n";
                rc = kExitScenario;
                break;
            }
            scheduler.tick(clock.now());
            std::this_thread::sleep_for(poll);
        }
    }
    guard.reset();
    ioc.stop();
    for (auto& t : threads)
        t.join();
    return rc;
}

template <class Enum, std::size_t N>
Enum enum_from(const std::string& name, const Enum (&all)[N]) {
    for (auto e : all)
        if (sim::to_string(e) == name)
            return e;
    return all[0];
}

template <class Enum, std::size_t N>
std::vector<std::string> enum_names(const Enum (&all)[N]) {
    std::vector<std::string> out;
    for (auto e : all)
        out.emplace_back(sim::to_string(e));
    return out;
}

constexpr sim::JobOutcome kOutcomes[] = {sim::JobOutcome::Runs, sim::JobOutcome::NeverStarts,
                                         sim::JobOutcome::FailsAtStart, sim::JobOutcome::DiesMidway};
constexpr sim::AppBehavior kBehaviors[] = {sim::AppBehavior::EchoHttp, sim::AppBehavior::EchoWebsocket,
                                           sim::AppBehavior::SlowResponse};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"satellite-sim: scripted end-to-end runs against a simulated scheduler"};
    app.require_subcommand(1);
    std::string log_level = "warn";
    app.add_option("--log-level", log_level, "trace, debug, info, warn, error, critical or off");

    fs::path scenario;
    fs::path template_path = SATELLITE_DEFAULT_TEMPLATE;
    std::optional<fs::path> transcript;
    std::optional<fs::path> work_dir;
    bool verbose = false;
    auto* run_cmd = app.add_subcommand("run", "Run one scenario and print its transcript as NDJSON");
    run_cmd->add_option("-s,--scenario", scenario, "Scenario JSON file")->required()->check(CLI::ExistingFile);
    run_cmd->add_option("--template", template_path, "Batch script template")
        ->envname("SATELLITE_SIM_TEMPLATE")
        ->check(CLI::ExistingFile);
    run_cmd->add_option("-o,--transcript", transcript, "Write the transcript here instead of stdout");
    run_cmd->add_option("--work-dir", work_dir, "Keep the journal, scripts and state here");
    run_cmd->add_flag("-v,--verbose", verbose, "Print events to stderr as they happen");

    fs::path spool_dir;
    int queue_delay = 5;
    int poll_ms = 200;
    std::string outcome = "RUNS";
    std::string behavior = "ECHO_HTTP";
    auto* spool_cmd = app.add_subcommand("spool", "Run jobs spooled by a SIMULATED system in real time");
    spool_cmd->add_option("--spool-dir", spool_dir, "Directory the spawner writes <id>.sh into")
        ->required()
        ->check(CLI::ExistingDirectory);
    spool_cmd->add_option("--queue-delay", queue_delay, "Seconds each job waits in the queue")
        ->check(CLI::NonNegativeNumber);
    spool_cmd->add_option("--poll-ms", poll_ms, "Milliseconds between scans")->check(CLI::Range(10, 60'000));
    spool_cmd->add_option("--outcome", outcome, "Job outcome")->check(CLI::IsMember(enum_names(kOutcomes)));
    spool_cmd->add_option("--app", behavior, "Application behavior")->check(CLI::IsMember(enum_names(kBehaviors)));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }
    if (!ops::is_log_level(log_level)) {
        std::cerr << "satellite-sim: unknown log level " << log_level << "\n";
        return kExitUsage;
    }
    log::init(log_level);

    if (run_cmd->parsed())
        return run(scenario, template_path, transcript, work_dir, verbose);

    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::signal(SIGPIPE, SIG_IGN);
    return spool(spool_dir, {.queue_delay = Seconds{queue_delay},
                  .outcome = enum_from(outcome, kOutcomes),
                  .app = enum_from(behavior, kBehaviors)},
                 std::chrono::milliseconds(poll_ms));
}
