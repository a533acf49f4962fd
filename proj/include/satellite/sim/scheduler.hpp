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

#pragma once

#include "satellite/common/clock.hpp"
#include "satellite/sim/fake_app.hpp"
#include "satellite/sim/scenario.hpp"
#include "satellite/sim/transcript.hpp"
#include "satellite/spawner/scheduler.hpp"

#include <boost/asio/io_context.hpp>

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

namespace satellite::sim {

// What a submitted script asked for, read back from its directives.
struct ParsedScript {
    int time_minutes = 0;
    std::string partition;
    std::string token;
    std::string management_url;
};

// Throws spawner::SpawnError(Submit) if a required directive is missing.
ParsedScript parse_script(std::string_view text);

enum class SimJobState { Pending, Running, Completed, Failed, Cancelled };

std::string_view to_string(SimJobState s);

struct SimJobBehavior {
    Seconds queue_delay{30};
    JobOutcome outcome = JobOutcome::Runs;
    AppBehavior app = AppBehavior::EchoHttp;
    std::optional<Seconds> runtime;
    std::optional<Seconds> dies_after;
};

struct SimJobView {
    std::string id;
    SimJobState state = SimJobState::Pending;
    ParsedScript script;
    Timestamp submitted_at;
    std::optional<Timestamp> started_at;
    std::optional<std::uint16_t> app_port;
    bool app_alive = false;
};

// Batch scheduler stand-in. Jobs wait queue_delay, then run their body in
// process: start a fake application on loopback, redeem the token, and
// report status, all through the real management API. Wall time is
// enforced by killing the application without destroying the token.
class SimulatedScheduler final : public spawner::SchedulerAdapter {
  public:
    using EventFn = std::function<void(EventKind, std::string detail)>;

    SimulatedScheduler(const Clock& clock, boost::asio::io_context& app_ioc, SimJobBehavior behavior,
                       EventFn on_event = {});
    ~SimulatedScheduler() override;

    std::string submit(const std::filesystem::path& script_path, const std::string& script_text) override;
    // Accepts a script under an id chosen elsewhere (a spool directory).
    void adopt(const std::string& id, const std::string& script_text);

    // Advances every job to `now`.
    void tick(Timestamp now);

    [[nodiscard]] std::optional<SimJobView> job(const std::string& id) const;
    [[nodiscard]] std::vector<SimJobView> jobs() const;

  private:
    struct Job;
    void enqueue(std::string id, const std::string& script_text);
    void post_status(Job& job, std::string_view state, std::string_view detail);
    void start(Job& job, Timestamp now);
    void stop_app(Job& job);

    const Clock& clock_;
    boost::asio::io_context& app_ioc_;
    SimJobBehavior behavior_;
    EventFn on_event_;
    mutable std::mutex mu_;
    std::map<std::string, std::unique_ptr<Job>> jobs_;
    std::uint64_t next_id_ = 1000;
};

} // namespace satellite::sim
