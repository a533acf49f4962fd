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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace satellite::sim {

enum class JobOutcome { Runs, NeverStarts, FailsAtStart, DiesMidway };
enum class AppBehavior { EchoHttp, EchoWebsocket, SlowResponse };

std::string_view to_string(JobOutcome o);
std::string_view to_string(AppBehavior b);

struct SimScenario {
    Seconds queue_delay{30};
    JobOutcome job_outcome = JobOutcome::Runs;
    AppBehavior app_behavior = AppBehavior::EchoHttp;
    std::optional<Seconds> mapping_ttl_override;
    Seconds clock_step{1};
    // Requested wall time; also the registry's wall-clock limit and the
    // default mapping TTL.
    int job_time_minutes = 10;
    // Unredeemed tokens live wall time + this long.
    Seconds issuance_grace{60};
    Seconds reconcile_interval{1};
    // RUNS only: the job finishes on its own after this long and destroys
    // its token. Unset runs until the wall time kills it.
    std::optional<Seconds> job_runtime;
    // DIES_MIDWAY only: the application dies this long after starting.
    // Defaults to half the wall time.
    std::optional<Seconds> dies_after;
    std::uint64_t seed = 1;

    [[nodiscard]] Seconds wall_time() const { return Seconds{job_time_minutes * 60}; }
    [[nodiscard]] Seconds mapping_ttl() const { return mapping_ttl_override.value_or(wall_time()); }
    [[nodiscard]] std::vector<std::string> validate() const;
};

class ScenarioError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// JSON with durations in integer seconds. Throws ScenarioError listing
// every problem.
SimScenario parse_scenario(std::string_view json_text);
SimScenario load_scenario(const std::filesystem::path& path);
std::string to_json(const SimScenario& s);

} // namespace satellite::sim
