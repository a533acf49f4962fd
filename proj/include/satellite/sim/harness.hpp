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

#include "satellite/sim/scenario.hpp"
#include "satellite/sim/transcript.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace satellite::sim {

struct HarnessOptions {
    // Journal, scripts and state go here; a temporary directory when unset.
    std::optional<std::filesystem::path> work_dir;
    std::filesystem::path template_path;
    // Print each event to stderr as it happens.
    bool verbose = false;
};

struct ScenarioResult {
    Transcript transcript;
    std::string url;
    std::string label;
    std::string job_id;
    // Checked after the run.
    std::size_t active_mappings_after = 0;
};

// Spawns the service in plaintext development mode on loopback, launches a
// session through the spawner with a simulated scheduler, and steps the
// simulated clock: advance, scheduler tick, reconcile tick, browser fetch.
// Stops once the token has ended and the URL answers NOT_FOUND. Throws
// ScenarioError (SCENARIO_TIMEOUT) if that does not happen within the
// bound implied by the scenario.
ScenarioResult run_scenario(const SimScenario& scenario, const HarnessOptions& opts);

// Simulated seconds after which run_scenario gives up.
Seconds scenario_time_bound(const SimScenario& s);

} // namespace satellite::sim
