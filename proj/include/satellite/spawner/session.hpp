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
#include "satellite/http/client.hpp"
#include "satellite/spawner/profile.hpp"
#include "satellite/spawner/scheduler.hpp"
#include "satellite/spawner/script.hpp"

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace satellite::spawner {

struct SessionInfo {
    std::string token;
    std::string url;
    std::string job_id;
    std::filesystem::path script_path;
    std::string system;
};

struct SessionEnv {
    std::string hostname;
    // Pick this profile by name instead of matching the host name.
    std::optional<std::string> system_name;
    std::filesystem::path state_dir;
    const Clock* clock = nullptr;
    http::ClientOptions client;
};

// Stage names, in order.
inline constexpr std::string_view kStageDetect = "detect_system";
inline constexpr std::string_view kStageValidate = "validate";
inline constexpr std::string_view kStageIssue = "issue_token";
inline constexpr std::string_view kStageBuild = "build_script";
inline constexpr std::string_view kStageSubmit = "submit";
inline constexpr std::string_view kStageRegister = "register_job";
inline constexpr std::string_view kStageSave = "save_state";

using StageObserver = std::function<void(std::string_view stage)>;

std::string session_url(std::string_view label, std::string_view domain);

// $XDG_STATE_HOME/satellite, else $HOME/.local/state/satellite.
std::filesystem::path default_state_dir();

// Creates `path` with mode 0600; fails if it already exists.
void write_private_file(const std::filesystem::path& path, std::string_view content);

// Detects the system, obtains a token, renders and writes the batch
// script, submits it, registers the job id and records the session under
// state_dir/sessions/<label>.json. Nothing is cleaned up on failure: an
// issued token that is never redeemed expires on its own.
// `scheduler` overrides the profile's adapter.
SessionInfo start_session(const LaunchOptions& opts, const std::vector<SystemProfile>& profiles,
                          const SessionEnv& env, SchedulerAdapter* scheduler = nullptr,
                          const StageObserver& observer = {});

} // namespace satellite::spawner
