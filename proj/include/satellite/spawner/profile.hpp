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

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace satellite::spawner {

enum class SchedulerKind { SlurmCommand, Simulated };

std::string_view to_string(SchedulerKind k);

// One supported HPC system from the client configuration file.
struct SystemProfile {
    std::string name;
    std::vector<std::string> hostname_patterns;
    std::string satellite_management_url;
    std::string satellite_domain;
    SchedulerKind scheduler = SchedulerKind::SlurmCommand;
    std::string default_partition;
    std::optional<std::string> default_account;
    int default_time_minutes = 30;
    std::filesystem::path template_path;
    int max_time_minutes = 2880;
    // Largest GPU request accepted; 0 for CPU-only systems.
    int max_gpus = 0;
    // Argument vector the script path is appended to.
    std::vector<std::string> submit_command{"sbatch"};
    // Where the simulated scheduler spools scripts. Empty uses the state
    // directory.
    std::filesystem::path spool_dir;
    int port_range_low = 8000;
    int port_range_high = 8999;

    [[nodiscard]] std::vector<std::string> validate() const;
};

// Parses {"systems": [...]}. Relative template and spool paths resolve
// against `base_dir`. Throws SpawnError(Usage) listing every violation.
std::vector<SystemProfile> parse_profiles(std::string_view json_text, const std::filesystem::path& base_dir);
std::vector<SystemProfile> load_profiles(const std::filesystem::path& path);

// First profile, in file order, with a pattern matching `hostname`
// (shell glob, case-insensitive). Throws SpawnError(NoMatch) naming the
// known systems.
const SystemProfile& detect_system(std::string_view hostname, const std::vector<SystemProfile>& profiles);
const SystemProfile& find_system(std::string_view name, const std::vector<SystemProfile>& profiles);

inline constexpr std::string_view kClientConfigEnv = "SATELLITE_CLIENT_CONFIG";
inline constexpr std::string_view kSystemClientConfig = "/etc/satellite/systems.json";

// Client configuration lookup: explicit flag, then the environment
// variable, then the per-user file under `config_home`, then the
// system-wide file. Missing candidates after the flag and variable are
// skipped.
std::optional<std::filesystem::path> locate_client_config(const std::optional<std::string>& flag,
                                                          const std::optional<std::string>& env_value,
                                                          const std::optional<std::filesystem::path>& config_home,
                                                          const std::filesystem::path& system_path =
                                                              std::filesystem::path(kSystemClientConfig));

// $XDG_CONFIG_HOME, else $HOME/.config.
std::optional<std::filesystem::path> user_config_home();

} // namespace satellite::spawner
