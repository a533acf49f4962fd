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

#include "satellite/spawner/profile.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace satellite::spawner {

enum class ServiceKind { Notebook, JupyterLab };

std::string_view to_string(ServiceKind s);
std::optional<ServiceKind> parse_service(std::string_view s);

// What the user asked for. Unset fields take the profile's defaults.
struct LaunchOptions {
    std::optional<std::string> partition;
    std::filesystem::path notebook_dir;
    std::optional<std::string> account;
    // A custom template used instead of the profile's.
    std::optional<std::filesystem::path> batch_script;
    std::optional<int> time_minutes;
    std::optional<ServiceKind> service;
    int gpus = 0;
    std::optional<std::filesystem::path> container_image;
    bool print_env = false;
};

// Names every shipped template must be able to use.
inline constexpr std::string_view kScriptPlaceholders[] = {
    "partition", "account",   "time_minutes", "workdir",        "gpus",           "service_cmd",
    "container_prefix",       "token",        "management_url", "port_range_low", "port_range_high",
};

// Placeholder values for a launch. Throws SpawnError(Usage) for
// conflicting options and SpawnError(Validation) for values outside the
// profile's limits or unsafe for a shell script.
std::map<std::string, std::string, std::less<>> script_values(const SystemProfile& profile, const LaunchOptions& opts,
                                                              std::string_view token);

// Substitutes `{{name}}` placeholders. `#SBATCH` lines whose placeholders
// all resolve empty are dropped. Throws SpawnError(Template) naming any
// placeholder left unresolved.
std::string render_batch_script(std::string_view template_text,
                                const std::map<std::string, std::string, std::less<>>& values);

// Reads the template (opts.batch_script or the profile's) and renders it.
std::string build_batch_script(const SystemProfile& profile, const LaunchOptions& opts, std::string_view token);

} // namespace satellite::spawner
