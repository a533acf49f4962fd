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

#include "satellite/spawner/script.hpp"

#include "satellite/common/template.hpp"
#include "satellite/spawner/errors.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace satellite::spawner {

namespace {

constexpr std::string_view kStage = "build_script";

// Characters that need no quoting anywhere in a shell script.
bool shell_safe(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
               std::string_view("_./:@%+,=-").find(c) != std::string_view::npos;
    });
}

void require_safe(std::string_view field, std::string_view value) {
    if (!shell_safe(value))
        throw SpawnError(SpawnErrc::Validation, std::string(kStage),
                         std::string(field) + " '" + std::string(value) +
                             "' contains characters that are not allowed in a batch script");
}

} // namespace

std::string_view to_string(ServiceKind s) { return s == ServiceKind::JupyterLab ? "jupyterlab" : "notebook"; }

std::optional<ServiceKind> parse_service(std::string_view s) {
    if (s == "notebook")
        return ServiceKind::Notebook;
    if (s == "jupyterlab" || s == "lab")
        return ServiceKind::JupyterLab;
    return std::nullopt;
}

std::map<std::string, std::string, std::less<>> script_values(const SystemProfile& profile, const LaunchOptions& opts,
                                                              std::string_view token) {
    if (opts.batch_script && opts.service)
        throw SpawnError(SpawnErrc::Usage, std::string(kStage),
                         "a custom batch script and a service type cannot both be given");

    std::string partition = opts.partition.value_or(profile.default_partition);
    require_safe("partition", partition);

    std::string account;
    if (opts.account)
        account = *opts.account;
    else if (profile.default_account)
        account = *profile.default_account;
    if (!account.empty())
        require_safe("account", account);

    int minutes = opts.time_minutes.value_or(profile.default_time_minutes);
    if (minutes < 1)
        throw SpawnError(SpawnErrc::Validation, std::string(kStage), "time must be at least 1 minute");
    if (minutes > profile.max_time_minutes)
        throw SpawnError(SpawnErrc::Validation, std::string(kStage),
                         "time " + std::to_string(minutes) + " minutes exceeds the " + profile.name + " limit of " +
                             std::to_string(profile.max_time_minutes));

    if (opts.gpus < 0)
        throw SpawnError(SpawnErrc::Validation, std::string(kStage), "gpus must not be negative");
    if (opts.gpus > profile.max_gpus)
        throw SpawnError(SpawnErrc::Validation, std::string(kStage),
                         std::to_string(opts.gpus) + " GPUs requested but " + profile.name + " allows at most " +
                             std::to_string(profile.max_gpus));

    if (!opts.notebook_dir.is_absolute())
        throw SpawnError(SpawnErrc::Validation, std::string(kStage),
                         "notebook directory '" + opts.notebook_dir.string() + "' must be an absolute path");
    require_safe("notebook directory", opts.notebook_dir.string());

    std::string container_prefix;
    if (opts.container_image) {
        require_safe("container image", opts.container_image->string());
        container_prefix = "singularity exec " + std::string(opts.gpus > 0 ? "--nv " : "") +
                           opts.container_image->string() + " ";
    }

    require_safe("token", token);
    require_safe("management URL", profile.satellite_management_url);

    auto service = opts.service.value_or(ServiceKind::Notebook);
    return {
        {"partition", partition},
        {"account", account},
        {"time_minutes", std::to_string(minutes)},
        {"workdir", opts.notebook_dir.string()},
        {"gpus", opts.gpus > 0 ? std::to_string(opts.gpus) : std::string()},
        {"service_cmd", service == ServiceKind::JupyterLab ? "jupyter lab" : "jupyter notebook"},
        {"container_prefix", container_prefix},
        {"token", std::string(token)},
        {"management_url", profile.satellite_management_url},
        {"port_range_low", std::to_string(profile.port_range_low)},
        {"port_range_high", std::to_string(profile.port_range_high)},
    };
}

std::string render_batch_script(std::string_view template_text,
                                const std::map<std::string, std::string, std::less<>>& values) {
    auto lookup = [&](std::string_view name) -> std::optional<std::string> {
        auto it = values.find(name);
        if (it == values.end())
            return std::nullopt;
        return it->second;
    };

    std::string kept;
    kept.reserve(template_text.size());
    std::string_view rest = template_text;
    while (!rest.empty()) {
        auto nl = rest.find('\n');
        auto line = rest.substr(0, nl == std::string_view::npos ? rest.size() : nl + 1);
        rest.remove_prefix(line.size());
        if (line.starts_with("#SBATCH")) {
            auto names = template_placeholders(line);
            bool all_empty = !names.empty() && std::all_of(names.begin(), names.end(), [&](const std::string& n) {
                auto v = lookup(n);
                return v && v->empty();
            });
            if (all_empty)
                continue;
        }
        kept.append(line);
    }

    auto result = render_template(kept, lookup);
    if (!result.unresolved.empty()) {
        std::vector<std::string> unique;
        for (const auto& n : result.unresolved)
            if (std::find(unique.begin(), unique.end(), n) == unique.end())
                unique.push_back(n);
        std::string names;
        for (const auto& n : unique)
            names += (names.empty() ? "" : ", ") + ("{{" + n + "}}");
        throw SpawnError(SpawnErrc::Template, std::string(kStage), "unresolved placeholder " + names);
    }
    if (auto pos = result.text.find("{{"); pos != std::string::npos) {
        auto end = result.text.find('\n', pos);
        throw SpawnError(SpawnErrc::Template, std::string(kStage),
                         "malformed placeholder near '" + result.text.substr(pos, std::min<std::size_t>(end - pos, 40)) +
                             "'");
    }
    return result.text;
}

std::string build_batch_script(const SystemProfile& profile, const LaunchOptions& opts, std::string_view token) {
    auto values = script_values(profile, opts, token);
    auto path = opts.batch_script.value_or(profile.template_path);
    std::ifstream in(path);
    if (!in)
        throw SpawnError(SpawnErrc::Template, std::string(kStage), "cannot read template " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return render_batch_script(ss.str(), values);
}

} // namespace satellite::spawner
