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

#include "satellite/spawner/profile.hpp"

#include "satellite/http/url.hpp"
#include "satellite/spawner/errors.hpp"

#include <json.hpp>

#include <fnmatch.h>

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace satellite::spawner {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(SchedulerKind k) { return k == SchedulerKind::Simulated ? "SIMULATED" : "SLURM_COMMAND"; }

std::vector<std::string> SystemProfile::validate() const {
    std::vector<std::string> v;
    std::string p = "system '" + name + "': ";
    if (name.empty())
        v.emplace_back("system with empty name");
    if (hostname_patterns.empty())
        v.push_back(p + "hostname_patterns must not be empty");
    if (!http::parse_url(satellite_management_url))
        v.push_back(p + "satellite_management_url '" + satellite_management_url + "' is not an http(s) URL");
    if (satellite_domain.empty() || satellite_domain.find('.') == std::string::npos)
        v.push_back(p + "satellite_domain '" + satellite_domain + "' is not a domain name");
    if (default_partition.empty())
        v.push_back(p + "default_partition must not be empty");
    if (default_time_minutes < 1)
        v.push_back(p + "default_time_minutes must be at least 1");
    if (default_time_minutes > max_time_minutes)
        v.push_back(p + "default_time_minutes (" + std::to_string(default_time_minutes) +
                    ") exceeds max_time_minutes (" + std::to_string(max_time_minutes) + ")");
    if (template_path.empty())
        v.push_back(p + "template_path must not be empty");
    if (max_gpus < 0)
        v.push_back(p + "max_gpus must not be negative");
    if (scheduler == SchedulerKind::SlurmCommand && submit_command.empty())
        v.push_back(p + "submit_command must not be empty");
    if (port_range_low < 1024 || port_range_high > 65535 || port_range_low > port_range_high)
        v.push_back(p + "port range must lie within 1024-65535 with low <= high");
    return v;
}

namespace {

template <class T>
void read(const json& obj, const char* key, T& out, const std::string& where, std::vector<std::string>& v) {
    auto it = obj.find(key);
    if (it == obj.end())
        return;
    try {
        out = it->get<T>();
    } catch (const json::exception&) {
        v.push_back(where + key + " has the wrong type");
    }
}

SystemProfile read_profile(const json& j, const fs::path& base, std::size_t index, std::vector<std::string>& v) {
    SystemProfile p;
    std::string where = "systems[" + std::to_string(index) + "].";
    if (!j.is_object()) {
        v.push_back(where.substr(0, where.size() - 1) + " must be an object");
        return p;
    }
    static const std::set<std::string> known = {
        "name",           "hostname_patterns", "satellite_management_url", "satellite_domain", "scheduler",
        "default_partition", "default_account", "default_time_minutes",    "template_path",    "max_time_minutes",
        "max_gpus",       "submit_command",    "spool_dir",                "port_range_low",   "port_range_high"};
    for (const auto& [k, _] : j.items())
        if (!known.contains(k))
            v.push_back(where + k + " is not a recognized setting");
    for (const char* required : {"name", "hostname_patterns", "satellite_management_url", "satellite_domain",
                                 "default_partition", "template_path"})
        if (!j.contains(required))
            v.push_back(where + required + " is required");

    read(j, "name", p.name, where, v);
    read(j, "hostname_patterns", p.hostname_patterns, where, v);
    read(j, "satellite_management_url", p.satellite_management_url, where, v);
    while (!p.satellite_management_url.empty() && p.satellite_management_url.back() == '/')
        p.satellite_management_url.pop_back();
    read(j, "satellite_domain", p.satellite_domain, where, v);
    std::string scheduler = "SLURM_COMMAND";
    read(j, "scheduler", scheduler, where, v);
    if (scheduler == "SIMULATED")
        p.scheduler = SchedulerKind::Simulated;
    else if (scheduler != "SLURM_COMMAND")
        v.push_back(where + "scheduler must be SLURM_COMMAND or SIMULATED");
    read(j, "default_partition", p.default_partition, where, v);
    if (auto it = j.find("default_account"); it != j.end() && !it->is_null()) {
        std::string account;
        read(j, "default_account", account, where, v);
        p.default_account = account;
    }
    read(j, "default_time_minutes", p.default_time_minutes, where, v);
    read(j, "max_time_minutes", p.max_time_minutes, where, v);
    read(j, "max_gpus", p.max_gpus, where, v);
    read(j, "submit_command", p.submit_command, where, v);
    read(j, "port_range_low", p.port_range_low, where, v);
    read(j, "port_range_high", p.port_range_high, where, v);
    std::string path;
    read(j, "template_path", path, where, v);
    if (!path.empty())
        p.template_path = fs::path(path).is_absolute() ? fs::path(path) : base / path;
    path.clear();
    read(j, "spool_dir", path, where, v);
    if (!path.empty())
        p.spool_dir = fs::path(path).is_absolute() ? fs::path(path) : base / path;
    return p;
}

std::string known_systems(const std::vector<SystemProfile>& profiles) {
    std::string out;
    for (const auto& p : profiles)
        out += (out.empty() ? "" : ", ") + p.name;
    return out.empty() ? "(none)" : out;
}

} // namespace

std::vector<SystemProfile> parse_profiles(std::string_view json_text, const fs::path& base_dir) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw SpawnError(SpawnErrc::Usage, "config", std::string("not valid JSON: ") + e.what());
    }
    std::vector<std::string> v;
    std::vector<SystemProfile> out;
    if (!doc.is_object() || !doc.contains("systems") || !doc["systems"].is_array()) {
        v.emplace_back("top level must be an object with a \"systems\" list");
    } else {
        for (const auto& [k, _] : doc.items())
            if (k != "systems")
                v.push_back(k + " is not a recognized setting");
        std::size_t i = 0;
        std::set<std::string> names;
        for (const auto& item : doc["systems"]) {
            auto p = read_profile(item, base_dir, i++, v);
            for (auto& e : p.validate())
                v.push_back(std::move(e));
            if (!p.name.empty() && !names.insert(p.name).second)
                v.push_back("system '" + p.name + "' is listed twice");
            out.push_back(std::move(p));
        }
        if (out.empty())
            v.emplace_back("systems must not be empty");
    }
    if (!v.empty()) {
        std::string msg = "invalid client configuration:";
        for (const auto& s : v)
            msg += "\n  - " + s;
        throw SpawnError(SpawnErrc::Usage, "config", msg);
    }
    return out;
}

std::vector<SystemProfile> load_profiles(const fs::path& path) {
    std::ifstream in(path);
    if (!in)
        throw SpawnError(SpawnErrc::Usage, "config", "cannot read " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_profiles(ss.str(), fs::absolute(path).parent_path());
}

const SystemProfile& detect_system(std::string_view hostname, const std::vector<SystemProfile>& profiles) {
    std::string host(hostname);
    for (const auto& p : profiles)
        for (const auto& pattern : p.hostname_patterns)
            if (::fnmatch(pattern.c_str(), host.c_str(), FNM_CASEFOLD) == 0)
                return p;
    throw SpawnError(SpawnErrc::NoMatch, "detect_system",
                     "host '" + host + "' matches no configured system; known systems: " + known_systems(profiles));
}

const SystemProfile& find_system(std::string_view name, const std::vector<SystemProfile>& profiles) {
    for (const auto& p : profiles)
        if (p.name == name)
            return p;
    throw SpawnError(SpawnErrc::NoMatch, "detect_system",
                     "no system named '" + std::string(name) + "'; known systems: " + known_systems(profiles));
}

std::optional<fs::path> locate_client_config(const std::optional<std::string>& flag,
                                             const std::optional<std::string>& env_value,
                                             const std::optional<fs::path>& config_home,
                                             const fs::path& system_path) {
    if (flag && !flag->empty())
        return fs::path(*flag);
    if (env_value && !env_value->empty())
        return fs::path(*env_value);
    std::error_code ec;
    if (config_home) {
        auto user = *config_home / "satellite" / "systems.json";
        if (fs::is_regular_file(user, ec))
            return user;
    }
    if (fs::is_regular_file(system_path, ec))
        return system_path;
    return std::nullopt;
}

std::optional<fs::path> user_config_home() {
    if (const char* xdg = std::getenv("XDG_CONFIG_HOME"); xdg && *xdg)
        return fs::path(xdg);
    if (const char* home = std::getenv("HOME"); home && *home)
        return fs::path(home) / ".config";
    return std::nullopt;
}

} // namespace satellite::spawner
