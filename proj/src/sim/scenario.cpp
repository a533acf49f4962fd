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

#include "satellite/sim/scenario.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace satellite::sim {

using nlohmann::json;

std::string_view to_string(JobOutcome o) {
    switch (o) {
    case JobOutcome::Runs:
        return "RUNS";
    case JobOutcome::NeverStarts:
        return "NEVER_STARTS";
    case JobOutcome::FailsAtStart:
        return "FAILS_AT_START";
    case JobOutcome::DiesMidway:
        return "DIES_MIDWAY";
    }
    return "?";
}

std::string_view to_string(AppBehavior b) {
    switch (b) {
    case AppBehavior::EchoHttp:
        return "ECHO_HTTP";
    case AppBehavior::EchoWebsocket:
        return "ECHO_WEBSOCKET";
    case AppBehavior::SlowResponse:
        return "SLOW_RESPONSE";
    }
    return "?";
}

std::vector<std::string> SimScenario::validate() const {
    std::vector<std::string> v;
    if (queue_delay.count() < 0)
        v.emplace_back("queue_delay must not be negative");
    if (clock_step.count() <= 0)
        v.emplace_back("clock_step must be positive");
    if (job_time_minutes < 1)
        v.emplace_back("job_time_minutes must be at least 1");
    if (mapping_ttl_override && mapping_ttl_override->count() <= 0)
        v.emplace_back("mapping_ttl_override must be positive");
    if (mapping_ttl_override && *mapping_ttl_override > wall_time())
        v.emplace_back("mapping_ttl_override exceeds the job wall time");
    if (issuance_grace.count() < 0)
        v.emplace_back("issuance_grace must not be negative");
    if (reconcile_interval.count() <= 0)
        v.emplace_back("reconcile_interval must be positive");
    if (job_runtime && job_runtime->count() <= 0)
        v.emplace_back("job_runtime must be positive");
    if (job_runtime && job_outcome != JobOutcome::Runs)
        v.emplace_back("job_runtime only applies to RUNS");
    if (dies_after && dies_after->count() <= 0)
        v.emplace_back("dies_after must be positive");
    if (dies_after && job_outcome != JobOutcome::DiesMidway)
        v.emplace_back("dies_after only applies to DIES_MIDWAY");
    return v;
}

namespace {

template <class Enum, std::size_t N>
std::optional<Enum> parse_enum(const std::string& s, const Enum (&all)[N]) {
    for (auto e : all)
        if (to_string(e) == s)
            return e;
    return std::nullopt;
}

} // namespace

SimScenario parse_scenario(std::string_view json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ScenarioError(std::string("scenario is not valid JSON: ") + e.what());
    }
    if (!j.is_object())
        throw ScenarioError("scenario must be a JSON object");

    SimScenario s;
    std::vector<std::string> v;
    static const std::set<std::string> known = {"queue_delay",     "job_outcome",      "app_behavior",
                                                "mapping_ttl_override", "clock_step", "job_time_minutes",
                                                "issuance_grace",  "reconcile_interval", "job_runtime",
                                                "dies_after",      "seed"};
    for (const auto& [k, _] : j.items())
        if (!known.contains(k))
            v.push_back(k + " is not a recognized setting");

    auto seconds = [&](const char* key, auto& out) {
        auto it = j.find(key);
        if (it == j.end() || it->is_null())
            return;
        if (!it->is_number_integer()) {
            v.push_back(std::string(key) + " must be an integer number of seconds");
            return;
        }
        out = Seconds{it->get<std::int64_t>()};
    };
    seconds("queue_delay", s.queue_delay);
    seconds("clock_step", s.clock_step);
    seconds("issuance_grace", s.issuance_grace);
    seconds("reconcile_interval", s.reconcile_interval);
    seconds("mapping_ttl_override", s.mapping_ttl_override);
    seconds("job_runtime", s.job_runtime);
    seconds("dies_after", s.dies_after);

    if (auto it = j.find("job_time_minutes"); it != j.end()) {
        if (it->is_number_integer())
            s.job_time_minutes = it->get<int>();
        else
            v.emplace_back("job_time_minutes must be an integer");
    }
    if (auto it = j.find("seed"); it != j.end()) {
        if (it->is_number_unsigned())
            s.seed = it->get<std::uint64_t>();
        else
            v.emplace_back("seed must be a non-negative integer");
    }
    if (auto it = j.find("job_outcome"); it != j.end()) {
        static const JobOutcome all[] = {JobOutcome::Runs, JobOutcome::NeverStarts, JobOutcome::FailsAtStart,
                                         JobOutcome::DiesMidway};
        auto parsed = it->is_string() ? parse_enum(it->get<std::string>(), all) : std::nullopt;
        if (parsed)
            s.job_outcome = *parsed;
        else
            v.emplace_back("job_outcome must be RUNS, NEVER_STARTS, FAILS_AT_START or DIES_MIDWAY");
    }
    if (auto it = j.find("app_behavior"); it != j.end()) {
        static const AppBehavior all[] = {AppBehavior::EchoHttp, AppBehavior::EchoWebsocket,
                                          AppBehavior::SlowResponse};
        auto parsed = it->is_string() ? parse_enum(it->get<std::string>(), all) : std::nullopt;
        if (parsed)
            s.app_behavior = *parsed;
        else
            v.emplace_back("app_behavior must be ECHO_HTTP, ECHO_WEBSOCKET or SLOW_RESPONSE");
    }
    for (auto& e : s.validate())
        v.push_back(std::move(e));
    if (!v.empty()) {
        std::string msg = "invalid scenario:";
        for (const auto& e : v)
            msg += "\n  - " + e;
        throw ScenarioError(msg);
    }
    return s;
}

SimScenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ScenarioError("cannot read " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

std::string to_json(const SimScenario& s) {
    json j{{"queue_delay", s.queue_delay.count()},
           {"job_outcome", to_string(s.job_outcome)},
           {"app_behavior", to_string(s.app_behavior)},
           {"clock_step", s.clock_step.count()},
           {"job_time_minutes", s.job_time_minutes},
           {"issuance_grace", s.issuance_grace.count()},
           {"reconcile_interval", s.reconcile_interval.count()},
           {"seed", s.seed}};
    if (s.mapping_ttl_override)
        j["mapping_ttl_override"] = s.mapping_ttl_override->count();
    if (s.job_runtime)
        j["job_runtime"] = s.job_runtime->count();
    if (s.dies_after)
        j["dies_after"] = s.dies_after->count();
    return j.dump();
}

} // namespace satellite::sim
