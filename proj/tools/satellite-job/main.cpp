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

#include "satellite/http/client.hpp"
#include "satellite/management/paths.hpp"
#include "satellite/spawner/errors.hpp"
#include "satellite/spawner/port.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitPort = 3;
constexpr int kExitSatellite = 4;

using satellite::http::ClientError;
using satellite::http::ClientOptions;

int post(const std::string& base, std::string_view path,
         const std::vector<std::pair<std::string, std::string>>& fields, const std::string& bind) {
    ClientOptions opts;
    opts.local_address = bind;
    std::string url = base;
    while (!url.empty() && url.back() == '/')
        url.pop_back();
    url += path;
    try {
        auto res = satellite::http::post_form(url, fields, opts);
        if (res.status != 200) {
            std::cerr << "satellite-job: " << url << " answered " << res.status << ": " << res.body;
            return kExitSatellite;
        }
        return 0;
    } catch (const ClientError& e) {
        std::cerr << "satellite-job: cannot reach " << e.what() << "\n";
        return kExitSatellite;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"satellite-job: job-side helper for picking a port and redeeming a satellite token"};
    app.require_subcommand(1);

    int low = 8000;
    int high = 8999;
    std::string address = "0.0.0.0";
    auto* pick = app.add_subcommand("pick-port", "Print a free TCP port from a range");
    pick->add_option("--low", low, "Lowest port (at least 1024)");
    pick->add_option("--high", high, "Highest port");
    pick->add_option("--address", address, "Address the application will bind");

    std::string host = "127.0.0.1";
    int port = 0;
    int timeout_s = 120;
    auto* wait = app.add_subcommand("wait-port", "Wait until something listens on host:port");
    wait->add_option("--host", host, "Host address");
    wait->add_option("--port", port, "Port")->required()->check(CLI::Range(1, 65535));
    wait->add_option("--timeout", timeout_s, "Seconds to wait")->check(CLI::PositiveNumber);

    std::string url;
    std::string token;
    std::string bind;
    auto* redeem = app.add_subcommand("redeem", "Map the token's URL to this node and port");
    auto* destroy = app.add_subcommand("destroy", "Remove the token's mapping");
    for (auto* sub : {redeem, destroy}) {
        sub->add_option("--url", url, "Satellite management URL")->required();
        sub->add_option("--token", token, "Token label")->required();
        sub->add_option("--port", port, "Application port")->required();
        sub->add_option("--bind", bind, "Local address to send the request from");
    }

    std::string job_id;
    std::string state;
    std::string detail;
    auto* status = app.add_subcommand("status", "Report the job's scheduler state");
    status->add_option("--url", url, "Satellite management URL")->required();
    status->add_option("--job-id", job_id, "Scheduler job id")->required();
    status->add_option("--state", state, "PENDING, RUNNING, COMPLETED, FAILED, CANCELLED or UNKNOWN")->required();
    status->add_option("--detail", detail, "Free-form detail");
    status->add_option("--bind", bind, "Local address to send the request from");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    if (pick->parsed()) {
        try {
            std::cout << satellite::spawner::pick_free_port(low, high, address) << "\n";
            return 0;
        } catch (const satellite::spawner::SpawnError& e) {
            std::cerr << "satellite-job: " << e.what() << "\n";
            return e.code() == satellite::spawner::SpawnErrc::NoPort ? kExitPort : kExitUsage;
        }
    }
    if (wait->parsed()) {
        if (satellite::spawner::wait_for_port(host, static_cast<std::uint16_t>(port), std::chrono::seconds(timeout_s)))
            return 0;
        std::cerr << "satellite-job: nothing listening on " << host << ":" << port << " after " << timeout_s
                  << " s\n";
        return kExitPort;
    }
    std::vector<std::pair<std::string, std::string>> fields;
    if (redeem->parsed() || destroy->parsed()) {
        fields = {{"token", token}, {"port", std::to_string(port)}};
        return post(url, redeem->parsed() ? satellite::management::kRedeemPath : satellite::management::kDestroyPath,
                    fields, bind);
    }
    fields = {{"job_id", job_id}, {"state", state}};
    if (!detail.empty())
        fields.emplace_back("detail", detail);
    return post(url, satellite::management::kJobStatusPath, fields, bind);
}
