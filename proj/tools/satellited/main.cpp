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

#include "satellite/common/log.hpp"
#include "satellite/ops/config.hpp"
#include "satellite/ops/service.hpp"
#include "satellite/registry/errors.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <pthread.h>
#include <unistd.h>

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitUsage = 2;
constexpr int kExitStartup = 3;

void write_ready_file(const std::filesystem::path& path, const satellite::ops::Service& svc) {
    nlohmann::json j{{"pid", ::getpid()},
                     {"frontend_port", svc.frontend_port()},
                     {"management_port", svc.management_port()}};
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        out << j.dump() << "\n";
        if (!out)
            throw std::runtime_error("cannot write " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"satellited: reverse proxy and token service for batch-scheduled web applications"};
    std::string config_path;
    bool check_only = false;
    std::string log_level;
    std::string ready_file;
    app.add_option("-c,--config", config_path, "Service configuration file (JSON)")
        ->envname("SATELLITE_CONFIG")
        ->required();
    app.add_flag("--check", check_only, "Validate the configuration and exit");
    app.add_option("--log-level", log_level, "Override log_level from the configuration");
    app.add_option("--ready-file", ready_file, "Write the bound ports as JSON here once listening");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    satellite::ops::ServiceConfig cfg;
    try {
        cfg = satellite::ops::load_config(config_path);
    } catch (const satellite::ops::ConfigError& e) {
        std::cerr << config_path << ": " << e.what() << "\n";
        return kExitConfig;
    }
    if (!log_level.empty()) {
        if (!satellite::ops::is_log_level(log_level)) {
            std::cerr << "--log-level: unknown level '" << log_level << "'\n";
            return kExitUsage;
        }
        cfg.log_level = log_level;
    }
    if (check_only) {
        std::cout << config_path << ": ok\n";
        return 0;
    }
    satellite::log::init(cfg.log_level);

    // Block the shutdown signals before any thread starts so only sigwait
    // below receives them.
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);
    std::signal(SIGPIPE, SIG_IGN);

    std::unique_ptr<satellite::ops::Service> svc;
    try {
        svc = std::make_unique<satellite::ops::Service>(cfg);
        svc->start();
        if (!ready_file.empty())
            write_ready_file(ready_file, *svc);
    } catch (const std::exception& e) {
        satellite::log::emit(satellite::log::Level::critical, "startup_failed", {{"error", e.what()}});
        satellite::log::logger()->flush();
        return kExitStartup;
    }

    int sig = 0;
    sigwait(&signals, &sig);
    satellite::log::emit(satellite::log::Level::info, "shutdown", {{"signal", std::to_string(sig)}});
    svc->stop();
    svc.reset();
    if (!ready_file.empty())
        std::filesystem::remove(ready_file);
    satellite::log::logger()->flush();
    return 0;
}
