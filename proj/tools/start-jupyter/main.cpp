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

#include "satellite/spawner/errors.hpp"
#include "satellite/spawner/profile.hpp"
#include "satellite/spawner/session.hpp"

#include <CLI11.hpp>

#include <unistd.h>

#include <climits>
#include <cstdlib>
#include <iostream>

namespace {

namespace sp = satellite::spawner;

std::string local_hostname() {
    char buf[HOST_NAME_MAX + 1] = {};
    if (::gethostname(buf, sizeof buf) != 0)
        return {};
    return buf;
}

std::optional<std::string> env(const char* name) {
    const char* v = std::getenv(name);
    return v ? std::optional<std::string>(v) : std::nullopt;
}

void print_settings(const sp::SystemProfile& p, const sp::LaunchOptions& o) {
    std::cerr << "system:          " << p.name << "\n"
              << "scheduler:       " << sp::to_string(p.scheduler) << "\n"
              << "management url:  " << p.satellite_management_url << "\n"
              << "domain:          " << p.satellite_domain << "\n"
              << "partition:       " << o.partition.value_or(p.default_partition) << "\n"
              << "account:         " << o.account.value_or(p.default_account.value_or("(none)")) << "\n"
              << "time (minutes):  " << o.time_minutes.value_or(p.default_time_minutes) << "\n"
              << "gpus:            " << o.gpus << "\n"
              << "directory:       " << o.notebook_dir.string() << "\n"
              << "service:         " << sp::to_string(o.service.value_or(sp::ServiceKind::Notebook)) << "\n"
              << "template:        " << o.batch_script.value_or(p.template_path).string() << "\n"
              << "container image: " << (o.container_image ? o.container_image->string() : "(none)") << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"start-jupyter: launch a Jupyter server through the batch scheduler and print its URL"};
    sp::LaunchOptions opts;
    std::string partition, account, batch_script, service, image, directory;
    int minutes = 0;
    std::string config_flag, system_name, state_dir, hostname;

    app.add_option("-p,--partition", partition, "Partition (queue)");
    app.add_option("-d,--directory", directory, "Notebook working directory (default: current directory)");
    app.add_option("-A,--account", account, "Allocation account / project");
    app.add_option("-b,--batch-script", batch_script, "Custom batch script template");
    app.add_option("-t,--time", minutes, "Wall time in minutes")->check(CLI::PositiveNumber);
    app.add_option("-s,--service", service, "notebook or jupyterlab");
    app.add_option("-g,--gpus", opts.gpus, "Number of GPUs")->check(CLI::NonNegativeNumber);
    app.add_option("-i,--image", image, "Singularity container image");
    app.add_flag("-I,--print-env", opts.print_env, "Print the resolved launch settings to stderr");
    app.add_option("--config", config_flag, "Client configuration file");
    app.add_option("--system", system_name, "Use this system profile instead of matching the host name");
    app.add_option("--state-dir", state_dir, "Where scripts and session records are written");
    app.add_option("--hostname", hostname, "Host name used for system detection")->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : sp::exit_code(sp::SpawnErrc::Usage);
    }

    if (!partition.empty())
        opts.partition = partition;
    if (!account.empty())
        opts.account = account;
    if (!batch_script.empty())
        opts.batch_script = std::filesystem::absolute(batch_script);
    if (minutes > 0)
        opts.time_minutes = minutes;
    if (!service.empty()) {
        auto kind = sp::parse_service(service);
        if (!kind) {
            std::cerr << "start-jupyter: -s must be notebook or jupyterlab\n";
            return sp::exit_code(sp::SpawnErrc::Usage);
        }
        opts.service = kind;
    }
    if (!image.empty())
        opts.container_image = std::filesystem::absolute(image);
    opts.notebook_dir = std::filesystem::absolute(directory.empty() ? std::filesystem::current_path()
                                                                    : std::filesystem::path(directory))
                            .lexically_normal();
    if (opts.notebook_dir.string().size() > 1 && opts.notebook_dir.string().back() == '/')
        opts.notebook_dir = opts.notebook_dir.parent_path();

    try {
        auto config_path = sp::locate_client_config(config_flag.empty() ? std::nullopt : std::optional(config_flag),
                                                    env(std::string(sp::kClientConfigEnv).c_str()),
                                                    sp::user_config_home());
        if (!config_path)
            throw sp::SpawnError(sp::SpawnErrc::NoMatch, "detect_system",
                                 "no client configuration found (use --config or " +
                                     std::string(sp::kClientConfigEnv) + ")");
        auto profiles = sp::load_profiles(*config_path);

        sp::SessionEnv senv;
        senv.hostname = hostname.empty() ? local_hostname() : hostname;
        if (!system_name.empty())
            senv.system_name = system_name;
        senv.state_dir = state_dir.empty() ? sp::default_state_dir() : std::filesystem::absolute(state_dir);

        if (opts.print_env) {
            const auto& p = senv.system_name ? sp::find_system(*senv.system_name, profiles)
                                             : sp::detect_system(senv.hostname, profiles);
            print_settings(p, opts);
        }
        auto info = sp::start_session(opts, profiles, senv, nullptr,
                                      [](std::string_view stage) { std::cerr << "start-jupyter: " << stage << "\n"; });
        std::cerr << "start-jupyter: submitted job " << info.job_id << " on " << info.system << "\n";
        std::cerr << "start-jupyter: batch script " << info.script_path.string() << "\n";
        std::cout << info.url << std::endl;
        return 0;
    } catch (const sp::SpawnError& e) {
        std::cerr << "start-jupyter: " << sp::to_string(e.code()) << " in " << e.what() << "\n";
        return sp::exit_code(e.code());
    } catch (const std::exception& e) {
        std::cerr << "start-jupyter: " << e.what() << "\n";
        return 1;
    }
}
