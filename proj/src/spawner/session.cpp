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

#include "satellite/spawner/session.hpp"

#include "satellite/http/url.hpp"
#include "satellite/management/paths.hpp"
#include "satellite/spawner/errors.hpp"

#include <json.hpp>

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <system_error>

namespace satellite::spawner {

namespace fs = std::filesystem;

namespace {

bool plausible_label(std::string_view s) {
    if (s.empty() || s.size() > 63 || s.front() == '-' || s.back() == '-')
        return false;
    for (char c : s)
        if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-'))
            return false;
    return true;
}

void make_private_dir(const fs::path& dir, std::string_view stage) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (!ec)
        fs::permissions(dir, fs::perms::owner_all, ec);
    if (ec)
        throw SpawnError(SpawnErrc::State, std::string(stage), "cannot create " + dir.string() + ": " + ec.message());
}

std::string strip_newlines(std::string s) {
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r'))
        s.pop_back();
    return s;
}

} // namespace

std::string session_url(std::string_view label, std::string_view domain) {
    return "https://" + std::string(label) + "." + std::string(domain);
}

fs::path default_state_dir() {
    if (const char* xdg = std::getenv("XDG_STATE_HOME"); xdg && *xdg)
        return fs::path(xdg) / "satellite";
    if (const char* home = std::getenv("HOME"); home && *home)
        return fs::path(home) / ".local" / "state" / "satellite";
    return fs::current_path() / ".satellite";
}

void write_private_file(const fs::path& path, std::string_view content) {
    int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_EXCL | O_CLOEXEC, 0600);
    if (fd < 0)
        throw std::system_error(errno, std::generic_category(), "create " + path.string());
    ::fchmod(fd, 0600);
    std::size_t done = 0;
    while (done < content.size()) {
        auto n = ::write(fd, content.data() + done, content.size() - done);
        if (n < 0) {
            if (errno == EINTR)
                continue;
            int err = errno;
            ::close(fd);
            throw std::system_error(err, std::generic_category(), "write " + path.string());
        }
        done += static_cast<std::size_t>(n);
    }
    if (::close(fd) != 0)
        throw std::system_error(errno, std::generic_category(), "close " + path.string());
}

SessionInfo start_session(const LaunchOptions& opts, const std::vector<SystemProfile>& profiles,
                          const SessionEnv& env, SchedulerAdapter* scheduler, const StageObserver& observer) {
    auto stage = [&](std::string_view s) {
        if (observer)
            observer(s);
    };

    stage(kStageDetect);
    if (profiles.empty())
        throw SpawnError(SpawnErrc::NoMatch, std::string(kStageDetect), "no systems are configured");
    const SystemProfile& profile =
        env.system_name ? find_system(*env.system_name, profiles) : detect_system(env.hostname, profiles);

    // Option errors surface before a token is spent.
    stage(kStageValidate);
    try {
        (void)script_values(profile, opts, "validation-only");
    } catch (const SpawnError& e) {
        throw SpawnError(e.code(), std::string(kStageValidate), std::string(e.what()).substr(e.stage().size() + 2));
    }
    auto template_path = opts.batch_script.value_or(profile.template_path);
    if (!std::ifstream(template_path))
        throw SpawnError(SpawnErrc::Template, std::string(kStageValidate),
                         "cannot read template " + template_path.string());
    std::unique_ptr<SchedulerAdapter> owned;
    if (!scheduler) {
        owned = make_scheduler(profile, env.state_dir);
        scheduler = owned.get();
    }

    stage(kStageIssue);
    const std::string getlink = profile.satellite_management_url + std::string(management::kGetLinkPath);
    std::string label;
    try {
        auto res = http::get(getlink, env.client);
        if (res.status != 200)
            throw SpawnError(SpawnErrc::Satellite, std::string(kStageIssue),
                             getlink + " answered " + std::to_string(res.status) + ": " + strip_newlines(res.body));
        label = strip_newlines(res.body);
    } catch (const http::ClientError& e) {
        throw SpawnError(SpawnErrc::Satellite, std::string(kStageIssue), std::string("cannot reach ") + e.what());
    }
    if (!plausible_label(label))
        throw SpawnError(SpawnErrc::Satellite, std::string(kStageIssue), getlink + " returned a malformed token");

    SessionInfo info;
    info.token = label;
    info.url = session_url(label, profile.satellite_domain);
    info.system = profile.name;

    stage(kStageBuild);
    auto script = build_batch_script(profile, opts, label);
    make_private_dir(env.state_dir, kStageBuild);
    make_private_dir(env.state_dir / "scripts", kStageBuild);
    info.script_path = env.state_dir / "scripts" / (label + ".sh");
    try {
        write_private_file(info.script_path, script);
    } catch (const std::system_error& e) {
        throw SpawnError(SpawnErrc::State, std::string(kStageBuild), e.what());
    }

    stage(kStageSubmit);
    try {
        info.job_id = scheduler->submit(info.script_path, script);
    } catch (const SpawnError&) {
        throw;
    } catch (const std::exception& e) {
        throw SpawnError(SpawnErrc::Submit, std::string(kStageSubmit), e.what());
    }

    stage(kStageRegister);
    const std::string registerjob = profile.satellite_management_url + std::string(management::kRegisterJobPath);
    try {
        auto res = http::post_form(registerjob, {{"token", label}, {"job_id", info.job_id}}, env.client);
        if (res.status != 200)
            throw SpawnError(SpawnErrc::Satellite, std::string(kStageRegister),
                             registerjob + " answered " + std::to_string(res.status) + ": " + strip_newlines(res.body));
    } catch (const http::ClientError& e) {
        throw SpawnError(SpawnErrc::Satellite, std::string(kStageRegister), std::string("cannot reach ") + e.what());
    }

    stage(kStageSave);
    make_private_dir(env.state_dir / "sessions", kStageSave);
    SystemClock system_clock;
    const Clock& clock = env.clock ? *env.clock : system_clock;
    nlohmann::json record{{"token", info.token},
                          {"url", info.url},
                          {"job_id", info.job_id},
                          {"script_path", info.script_path.string()},
                          {"system", info.system},
                          {"submitted_at", to_unix(clock.now())}};
    try {
        write_private_file(env.state_dir / "sessions" / (label + ".json"), record.dump(2) + "\n");
    } catch (const std::system_error& e) {
        throw SpawnError(SpawnErrc::State, std::string(kStageSave), e.what());
    }
    return info;
}

} // namespace satellite::spawner
