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

#include "satellite/spawner/scheduler.hpp"

#include "satellite/spawner/errors.hpp"
#include "satellite/spawner/session.hpp"

#include <boost/asio/io_context.hpp>
#include <boost/process.hpp>

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <future>
#include <regex>
#include <system_error>

namespace satellite::spawner {

namespace fs = std::filesystem;
namespace bp = boost::process;

namespace {

constexpr std::string_view kStage = "submit";

std::string trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return std::string(s);
}

} // namespace

std::optional<std::string> parse_submit_output(std::string_view output) {
    static const std::regex submitted(R"(Submitted batch job ([0-9]+))");
    std::match_results<std::string_view::const_iterator> m;
    if (std::regex_search(output.begin(), output.end(), m, submitted))
        return m[1].str();

    static const std::regex parsable(R"(^([0-9]+)(;[A-Za-z0-9_.-]+)?$)");
    std::string last;
    std::string_view rest = output;
    while (!rest.empty()) {
        auto nl = rest.find('\n');
        auto line = trim(rest.substr(0, nl));
        if (!line.empty())
            last = line;
        rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
    }
    std::smatch pm;
    if (std::regex_match(last, pm, parsable))
        return pm[1].str();
    return std::nullopt;
}

SlurmCommandScheduler::SlurmCommandScheduler(std::vector<std::string> command) : command_(std::move(command)) {
    if (command_.empty())
        throw SpawnError(SpawnErrc::Usage, std::string(kStage), "empty submit command");
}

std::string SlurmCommandScheduler::submit(const fs::path& script_path, const std::string&) {
    boost::filesystem::path exe = command_.front();
    if (command_.front().find('/') == std::string::npos)
        exe = bp::search_path(command_.front());
    if (exe.empty())
        throw SpawnError(SpawnErrc::Submit, std::string(kStage),
                         "submit command '" + command_.front() + "' not found on PATH");
    std::vector<std::string> args(command_.begin() + 1, command_.end());
    args.push_back(script_path.string());

    boost::asio::io_context ios;
    std::future<std::string> out;
    std::future<std::string> err;
    int status = 0;
    try {
        bp::child child(exe, bp::args(args), bp::std_in.close(), bp::std_out > out, bp::std_err > err, ios);
        ios.run();
        child.wait();
        status = child.exit_code();
    } catch (const bp::process_error& e) {
        throw SpawnError(SpawnErrc::Submit, std::string(kStage), "cannot run " + exe.string() + ": " + e.what());
    }
    auto stdout_text = out.get();
    auto stderr_text = err.get();
    if (status != 0)
        throw SpawnError(SpawnErrc::Submit, std::string(kStage),
                         command_.front() + " exited with status " + std::to_string(status) + ": " +
                             trim(stderr_text + stdout_text));
    auto id = parse_submit_output(stdout_text);
    if (!id)
        throw SpawnError(SpawnErrc::Submit, std::string(kStage),
                         "no job id in " + command_.front() + " output: " + trim(stdout_text + stderr_text));
    return *id;
}

SpoolScheduler::SpoolScheduler(fs::path dir) : dir_(std::move(dir)) {}

std::string SpoolScheduler::submit(const fs::path&, const std::string& script_text) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec)
        throw SpawnError(SpawnErrc::Submit, std::string(kStage), "cannot create spool " + dir_.string());
    fs::permissions(dir_, fs::perms::owner_all, ec);

    auto counter = dir_ / "next_id";
    int fd = ::open(counter.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0600);
    if (fd < 0)
        throw SpawnError(SpawnErrc::Submit, std::string(kStage), "cannot open " + counter.string());
    struct Closer {
        int fd;
        ~Closer() { ::close(fd); }
    } closer{fd};
    if (::flock(fd, LOCK_EX) != 0)
        throw SpawnError(SpawnErrc::Submit, std::string(kStage), "cannot lock " + counter.string());

    char buf[32] = {};
    auto n = ::pread(fd, buf, sizeof buf - 1, 0);
    std::uint64_t id = 1;
    if (n > 0) {
        auto text = trim(std::string_view(buf, static_cast<std::size_t>(n)));
        std::from_chars(text.data(), text.data() + text.size(), id);
    }
    auto next = std::to_string(id + 1) + "\n";
    if (::ftruncate(fd, 0) != 0 || ::pwrite(fd, next.data(), next.size(), 0) != static_cast<ssize_t>(next.size()))
        throw SpawnError(SpawnErrc::Submit, std::string(kStage), "cannot update " + counter.string());

    auto job_id = std::to_string(id);
    try {
        write_private_file(dir_ / (job_id + ".sh"), script_text);
    } catch (const std::exception& e) {
        throw SpawnError(SpawnErrc::Submit, std::string(kStage), e.what());
    }
    return job_id;
}

std::unique_ptr<SchedulerAdapter> make_scheduler(const SystemProfile& profile, const fs::path& state_dir) {
    if (profile.scheduler == SchedulerKind::Simulated)
        return std::make_unique<SpoolScheduler>(profile.spool_dir.empty() ? state_dir / "spool" : profile.spool_dir);
    return std::make_unique<SlurmCommandScheduler>(profile.submit_command);
}

} // namespace satellite::spawner
