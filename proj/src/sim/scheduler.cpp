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

#include "satellite/sim/scheduler.hpp"

#include "satellite/common/log.hpp"
#include "satellite/http/client.hpp"
#include "satellite/management/paths.hpp"
#include "satellite/spawner/errors.hpp"

#include <charconv>
#include <regex>

namespace satellite::sim {

namespace {

std::optional<std::string> capture(const std::string& text, const std::regex& re) {
    std::smatch m;
    if (std::regex_search(text, m, re))
        return m[1].str();
    return std::nullopt;
}

} // namespace

ParsedScript parse_script(std::string_view text) {
    static const std::regex time_re(R"((?:^|\n)#SBATCH --time=([0-9]+)\s*(?:\n|$))");
    static const std::regex partition_re(R"((?:^|\n)#SBATCH --partition=([^\s]+)\s*(?:\n|$))");
    static const std::regex token_re(R"((?:^|\n)SATELLITE_TOKEN=([a-z0-9-]+)\s*(?:\n|$))");
    static const std::regex url_re(R"((?:^|\n)SATELLITE_MANAGEMENT_URL=(https?://[^\s]+)\s*(?:\n|$))");
    std::string s(text);
    ParsedScript out;
    auto time = capture(s, time_re);
    auto partition = capture(s, partition_re);
    auto token = capture(s, token_re);
    auto url = capture(s, url_re);
    std::string missing;
    if (!time)
        missing += " --time";
    if (!partition)
        missing += " --partition";
    if (!token)
        missing += " SATELLITE_TOKEN";
    if (!url)
        missing += " SATELLITE_MANAGEMENT_URL";
    if (!missing.empty())
        throw spawner::SpawnError(spawner::SpawnErrc::Submit, "submit", "script lacks" + missing);
    std::from_chars(time->data(), time->data() + time->size(), out.time_minutes);
    if (out.time_minutes < 1)
        throw spawner::SpawnError(spawner::SpawnErrc::Submit, "submit", "script asks for no wall time");
    out.partition = *partition;
    out.token = *token;
    out.management_url = *url;
    return out;
}

std::string_view to_string(SimJobState s) {
    switch (s) {
    case SimJobState::Pending:
        return "PENDING";
    case SimJobState::Running:
        return "RUNNING";
    case SimJobState::Completed:
        return "COMPLETED";
    case SimJobState::Failed:
        return "FAILED";
    case SimJobState::Cancelled:
        return "CANCELLED";
    }
    return "?";
}

struct SimulatedScheduler::Job {
    SimJobView view;
    bool pending_posted = false;
    std::unique_ptr<FakeApp> app;
};

SimulatedScheduler::SimulatedScheduler(const Clock& clock, boost::asio::io_context& app_ioc,
                                       SimJobBehavior behavior, EventFn on_event)
    : clock_(clock), app_ioc_(app_ioc), behavior_(behavior), on_event_(std::move(on_event)) {}

SimulatedScheduler::~SimulatedScheduler() {
    std::lock_guard lk(mu_);
    for (auto& [_, job] : jobs_)
        stop_app(*job);
}

std::string SimulatedScheduler::submit(const std::filesystem::path&, const std::string& script_text) {
    std::string id;
    {
        std::lock_guard lk(mu_);
        id = std::to_string(++next_id_);
    }
    enqueue(id, script_text);
    return id;
}

void SimulatedScheduler::adopt(const std::string& id, const std::string& script_text) { enqueue(id, script_text); }

void SimulatedScheduler::enqueue(std::string id, const std::string& script_text) {
    auto job = std::make_unique<Job>();
    job->view.id = id;
    job->view.script = parse_script(script_text);
    job->view.submitted_at = clock_.now();
    std::lock_guard lk(mu_);
    if (jobs_.contains(id))
        throw spawner::SpawnError(spawner::SpawnErrc::Submit, "submit", "job id " + id + " already exists");
    jobs_.emplace(std::move(id), std::move(job));
}

void SimulatedScheduler::post_status(Job& job, std::string_view state, std::string_view detail) {
    std::vector<std::pair<std::string, std::string>> fields = {{"job_id", job.view.id}, {"state", std::string(state)}};
    if (!detail.empty())
        fields.emplace_back("detail", std::string(detail));
    try {
        auto res = http::post_form(job.view.script.management_url + std::string(management::kJobStatusPath), fields);
        if (res.status == 200 && on_event_)
            on_event_(EventKind::StatusPosted, std::string(state));
    } catch (const http::ClientError& e) {
        log::emit(log::Level::warn, "sim_status_failed", {{"job_id", job.view.id}, {"error", e.what()}});
    }
}

void SimulatedScheduler::start(Job& job, Timestamp now) {
    job.view.started_at = now;
    if (behavior_.outcome == JobOutcome::FailsAtStart) {
        job.view.state = SimJobState::Failed;
        post_status(job, "FAILED", "application failed to start");
        return;
    }
    FakeAppOptions opts;
    opts.sentinel = "sim-app job " + job.view.id;
    if (behavior_.app == AppBehavior::SlowResponse)
        opts.response_delay = std::chrono::milliseconds(300);
    job.app = std::make_unique<FakeApp>(app_ioc_, "127.0.0.1", 0, opts);
    job.app->start();
    job.view.app_port = job.app->port();
    job.view.app_alive = true;
    job.view.state = SimJobState::Running;

    const auto& s = job.view.script;
    try {
        auto res = http::post_form(s.management_url + std::string(management::kRedeemPath),
                                   {{"token", s.token}, {"port", std::to_string(*job.view.app_port)}});
        if (res.status == 200) {
            if (on_event_)
                on_event_(EventKind::Redeemed, {});
        } else {
            log::emit(log::Level::warn, "sim_redeem_refused",
                      {{"job_id", job.view.id}, {"status", std::to_string(res.status)}});
        }
    } catch (const http::ClientError& e) {
        log::emit(log::Level::warn, "sim_redeem_failed", {{"job_id", job.view.id}, {"error", e.what()}});
    }
    post_status(job, "RUNNING", "");
}

void SimulatedScheduler::stop_app(Job& job) {
    if (job.app && job.view.app_alive)
        job.app->kill();
    job.view.app_alive = false;
}

void SimulatedScheduler::tick(Timestamp now) {
    std::lock_guard lk(mu_);
    std::size_t queue_position = 0;
    for (auto& [id, ptr] : jobs_) {
        Job& job = *ptr;
        auto& v = job.view;
        if (v.state == SimJobState::Pending) {
            ++queue_position;
            if (!job.pending_posted) {
                job.pending_posted = true;
                post_status(job, "PENDING", "position " + std::to_string(queue_position) + " in queue");
            }
            if (behavior_.outcome != JobOutcome::NeverStarts && now - v.submitted_at >= behavior_.queue_delay)
                start(job, now);
            continue;
        }
        if (v.state != SimJobState::Running)
            continue;
        auto ran = now - *v.started_at;
        auto dies_after = behavior_.dies_after.value_or(Seconds{v.script.time_minutes * 60 / 2});
        if (behavior_.outcome == JobOutcome::DiesMidway && ran >= dies_after) {
            stop_app(job);
            v.state = SimJobState::Failed;
            post_status(job, "FAILED", "application exited unexpectedly");
        } else if (behavior_.runtime && ran >= *behavior_.runtime) {
            try {
                auto res = http::post_form(v.script.management_url + std::string(management::kDestroyPath),
                                           {{"token", v.script.token}, {"port", std::to_string(*v.app_port)}});
                if (res.status == 200 && on_event_)
                    on_event_(EventKind::Destroyed, {});
            } catch (const http::ClientError& e) {
                log::emit(log::Level::warn, "sim_destroy_failed", {{"job_id", v.id}, {"error", e.what()}});
            }
            stop_app(job);
            v.state = SimJobState::Completed;
            post_status(job, "COMPLETED", "");
        } else if (ran >= Seconds{v.script.time_minutes * 60}) {
            // Wall time: the scheduler kills the job; no destroytoken call.
            stop_app(job);
            v.state = SimJobState::Cancelled;
            post_status(job, "CANCELLED", "wall-clock limit reached");
        }
    }
}

std::optional<SimJobView> SimulatedScheduler::job(const std::string& id) const {
    std::lock_guard lk(mu_);
    auto it = jobs_.find(id);
    if (it == jobs_.end())
        return std::nullopt;
    return it->second->view;
}

std::vector<SimJobView> SimulatedScheduler::jobs() const {
    std::lock_guard lk(mu_);
    std::vector<SimJobView> out;
    for (const auto& [_, j] : jobs_)
        out.push_back(j->view);
    return out;
}

} // namespace satellite::sim
