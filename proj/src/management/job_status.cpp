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

#include "satellite/management/job_status.hpp"

#include <array>
#include <utility>

namespace satellite::management {

namespace {

constexpr std::array<std::pair<JobState, std::string_view>, 6> kNames{{
    {JobState::Pending, "PENDING"},
    {JobState::Running, "RUNNING"},
    {JobState::Completed, "COMPLETED"},
    {JobState::Failed, "FAILED"},
    {JobState::Cancelled, "CANCELLED"},
    {JobState::Unknown, "UNKNOWN"},
}};

} // namespace

std::string_view to_string(JobState s) {
    for (const auto& [state, name] : kNames)
        if (state == s)
            return name;
    return "UNKNOWN";
}

std::optional<JobState> parse_job_state(std::string_view s) {
    for (const auto& [state, name] : kNames)
        if (name == s)
            return state;
    return std::nullopt;
}

std::string truncate_detail(std::string s) {
    if (s.size() <= kMaxDetailLength)
        return s;
    std::size_t cut = kMaxDetailLength;
    while (cut > 0 && (static_cast<unsigned char>(s[cut]) & 0xC0) == 0x80)
        --cut;
    s.resize(cut);
    return s;
}

void JobStatusBoard::report(JobStatusReport r) {
    if (r.detail)
        r.detail = truncate_detail(std::move(*r.detail));
    std::lock_guard lock(mu_);
    auto key = r.job_id;
    reports_.insert_or_assign(std::move(key), std::move(r));
}

std::optional<JobStatusReport> JobStatusBoard::find(std::string_view job_id) const {
    std::lock_guard lock(mu_);
    auto it = reports_.find(job_id);
    if (it == reports_.end())
        return std::nullopt;
    return it->second;
}

std::size_t JobStatusBoard::size() const {
    std::lock_guard lock(mu_);
    return reports_.size();
}

} // namespace satellite::management
