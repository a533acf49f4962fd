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

#pragma once

#include "satellite/common/clock.hpp"

#include <cstddef>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

namespace satellite::management {

enum class JobState { Pending, Running, Completed, Failed, Cancelled, Unknown };

std::string_view to_string(JobState s);
// Exact upper-case names only ("PENDING", ...).
std::optional<JobState> parse_job_state(std::string_view s);

inline constexpr std::size_t kMaxDetailLength = 1024;

struct JobStatusReport {
    std::string job_id;
    JobState state = JobState::Unknown;
    std::optional<std::string> detail;
    Timestamp reported_at{};
};

// Cuts `s` to at most kMaxDetailLength bytes without splitting a UTF-8
// sequence.
std::string truncate_detail(std::string s);

// Latest report per job id, last writer wins.
class JobStatusBoard {
  public:
    void report(JobStatusReport r);
    [[nodiscard]] std::optional<JobStatusReport> find(std::string_view job_id) const;
    [[nodiscard]] std::size_t size() const;

  private:
    mutable std::mutex mu_;
    std::map<std::string, JobStatusReport, std::less<>> reports_;
};

} // namespace satellite::management
