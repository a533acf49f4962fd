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

#include "satellite/spawner/profile.hpp"

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace satellite::spawner {

class SchedulerAdapter {
  public:
    virtual ~SchedulerAdapter() = default;
    // Submits the script already written at `script_path`; returns the job id.
    // Throws SpawnError(Submit) with the scheduler's diagnostics.
    virtual std::string submit(const std::filesystem::path& script_path, const std::string& script_text) = 0;
};

// Job id from submit-command output: "Submitted batch job N" or the
// parsable "N" / "N;cluster" form.
std::optional<std::string> parse_submit_output(std::string_view output);

// Runs the profile's submit command with the script path appended.
class SlurmCommandScheduler final : public SchedulerAdapter {
  public:
    explicit SlurmCommandScheduler(std::vector<std::string> command);
    std::string submit(const std::filesystem::path& script_path, const std::string& script_text) override;

  private:
    std::vector<std::string> command_;
};

// Copies scripts into a spool directory as <id>.sh with increasing numeric
// ids, for a simulated cluster to pick up.
class SpoolScheduler final : public SchedulerAdapter {
  public:
    explicit SpoolScheduler(std::filesystem::path dir);
    std::string submit(const std::filesystem::path& script_path, const std::string& script_text) override;

    [[nodiscard]] const std::filesystem::path& dir() const { return dir_; }

  private:
    std::filesystem::path dir_;
};

std::unique_ptr<SchedulerAdapter> make_scheduler(const SystemProfile& profile, const std::filesystem::path& state_dir);

} // namespace satellite::spawner
