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

#include <stdexcept>
#include <string>
#include <string_view>

namespace satellite::spawner {

enum class SpawnErrc {
    Usage,
    NoMatch,
    Validation,
    Template,
    Satellite,
    Submit,
    State,
    NoPort,
};

std::string_view to_string(SpawnErrc e);

// Command-line exit status for an error: 2 usage, 3 system detection,
// 4 satellite communication, 5 submission.
int exit_code(SpawnErrc e);

// A failure in one stage of a launch. what() is "<stage>: <message>".
class SpawnError : public std::runtime_error {
  public:
    SpawnError(SpawnErrc code, std::string stage, const std::string& message)
        : std::runtime_error(stage + ": " + message), code_(code), stage_(std::move(stage)) {}

    [[nodiscard]] SpawnErrc code() const { return code_; }
    [[nodiscard]] const std::string& stage() const { return stage_; }

  private:
    SpawnErrc code_;
    std::string stage_;
};

} // namespace satellite::spawner
