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

namespace satellite::spawner {

std::string_view to_string(SpawnErrc e) {
    switch (e) {
    case SpawnErrc::Usage:
        return "USAGE_ERROR";
    case SpawnErrc::NoMatch:
        return "NO_MATCH";
    case SpawnErrc::Validation:
        return "VALIDATION_ERROR";
    case SpawnErrc::Template:
        return "TEMPLATE_ERROR";
    case SpawnErrc::Satellite:
        return "SATELLITE_ERROR";
    case SpawnErrc::Submit:
        return "SUBMIT_FAILED";
    case SpawnErrc::State:
        return "STATE_ERROR";
    case SpawnErrc::NoPort:
        return "NO_PORT";
    }
    return "?";
}

int exit_code(SpawnErrc e) {
    switch (e) {
    case SpawnErrc::Usage:
    case SpawnErrc::Validation:
        return 2;
    case SpawnErrc::NoMatch:
        return 3;
    case SpawnErrc::Satellite:
        return 4;
    case SpawnErrc::Template:
    case SpawnErrc::Submit:
    case SpawnErrc::State:
    case SpawnErrc::NoPort:
        return 5;
    }
    return 1;
}

} // namespace satellite::spawner
