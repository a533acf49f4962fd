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

#include "satellite/frontend/proxy.hpp"
#include "satellite/registry/config.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace satellite::ops {

struct ManagementSettings {
    std::string bind_address = "0.0.0.0";
    std::uint16_t port = 8080;
};

struct JournalSettings {
    std::filesystem::path path = "journal.ndjson";
    bool fsync = true;
    std::uintmax_t compact_threshold_bytes = std::uintmax_t{4} << 20;
};

// Whole service configuration. Immutable once the service starts.
struct ServiceConfig {
    registry::RegistryConfig registry;
    frontend::FrontendConfig frontend;
    ManagementSettings management;
    JournalSettings journal;
    std::string log_level = "info";
    // Overrides for the built-in page templates.
    std::optional<std::filesystem::path> template_dir;
    int io_threads = 2;

    // Every violated invariant across all sections, empty when valid.
    [[nodiscard]] std::vector<std::string> validate() const;
};

class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(std::vector<std::string> violations);
    [[nodiscard]] const std::vector<std::string>& violations() const { return violations_; }

  private:
    std::vector<std::string> violations_;
};

bool is_log_level(std::string_view name);

// Parses a JSON document. Durations are integer seconds; relative paths
// resolve against `base_dir`. Throws ConfigError listing every problem
// found, including the semantic ones from validate().
ServiceConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir);
ServiceConfig load_config(const std::filesystem::path& path);

} // namespace satellite::ops
