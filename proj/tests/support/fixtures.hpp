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
#include "satellite/registry/registry.hpp"

#include <regex>
#include <string>

namespace satellite::testing {

using namespace std::chrono_literals;

inline constexpr const char* kDomain = "comet-user-content.sdsc.edu";

inline registry::RegistryConfig test_registry_config() {
    registry::RegistryConfig cfg;
    cfg.trusted_cidrs = CidrSet({Cidr::from_string("10.0.0.0/8")});
    cfg.satellite_domain = kDomain;
    cfg.mapping_ttl = 3600s;
    cfg.wall_clock_limit = 7200s;
    cfg.issuance_grace = 600s;
    cfg.retention = 300s;
    cfg.reconcile_interval = 1s;
    return cfg;
}

inline IpAddress ip(const char* s) { return IpAddress::from_string(s); }

inline bool matches_label_regex(const std::string& label) {
    static const std::regex re("^[a-z0-9]+(-[a-z0-9]+)*$");
    return label.size() <= 63 && std::regex_match(label, re);
}

} // namespace satellite::testing
