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
#include "satellite/common/ip.hpp"
#include "satellite/registry/token.hpp"

#include <chrono>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace satellite::registry {

using namespace std::chrono_literals;

struct RegistryConfig {
    CidrSet trusted_cidrs;
    std::string satellite_domain;
    Seconds mapping_ttl{48h};
    Seconds wall_clock_limit{48h};
    // Unredeemed tokens expire at issued_at + wall_clock_limit + issuance_grace.
    Seconds issuance_grace{24h};
    // Terminal records are kept this long, then purged.
    Seconds retention{1h};
    Seconds reconcile_interval{1s};
    std::shared_ptr<const Wordlist> wordlist = Wordlist::builtin();
    int issue_retry_budget = 64;

    [[nodiscard]] Seconds issuance_ttl() const { return wall_clock_limit + issuance_grace; }

    // Every violated invariant, empty when valid.
    [[nodiscard]] std::vector<std::string> validate() const;
};

// RFC 1123 host name: dot-separated labels of letters, digits and inner
// hyphens, each at most 63 characters, at least two labels.
bool is_dns_name(std::string_view name);

} // namespace satellite::registry
