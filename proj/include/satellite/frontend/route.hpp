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

#include "satellite/common/ip.hpp"
#include "satellite/management/job_status.hpp"
#include "satellite/registry/registry.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace satellite::frontend {

enum class RouteKind { Proxy, Pending, NotFound };

std::string_view to_string(RouteKind k);

struct Target {
    IpAddress ip;
    int port = 0;

    friend bool operator==(const Target&, const Target&) = default;
};

struct RouteDecision {
    RouteKind kind = RouteKind::NotFound;
    // Set for Proxy and Pending.
    std::string label;
    // Set iff kind == Proxy.
    std::optional<Target> target;
    // Only for Pending, when the token's job has reported.
    std::optional<management::JobStatusReport> status;
};

// Lower-cased, port and trailing dot removed. Empty when malformed.
std::string normalize_host(std::string_view host);

// The single label in front of `.domain`, or nullopt.
std::optional<std::string> label_for_host(std::string_view host, std::string_view domain);

class Router {
  public:
    Router(const registry::Registry& registry, const management::JobStatusBoard& board);

    [[nodiscard]] RouteDecision resolve_host(std::string_view host) const;

  private:
    const registry::Registry& registry_;
    const management::JobStatusBoard& board_;
};

} // namespace satellite::frontend
