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

#include "satellite/frontend/route.hpp"

#include <algorithm>
#include <cctype>

namespace satellite::frontend {

std::string_view to_string(RouteKind k) {
    switch (k) {
    case RouteKind::Proxy:
        return "PROXY";
    case RouteKind::Pending:
        return "PENDING";
    case RouteKind::NotFound:
        return "NOT_FOUND";
    }
    return "?";
}

std::string normalize_host(std::string_view host) {
    if (host.empty() || host.front() == '[')
        return {};
    if (auto colon = host.rfind(':'); colon != std::string_view::npos) {
        auto port = host.substr(colon + 1);
        if (port.empty() || port.size() > 5 || !std::all_of(port.begin(), port.end(), [](char c) {
                return c >= '0' && c <= '9';
            }))
            return {};
        host = host.substr(0, colon);
    }
    if (!host.empty() && host.back() == '.')
        host.remove_suffix(1);
    std::string out(host);
    for (auto& c : out)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::optional<std::string> label_for_host(std::string_view host, std::string_view domain) {
    auto h = normalize_host(host);
    if (domain.empty() || h.size() <= domain.size() + 1)
        return std::nullopt;
    std::string_view hv = h;
    if (!hv.ends_with(domain) || hv[hv.size() - domain.size() - 1] != '.')
        return std::nullopt;
    auto label = hv.substr(0, hv.size() - domain.size() - 1);
    if (label.find('.') != std::string_view::npos)
        return std::nullopt;
    return std::string(label);
}

Router::Router(const registry::Registry& registry, const management::JobStatusBoard& board)
    : registry_(registry), board_(board) {}

RouteDecision Router::resolve_host(std::string_view host) const {
    std::string domain = normalize_host(registry_.config().satellite_domain);
    auto label = label_for_host(host, domain);
    if (!label)
        return {};
    auto found = registry_.lookup(*label);
    if (!found)
        return {};
    if (found->mapping) {
        return RouteDecision{.kind = RouteKind::Proxy,
                             .label = *label,
                             .target = Target{found->mapping->target_ip, found->mapping->target_port},
                             .status = std::nullopt};
    }
    // A redeemed mapping stays on the placeholder until the reconciler
    // activates it.
    if (found->state == registry::TokenState::Issued || found->state == registry::TokenState::Mapped) {
        RouteDecision d{.kind = RouteKind::Pending, .label = *label, .target = std::nullopt, .status = std::nullopt};
        if (found->job_id)
            d.status = board_.find(*found->job_id);
        return d;
    }
    return {};
}

} // namespace satellite::frontend
