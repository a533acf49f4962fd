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

#include "satellite/registry/config.hpp"

#include "satellite/registry/errors.hpp"

namespace satellite::registry {

std::string_view to_string(Errc e) {
    switch (e) {
    case Errc::OriginForbidden:
        return "ORIGIN_FORBIDDEN";
    case Errc::Exhausted:
        return "EXHAUSTED";
    case Errc::NotFound:
        return "NOT_FOUND";
    case Errc::Conflict:
        return "CONFLICT";
    case Errc::PrivilegedPort:
        return "PRIVILEGED_PORT";
    case Errc::AlreadyMapped:
        return "ALREADY_MAPPED";
    case Errc::BadPort:
        return "BAD_PORT";
    case Errc::InvalidArgument:
        return "INVALID_ARGUMENT";
    }
    return "?";
}

bool is_dns_name(std::string_view name) {
    if (name.empty() || name.size() > 253)
        return false;
    std::size_t labels = 0;
    std::size_t start = 0;
    for (;;) {
        auto dot = name.find('.', start);
        auto label = name.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start);
        if (label.empty() || label.size() > 63 || label.front() == '-' || label.back() == '-')
            return false;
        for (char c : label) {
            bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-';
            if (!ok)
                return false;
        }
        ++labels;
        if (dot == std::string_view::npos)
            break;
        start = dot + 1;
    }
    return labels >= 2;
}

std::vector<std::string> RegistryConfig::validate() const {
    std::vector<std::string> v;
    if (trusted_cidrs.empty())
        v.emplace_back("registry.trusted_cidrs must not be empty");
    if (!is_dns_name(satellite_domain))
        v.push_back("registry.satellite_domain '" + satellite_domain + "' is not a valid DNS name");
    if (mapping_ttl.count() <= 0)
        v.emplace_back("registry.mapping_ttl must be positive");
    if (wall_clock_limit.count() <= 0)
        v.emplace_back("registry.wall_clock_limit must be positive");
    if (mapping_ttl > wall_clock_limit)
        v.push_back("registry.mapping_ttl (" + std::to_string(mapping_ttl.count()) +
                    " s) exceeds registry.wall_clock_limit (" + std::to_string(wall_clock_limit.count()) + " s)");
    if (issuance_grace.count() < 0)
        v.emplace_back("registry.issuance_grace must not be negative");
    if (retention.count() < 0)
        v.emplace_back("registry.retention must not be negative");
    if (reconcile_interval.count() <= 0)
        v.emplace_back("registry.reconcile_interval must be positive");
    if (issue_retry_budget < 1)
        v.emplace_back("registry.issue_retry_budget must be at least 1");
    if (!wordlist) {
        v.emplace_back("registry.wordlist is missing");
    } else {
        for (auto& w : wordlist->violations())
            v.push_back("registry." + w);
    }
    return v;
}

} // namespace satellite::registry
