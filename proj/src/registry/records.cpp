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

#include "satellite/registry/records.hpp"

#include <algorithm>
#include <stdexcept>

namespace satellite::registry {

std::string_view to_string(TokenState s) {
    switch (s) {
    case TokenState::Issued:
        return "ISSUED";
    case TokenState::Mapped:
        return "MAPPED";
    case TokenState::Destroyed:
        return "DESTROYED";
    case TokenState::Expired:
        return "EXPIRED";
    }
    return "?";
}

std::optional<TokenState> parse_token_state(std::string_view s) {
    if (s == "ISSUED")
        return TokenState::Issued;
    if (s == "MAPPED")
        return TokenState::Mapped;
    if (s == "DESTROYED")
        return TokenState::Destroyed;
    if (s == "EXPIRED")
        return TokenState::Expired;
    return std::nullopt;
}

bool is_allowed_transition(TokenState from, TokenState to) {
    switch (from) {
    case TokenState::Issued:
        return to == TokenState::Mapped || to == TokenState::Expired;
    case TokenState::Mapped:
        return to == TokenState::Destroyed || to == TokenState::Expired;
    default:
        return false;
    }
}

nlohmann::json to_json(const Mapping& m) {
    return {
        {"target_ip", m.target_ip.to_string()},
        {"target_port", m.target_port},
        {"created_at", to_unix(m.created_at)},
        {"expires_at", to_unix(m.expires_at)},
        {"creator_ip", m.creator_ip.to_string()},
        {"active", m.active},
    };
}

Mapping mapping_from_json(const nlohmann::json& j) {
    Mapping m;
    m.target_ip = IpAddress::from_string(j.at("target_ip").get<std::string>());
    m.target_port = j.at("target_port").get<int>();
    m.created_at = from_unix(j.at("created_at").get<std::int64_t>());
    m.expires_at = from_unix(j.at("expires_at").get<std::int64_t>());
    m.creator_ip = IpAddress::from_string(j.at("creator_ip").get<std::string>());
    m.active = j.value("active", false);
    return m;
}

nlohmann::json to_json(const TokenRecord& r) {
    nlohmann::json j = {
        {"token", r.label()},
        {"state", to_string(r.state)},
        {"issued_at", to_unix(r.issued_at)},
        {"issuer_ip", r.issuer_ip.to_string()},
    };
    j["job_id"] = r.job_id ? nlohmann::json(*r.job_id) : nlohmann::json(nullptr);
    j["mapping"] = r.mapping ? to_json(*r.mapping) : nlohmann::json(nullptr);
    j["ended_at"] = r.ended_at ? nlohmann::json(to_unix(*r.ended_at)) : nlohmann::json(nullptr);
    return j;
}

TokenRecord record_from_json(const nlohmann::json& j) {
    auto token = Token::parse(j.at("token").get<std::string>());
    if (!token)
        throw std::invalid_argument("record has a malformed token label");
    auto state = parse_token_state(j.at("state").get<std::string>());
    if (!state)
        throw std::invalid_argument("record has an unknown state");
    TokenRecord r{.token = *token};
    r.state = *state;
    r.issued_at = from_unix(j.at("issued_at").get<std::int64_t>());
    r.issuer_ip = IpAddress::from_string(j.at("issuer_ip").get<std::string>());
    if (j.contains("job_id") && !j["job_id"].is_null())
        r.job_id = j["job_id"].get<std::string>();
    if (j.contains("mapping") && !j["mapping"].is_null())
        r.mapping = mapping_from_json(j["mapping"]);
    if (j.contains("ended_at") && !j["ended_at"].is_null())
        r.ended_at = from_unix(j["ended_at"].get<std::int64_t>());
    if (r.mapping.has_value() != (r.state == TokenState::Mapped))
        throw std::invalid_argument("record mapping presence disagrees with its state");
    return r;
}

bool is_valid_job_id(std::string_view id) {
    if (id.empty() || id.size() > kMaxJobIdLength)
        return false;
    return std::all_of(id.begin(), id.end(), [](char c) {
        auto u = static_cast<unsigned char>(c);
        return u > 0x20 && u < 0x7f;
    });
}

} // namespace satellite::registry
