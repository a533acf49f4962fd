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

#include <json.hpp>

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace satellite::registry {

enum class TokenState { Issued, Mapped, Destroyed, Expired };

std::string_view to_string(TokenState s);
std::optional<TokenState> parse_token_state(std::string_view s);

inline bool is_terminal(TokenState s) { return s == TokenState::Destroyed || s == TokenState::Expired; }

// ISSUED->MAPPED, ISSUED->EXPIRED, MAPPED->DESTROYED, MAPPED->EXPIRED.
bool is_allowed_transition(TokenState from, TokenState to);

struct Mapping {
    IpAddress target_ip;
    int target_port = 0;
    Timestamp created_at{};
    Timestamp expires_at{};
    IpAddress creator_ip;
    // False until a reconcile pass puts the mapping into the routing table.
    bool active = false;

    friend bool operator==(const Mapping&, const Mapping&) = default;
};

struct TokenRecord {
    Token token;
    TokenState state = TokenState::Issued;
    Timestamp issued_at{};
    IpAddress issuer_ip;
    std::optional<std::string> job_id;
    std::optional<Mapping> mapping; // present iff state == Mapped
    // When the record entered a terminal state; drives retention purging.
    std::optional<Timestamp> ended_at;

    [[nodiscard]] const std::string& label() const { return token.label(); }

    friend bool operator==(const TokenRecord&, const TokenRecord&) = default;
};

struct ReconcileSummary {
    std::size_t activations = 0;
    std::size_t deactivations = 0;
    std::vector<std::string> activated;
    std::vector<std::string> deactivated;
    std::vector<std::string> expired;
    std::size_t purged = 0;
};

nlohmann::json to_json(const Mapping& m);
Mapping mapping_from_json(const nlohmann::json& j);
nlohmann::json to_json(const TokenRecord& r);
TokenRecord record_from_json(const nlohmann::json& j);

inline constexpr std::size_t kMaxJobIdLength = 256;

// Printable ASCII without spaces, 1..kMaxJobIdLength characters.
bool is_valid_job_id(std::string_view id);

} // namespace satellite::registry
