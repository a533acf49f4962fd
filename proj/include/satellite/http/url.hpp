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

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace satellite::http {

using Params = std::map<std::string, std::string, std::less<>>;

// Percent-decoding with '+' as space (application/x-www-form-urlencoded).
// Returns nullopt on a malformed escape.
std::optional<std::string> form_decode(std::string_view s);
std::string form_encode(std::string_view s);

// Parses `a=1&b=2`. Later duplicates win. Malformed pairs are skipped.
Params parse_form(std::string_view s);
std::string encode_form(const std::vector<std::pair<std::string, std::string>>& kv);

struct Url {
    std::string scheme; // "http" or "https"
    std::string host;
    std::uint16_t port = 0;
    std::string path; // includes query, never empty

    [[nodiscard]] std::string origin() const;
};

std::optional<Url> parse_url(std::string_view text);

// Splits "/p?q" into {"/p", "q"}.
std::pair<std::string_view, std::string_view> split_target(std::string_view target);

} // namespace satellite::http
