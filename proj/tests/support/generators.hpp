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

#include <array>
#include <random>
#include <string>
#include <vector>

// Hand-rolled generators for property tests.
namespace satellite::testing {

// Random v4 or v6 address, not contained in `trusted`.
inline IpAddress random_untrusted_ip(std::mt19937_64& rng, const CidrSet& trusted) {
    for (;;) {
        IpAddress candidate = IpAddress::v4(0);
        if (rng() % 4 == 0) {
            std::array<std::uint8_t, 16> bytes{};
            for (auto& b : bytes)
                b = static_cast<std::uint8_t>(rng());
            candidate = IpAddress::from_bytes(IpAddress::Family::V6, bytes);
        } else {
            candidate = IpAddress::v4(static_cast<std::uint32_t>(rng()));
        }
        if (!trusted.contains(candidate))
            return candidate;
    }
}

inline std::string random_ascii(std::mt19937_64& rng, std::size_t max_len) {
    std::string s(rng() % (max_len + 1), ' ');
    for (auto& c : s)
        c = static_cast<char>(0x20 + rng() % 95);
    return s;
}

template <class T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& v) {
    return v[rng() % v.size()];
}

} // namespace satellite::testing
