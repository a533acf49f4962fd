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

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace satellite {

// An IPv4 or IPv6 address. IPv4-mapped IPv6 addresses (::ffff:a.b.c.d) are
// folded to plain IPv4 on parse so a dual-stack listener and an IPv4 CIDR
// agree on what a peer is.
class IpAddress {
  public:
    enum class Family : std::uint8_t { V4, V6 };

    IpAddress() = default;

    static std::optional<IpAddress> parse(std::string_view text);
    // Throws std::invalid_argument on malformed input.
    static IpAddress from_string(std::string_view text);
    static IpAddress v4(std::uint32_t host_order);
    static IpAddress from_bytes(Family family, const std::array<std::uint8_t, 16>& bytes);

    [[nodiscard]] Family family() const { return family_; }
    [[nodiscard]] bool is_v4() const { return family_ == Family::V4; }
    [[nodiscard]] std::string to_string() const;
    [[nodiscard]] std::uint32_t v4_value() const;
    [[nodiscard]] const std::array<std::uint8_t, 16>& bytes() const { return bytes_; }

    friend bool operator==(const IpAddress&, const IpAddress&) = default;
    friend auto operator<=>(const IpAddress&, const IpAddress&) = default;

  private:
    Family family_ = Family::V4;
    std::array<std::uint8_t, 16> bytes_{}; // V4 uses the first four bytes
};

class Cidr {
  public:
    static std::optional<Cidr> parse(std::string_view text);
    static Cidr from_string(std::string_view text);

    [[nodiscard]] bool contains(const IpAddress& ip) const;
    [[nodiscard]] std::string to_string() const;
    [[nodiscard]] const IpAddress& network() const { return network_; }
    [[nodiscard]] int prefix() const { return prefix_; }

    friend bool operator==(const Cidr&, const Cidr&) = default;

  private:
    IpAddress network_;
    int prefix_ = 0;
};

class CidrSet {
  public:
    CidrSet() = default;
    explicit CidrSet(std::vector<Cidr> blocks) : blocks_(std::move(blocks)) {}

    [[nodiscard]] bool contains(const IpAddress& ip) const;
    [[nodiscard]] bool empty() const { return blocks_.empty(); }
    [[nodiscard]] const std::vector<Cidr>& blocks() const { return blocks_; }

  private:
    std::vector<Cidr> blocks_;
};

} // namespace satellite
