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

#include "satellite/common/ip.hpp"

#include <arpa/inet.h>

#include <algorithm>
#include <charconv>
#include <cstring>

namespace satellite {

std::optional<IpAddress> IpAddress::parse(std::string_view text) {
    if (text.size() >= 2 && text.front() == '[' && text.back() == ']')
        text = text.substr(1, text.size() - 2);
    if (text.empty() || text.size() > INET6_ADDRSTRLEN)
        return std::nullopt;

    std::string s(text);
    IpAddress out;
    in_addr a4{};
    if (::inet_pton(AF_INET, s.c_str(), &a4) == 1) {
        out.family_ = Family::V4;
        std::memcpy(out.bytes_.data(), &a4, 4);
        return out;
    }
    in6_addr a6{};
    if (::inet_pton(AF_INET6, s.c_str(), &a6) == 1) {
        static constexpr std::array<std::uint8_t, 12> mapped_prefix{0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0xff, 0xff};
        if (std::memcmp(&a6, mapped_prefix.data(), mapped_prefix.size()) == 0) {
            out.family_ = Family::V4;
            std::memcpy(out.bytes_.data(), reinterpret_cast<const std::uint8_t*>(&a6) + 12, 4);
            return out;
        }
        out.family_ = Family::V6;
        std::memcpy(out.bytes_.data(), &a6, 16);
        return out;
    }
    return std::nullopt;
}

IpAddress IpAddress::from_string(std::string_view text) {
    auto ip = parse(text);
    if (!ip)
        throw std::invalid_argument("invalid IP address: " + std::string(text));
    return *ip;
}

IpAddress IpAddress::v4(std::uint32_t host_order) {
    IpAddress out;
    out.family_ = Family::V4;
    out.bytes_[0] = static_cast<std::uint8_t>(host_order >> 24);
    out.bytes_[1] = static_cast<std::uint8_t>(host_order >> 16);
    out.bytes_[2] = static_cast<std::uint8_t>(host_order >> 8);
    out.bytes_[3] = static_cast<std::uint8_t>(host_order);
    return out;
}

IpAddress IpAddress::from_bytes(Family family, const std::array<std::uint8_t, 16>& bytes) {
    IpAddress out;
    out.family_ = family;
    out.bytes_ = bytes;
    if (family == Family::V4)
        std::fill(out.bytes_.begin() + 4, out.bytes_.end(), std::uint8_t{0});
    return out;
}

std::uint32_t IpAddress::v4_value() const {
    return (std::uint32_t{bytes_[0]} << 24) | (std::uint32_t{bytes_[1]} << 16) | (std::uint32_t{bytes_[2]} << 8) |
           std::uint32_t{bytes_[3]};
}

std::string IpAddress::to_string() const {
    char buf[INET6_ADDRSTRLEN] = {};
    if (family_ == Family::V4)
        ::inet_ntop(AF_INET, bytes_.data(), buf, sizeof(buf));
    else
        ::inet_ntop(AF_INET6, bytes_.data(), buf, sizeof(buf));
    return buf;
}

std::optional<Cidr> Cidr::parse(std::string_view text) {
    auto slash = text.find('/');
    auto ip = IpAddress::parse(text.substr(0, slash));
    if (!ip)
        return std::nullopt;
    int max_prefix = ip->is_v4() ? 32 : 128;
    int prefix = max_prefix;
    if (slash != std::string_view::npos) {
        auto bits = text.substr(slash + 1);
        auto [ptr, ec] = std::from_chars(bits.data(), bits.data() + bits.size(), prefix);
        if (bits.empty() || ec != std::errc{} || ptr != bits.data() + bits.size() || prefix < 0 ||
            prefix > max_prefix)
            return std::nullopt;
    }
    Cidr c;
    c.prefix_ = prefix;
    // Zero the host bits so to_string() is canonical.
    auto bytes = ip->bytes();
    for (int i = 0; i < max_prefix / 8; ++i) {
        int keep = std::clamp(prefix - i * 8, 0, 8);
        bytes[static_cast<std::size_t>(i)] &= static_cast<std::uint8_t>(0xff00u >> keep);
    }
    c.network_ = IpAddress::from_bytes(ip->family(), bytes);
    return c;
}

Cidr Cidr::from_string(std::string_view text) {
    auto c = parse(text);
    if (!c)
        throw std::invalid_argument("invalid CIDR block: " + std::string(text));
    return *c;
}

bool Cidr::contains(const IpAddress& ip) const {
    if (ip.family() != network_.family())
        return false;
    const auto& a = ip.bytes();
    const auto& n = network_.bytes();
    int full = prefix_ / 8;
    for (int i = 0; i < full; ++i)
        if (a[static_cast<std::size_t>(i)] != n[static_cast<std::size_t>(i)])
            return false;
    int rem = prefix_ % 8;
    if (rem == 0)
        return true;
    auto mask = static_cast<std::uint8_t>(0xff00u >> rem);
    return (a[static_cast<std::size_t>(full)] & mask) == (n[static_cast<std::size_t>(full)] & mask);
}

std::string Cidr::to_string() const { return network_.to_string() + "/" + std::to_string(prefix_); }

bool CidrSet::contains(const IpAddress& ip) const {
    for (const auto& b : blocks_)
        if (b.contains(ip))
            return true;
    return false;
}

} // namespace satellite
