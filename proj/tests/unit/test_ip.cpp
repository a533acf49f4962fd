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

#include <doctest.h>

using satellite::Cidr;
using satellite::CidrSet;
using satellite::IpAddress;

TEST_CASE("IpAddress parses v4, v6 and folds v4-mapped v6") {
    CHECK(IpAddress::from_string("10.1.0.5").to_string() == "10.1.0.5");
    CHECK(IpAddress::from_string("::1").to_string() == "::1");
    auto mapped = IpAddress::from_string("::ffff:10.1.0.5");
    CHECK(mapped.is_v4());
    CHECK(mapped == IpAddress::from_string("10.1.0.5"));
    CHECK(IpAddress::from_string("[fe80::1]").to_string() == "fe80::1");
    CHECK_FALSE(IpAddress::parse("10.1.0"));
    CHECK_FALSE(IpAddress::parse("10.1.0.256"));
    CHECK_FALSE(IpAddress::parse("host.example"));
    CHECK_FALSE(IpAddress::parse(""));
}

TEST_CASE("Cidr containment at prefix boundaries") {
    auto net = Cidr::from_string("10.0.0.0/8");
    CHECK(net.contains(IpAddress::from_string("10.0.0.0")));
    CHECK(net.contains(IpAddress::from_string("10.255.255.255")));
    CHECK_FALSE(net.contains(IpAddress::from_string("11.0.0.0")));
    CHECK_FALSE(net.contains(IpAddress::from_string("9.255.255.255")));

    auto odd = Cidr::from_string("192.168.4.0/22");
    CHECK(odd.contains(IpAddress::from_string("192.168.7.255")));
    CHECK_FALSE(odd.contains(IpAddress::from_string("192.168.8.0")));
    CHECK_FALSE(odd.contains(IpAddress::from_string("192.168.3.255")));

    CHECK(Cidr::from_string("10.1.2.3/8").to_string() == "10.0.0.0/8");
    CHECK(Cidr::from_string("10.1.2.3").prefix() == 32);
    CHECK(Cidr::from_string("0.0.0.0/0").contains(IpAddress::from_string("203.0.113.9")));

    auto v6 = Cidr::from_string("fd00::/8");
    CHECK(v6.contains(IpAddress::from_string("fd12:3456::1")));
    CHECK_FALSE(v6.contains(IpAddress::from_string("fe80::1")));
    CHECK_FALSE(v6.contains(IpAddress::from_string("10.0.0.1")));
}

TEST_CASE("Cidr rejects malformed blocks") {
    CHECK_FALSE(Cidr::parse("10.0.0.0/33"));
    CHECK_FALSE(Cidr::parse("10.0.0.0/"));
    CHECK_FALSE(Cidr::parse("10.0.0.0/8x"));
    CHECK_FALSE(Cidr::parse("::/129"));
    CHECK_FALSE(Cidr::parse("nonsense/8"));
}

TEST_CASE("CidrSet contains any member block") {
    CidrSet set({Cidr::from_string("10.0.0.0/8"), Cidr::from_string("127.0.0.0/8")});
    CHECK(set.contains(IpAddress::from_string("127.0.0.1")));
    CHECK(set.contains(IpAddress::from_string("10.3.3.3")));
    CHECK_FALSE(set.contains(IpAddress::from_string("192.0.2.7")));
    CHECK_FALSE(CidrSet{}.contains(IpAddress::from_string("10.3.3.3")));
}
