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

#include "satellite/http/url.hpp"

#include <doctest.h>

using namespace satellite::http;

TEST_CASE("form_decode handles plus and percent escapes") {
    CHECK(form_decode("position+7%20in+queue") == "position 7 in queue");
    CHECK(form_decode("a%2Bb") == "a+b");
    CHECK(form_decode("%e2%9c%93") == "\xe2\x9c\x93");
    CHECK_FALSE(form_decode("%"));
    CHECK_FALSE(form_decode("%4"));
    CHECK_FALSE(form_decode("%zz"));
}

TEST_CASE("form_encode round-trips arbitrary bytes") {
    std::string all;
    for (int c = 0; c < 256; ++c)
        all.push_back(static_cast<char>(c));
    CHECK(form_decode(form_encode(all)) == all);
    CHECK(form_encode("a b&c=d") == "a+b%26c%3Dd");
}

TEST_CASE("parse_form") {
    auto p = parse_form("token=bullseye-compare-citation&port=8888&&bad=%zz&port=9999&=x");
    CHECK(p.size() == 2);
    CHECK(p.at("token") == "bullseye-compare-citation");
    CHECK(p.at("port") == "9999");
    CHECK(parse_form("").empty());
    CHECK(parse_form("flag").at("flag").empty());
}

TEST_CASE("parse_url") {
    auto u = parse_url("http://10.0.0.1:8080/getlink.cgi?x=1");
    REQUIRE(u);
    CHECK(u->scheme == "http");
    CHECK(u->host == "10.0.0.1");
    CHECK(u->port == 8080);
    CHECK(u->path == "/getlink.cgi?x=1");
    CHECK(u->origin() == "http://10.0.0.1:8080");

    auto s = parse_url("https://bullseye-compare-citation.comet-user-content.sdsc.edu");
    REQUIRE(s);
    CHECK(s->port == 443);
    CHECK(s->path == "/");
    CHECK(s->origin() == "https://bullseye-compare-citation.comet-user-content.sdsc.edu");

    auto v6 = parse_url("http://[::1]:81/x");
    REQUIRE(v6);
    CHECK(v6->host == "::1");
    CHECK(v6->port == 81);

    CHECK_FALSE(parse_url("ftp://host/"));
    CHECK_FALSE(parse_url("http://:80/"));
    CHECK_FALSE(parse_url("http://host:0/"));
    CHECK_FALSE(parse_url("http://host:65536/"));
    CHECK_FALSE(parse_url("http://host:8x/"));
    CHECK_FALSE(parse_url("host/path"));
}

TEST_CASE("split_target") {
    auto [p, q] = split_target("/redeemtoken.cgi?token=a&port=1");
    CHECK(p == "/redeemtoken.cgi");
    CHECK(q == "token=a&port=1");
    auto [p2, q2] = split_target("/healthz");
    CHECK(p2 == "/healthz");
    CHECK(q2.empty());
}
