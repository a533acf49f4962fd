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

#include "satellite/management/api.hpp"

#include "support/fixtures.hpp"
#include "support/generators.hpp"

#include <doctest.h>

#include <random>

using namespace satellite;
using namespace satellite::management;
using namespace satellite::testing;
using namespace std::chrono_literals;

namespace {

const std::vector<std::string> kPaths = {"/getlink.cgi", "/redeemtoken.cgi", "/destroytoken.cgi", "/jobstatus",
                                         "/registerjob.cgi", "/healthz", "/", "/tree"};
const std::vector<std::string> kMethods = {"GET", "POST", "PUT", "HEAD"};
const std::vector<std::string> kPorts = {"80", "1023", "1024", "8888", "65535", "0", "x"};
const std::vector<std::string> kStates = {"PENDING", "RUNNING", "FAILED", "BOGUS"};

struct World {
    ManualClock clock;
    registry::Registry reg{test_registry_config(), clock, registry::seeded_random(3)};
    JobStatusBoard board;
    ManagementApi api{reg, board, clock, [] { return std::string("{}"); }};
    std::vector<std::string> labels;

    World() {
        for (int i = 0; i < 4; ++i)
            labels.push_back(reg.issue_token(ip("10.2.0.1"), clock.now()).label());
        reg.redeem_token(labels[0], 8888, ip("10.2.0.1"), clock.now());
        reg.reconcile(clock.now());
        labels.push_back("not-a-token");
    }

    http::Params random_params(std::mt19937_64& rng) {
        http::Params p;
        if (rng() % 4)
            p["token"] = pick(rng, labels);
        if (rng() % 4)
            p["port"] = pick(rng, kPorts);
        if (rng() % 2)
            p["job_id"] = std::to_string(rng() % 100);
        if (rng() % 2)
            p["state"] = pick(rng, kStates);
        if (rng() % 3 == 0)
            p["detail"] = random_ascii(rng, 20);
        return p;
    }
};

} // namespace

TEST_CASE("origin soundness: untrusted peers never get a 2xx nor change state") {
    World w;
    auto before = w.reg.snapshot();
    auto seq = w.reg.last_seq();
    std::mt19937_64 rng(99);
    for (int i = 0; i < 5000; ++i) {
        auto peer = random_untrusted_ip(rng, w.reg.config().trusted_cidrs);
        RequestContext ctx{.peer_ip = peer,
                           .method = pick(rng, kMethods),
                           .path = pick(rng, kPaths),
                           .params = w.random_params(rng)};
        auto res = w.api.handle(ctx);
        INFO("peer=" << peer.to_string() << " path=" << ctx.path);
        REQUIRE(res.status == 403);
    }
    CHECK(w.reg.last_seq() == seq);
    CHECK(w.reg.snapshot() == before);
    CHECK(w.board.size() == 0);
}

TEST_CASE("endpoint/registry agreement for redemption") {
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        World w;
        std::mt19937_64 rng(seed);
        const std::vector<std::string> peers = {"10.2.0.1", "10.3.0.7", "192.0.2.7"};
        for (int step = 0; step < 60; ++step) {
            auto roll = rng() % 10;
            if (roll == 0) {
                w.api.handle({.peer_ip = ip("10.2.0.9"), .method = "GET", .path = "/getlink.cgi", .params = {}});
                for (const auto& r : w.reg.snapshot())
                    if (std::find(w.labels.begin(), w.labels.end(), r.label()) == w.labels.end())
                        w.labels.push_back(r.label());
                continue;
            }
            if (roll == 1) {
                w.clock.advance(std::chrono::seconds(rng() % 2000));
                w.reg.reconcile(w.clock.now());
                continue;
            }
            auto path = roll < 8 ? std::string("/redeemtoken.cgi") : std::string("/destroytoken.cgi");
            auto peer = ip(pick(rng, peers).c_str());
            RequestContext ctx{.peer_ip = peer, .method = rng() % 2 ? "GET" : "POST", .path = path,
                               .params = w.random_params(rng)};
            auto before = w.reg.snapshot();
            auto seq = w.reg.last_seq();
            auto res = w.api.handle(ctx);
            bool ok = res.status >= 200 && res.status < 300;
            INFO("seed=" << seed << " step=" << step << " status=" << res.status);
            if (!ok) {
                REQUIRE(w.reg.last_seq() == seq);
                REQUIRE(w.reg.snapshot() == before);
                continue;
            }
            auto rec = w.reg.find(ctx.params.at("token"));
            REQUIRE(rec);
            if (path == "/redeemtoken.cgi") {
                REQUIRE(rec->state == registry::TokenState::Mapped);
                REQUIRE(rec->mapping->target_ip == peer);
                REQUIRE(std::to_string(rec->mapping->target_port) == ctx.params.at("port"));
            } else {
                REQUIRE(rec->state == registry::TokenState::Destroyed);
            }
        }
    }
}
