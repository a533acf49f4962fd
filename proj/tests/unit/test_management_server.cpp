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

#include "satellite/http/client.hpp"
#include "satellite/management/api.hpp"

#include "support/fixtures.hpp"
#include "support/io_threads.hpp"

#include <doctest.h>

#include <atomic>
#include <thread>

using namespace satellite;
using namespace satellite::management;
using satellite::testing::ip;

namespace {

registry::RegistryConfig loopback_config(const char* trusted) {
    auto cfg = satellite::testing::test_registry_config();
    cfg.trusted_cidrs = CidrSet({Cidr::from_string(trusted)});
    return cfg;
}

struct Served {
    explicit Served(const char* trusted = "127.0.0.0/8")
        : reg(loopback_config(trusted), clock, registry::seeded_random(5)),
          api(reg, board, clock),
          server(io.ioc, "127.0.0.1", 0, api) {
        server.start();
    }

    std::string url(const std::string& target) const {
        return "http://127.0.0.1:" + std::to_string(server.port()) + target;
    }

    ManualClock clock;
    registry::Registry reg;
    JobStatusBoard board;
    ManagementApi api;
    satellite::testing::IoThreads io;
    ManagementServer server;
};

} // namespace

TEST_CASE("management over HTTP: full token lifecycle") {
    Served s;
    auto link = http::get(s.url("/getlink.cgi"));
    REQUIRE(link.status == 200);
    CHECK(link.header("content-type")->starts_with("text/plain"));
    auto label = link.body.substr(0, link.body.size() - 1);
    CHECK(link.body == label + "\n");

    auto redeem = http::get(s.url("/redeemtoken.cgi?token=" + label + "&port=8888"),
                            {.local_address = "127.0.0.22"});
    CHECK(redeem.status == 200);
    CHECK(redeem.body == "OK\n");
    CHECK(s.reg.find(label)->mapping->target_ip == ip("127.0.0.22"));

    auto status = http::post_form(s.url("/jobstatus"),
                                  {{"job_id", "3141592"}, {"state", "RUNNING"}, {"detail", "on node c01"}});
    CHECK(status.status == 200);
    CHECK(s.board.find("3141592")->detail == "on node c01");

    auto wrong_host = http::post_form(s.url("/destroytoken.cgi"), {{"token", label}, {"port", "8888"}},
                                      {.local_address = "127.0.0.99"});
    CHECK(wrong_host.status == 403);
    auto destroy = http::post_form(s.url("/destroytoken.cgi"), {{"token", label}, {"port", "8888"}},
                                   {.local_address = "127.0.0.22"});
    CHECK(destroy.status == 200);
    CHECK(s.reg.find(label)->state == registry::TokenState::Destroyed);
}

TEST_CASE("management over HTTP: origin comes from the socket, not X-Forwarded-For") {
    Served s("127.0.0.2/32");
    http::ClientRequest req{.method = "GET", .target = "/getlink.cgi", .headers = {{"X-Forwarded-For", "127.0.0.2"}}};
    auto res = http::request("127.0.0.1", s.server.port(), req, {.local_address = "127.0.0.1"});
    CHECK(res.status == 403);
    auto ok = http::request("127.0.0.1", s.server.port(), req, {.local_address = "127.0.0.2"});
    CHECK(ok.status == 200);
}

TEST_CASE("management over HTTP: concurrent redemption yields one winner") {
    Served s;
    for (int trial = 0; trial < 5; ++trial) {
        auto label = s.reg.issue_token(ip("127.0.0.1"), s.clock.now()).label();
        std::atomic<int> ok{0}, conflict{0}, other{0};
        std::vector<std::thread> threads;
        for (int i = 0; i < 50; ++i) {
            threads.emplace_back([&, i] {
                auto res = http::get(s.url("/redeemtoken.cgi?token=" + label + "&port=" + std::to_string(9000 + i)));
                (res.status == 200 ? ok : res.status == 409 ? conflict : other)++;
            });
        }
        for (auto& t : threads)
            t.join();
        CHECK(ok == 1);
        CHECK(conflict == 49);
        CHECK(other == 0);
    }
}

TEST_CASE("management over HTTP: oversized bodies are refused") {
    Served s;
    http::ClientRequest req{.method = "POST",
                            .target = "/jobstatus",
                            .headers = {{"Content-Type", "application/x-www-form-urlencoded"}},
                            .body = std::string(2 * 1024 * 1024, 'a')};
    auto res = http::request("127.0.0.1", s.server.port(), req);
    CHECK(res.status == 413);
}
