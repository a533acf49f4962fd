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

#include "satellite/common/digest.hpp"
#include "satellite/http/websocket_client.hpp"

#include "support/proxy_world.hpp"
#include "support/tempdir.hpp"

#include <doctest.h>
#include <json.hpp>

#include <atomic>
#include <cstdlib>
#include <random>
#include <thread>

using namespace satellite;
using namespace satellite::testing;
using namespace std::chrono_literals;

TEST_CASE("proxied request carries forwarding headers") {
    ProxyWorld w;
    Upstream up;
    auto label = w.map(up.port());
    auto res = w.get(w.host_for(label), "/headers?x=1&y=%20",
                     {{"X-Forwarded-For", "6.6.6.6"},
                      {"X-Custom", "kept"},
                      {"Connection", "close, X-Hop"},
                      {"X-Hop", "dropped"},
                      {"Proxy-Authorization", "secret"}});
    REQUIRE(res.status == 200);
    auto j = nlohmann::json::parse(res.body);
    auto h = j["headers"];
    CHECK(j["method"] == "GET");
    CHECK(j["target"] == "/headers?x=1&y=%20");
    CHECK(h["x-forwarded-for"] == "127.0.0.1");
    CHECK(h["x-forwarded-proto"] == "http");
    CHECK(h["x-forwarded-host"] == w.host_for(label));
    CHECK(h["host"] == "127.0.0.1:" + std::to_string(up.port()));
    CHECK(h["x-custom"] == "kept");
    CHECK_FALSE(h.contains("x-hop"));
    CHECK_FALSE(h.contains("proxy-authorization"));
}

TEST_CASE("pending and not-found pages over the wire") {
    ProxyWorld w;
    auto label = w.issue();
    auto pending = w.get(w.host_for(label));
    CHECK(pending.status == 200);
    CHECK(pending.header("content-type")->starts_with("text/html"));
    CHECK(pending.body.find(label) != std::string::npos);

    auto unknown = w.get(w.host_for("never-issued-here"));
    CHECK(unknown.status == 404);
    CHECK(w.get("evil.example.com").status == 404);
    CHECK(w.get("a." + w.host_for(label)).status == 404);

    Upstream up;
    auto gone = w.map(up.port());
    w.reg.destroy_token(gone, up.port(), ip("127.0.0.1"));
    auto destroyed = w.get(w.host_for(gone));
    CHECK(destroyed.status == 404);
    CHECK(destroyed.body == unknown.body);
}

TEST_CASE("502 when the upstream refuses, without leaking the address") {
    ProxyWorld w;
    auto port = dead_port();
    auto label = w.map(port);
    auto res = w.get(w.host_for(label));
    CHECK(res.status == 502);
    CHECK(res.body.find(label) != std::string::npos);
    CHECK(res.body.find("127.0.0.1") == std::string::npos);
    CHECK(res.body.find(std::to_string(port)) == std::string::npos);
}

TEST_CASE("504 when the upstream is too slow") {
    auto fc = ProxyWorld::dev_config();
    fc.read_timeout = 300ms;
    ProxyWorld w(fc);
    Upstream up({.sentinel = "slow", .response_delay = 2000ms});
    auto label = w.map(up.port());
    auto res = w.get(w.host_for(label));
    CHECK(res.status == 504);
    CHECK(res.body.find(label) != std::string::npos);
    CHECK(res.body.find("127.0.0.1") == std::string::npos);
}

TEST_CASE("10 MB response streams through byte-identical") {
    ProxyWorld w;
    Upstream up;
    auto label = w.map(up.port());
    const std::string target = "/bytes/" + std::to_string(10 * 1024 * 1024) + "?seed=77";
    auto direct = http::request("127.0.0.1", up.port(), {.method = "GET", .target = target});
    auto proxied = w.get(w.host_for(label), target);
    REQUIRE(direct.status == 200);
    REQUIRE(proxied.status == 200);
    CHECK(proxied.body.size() == 10 * 1024 * 1024);
    CHECK(sha256_hex(proxied.body) == sha256_hex(direct.body));
    CHECK(sha256_hex(proxied.body) == sha256_hex(sim::deterministic_bytes(10 * 1024 * 1024, 77)));
}

TEST_CASE("request bodies stream to the upstream") {
    ProxyWorld w;
    Upstream up;
    auto label = w.map(up.port());
    auto body = sim::deterministic_bytes(3 * 1024 * 1024 + 17, 5);
    auto res = http::request("127.0.0.1", w.proxy.port(),
                             {.method = "POST",
                              .target = "/echo",
                              .headers = {{"Host", w.host_for(label)}, {"Content-Type", "application/octet-stream"}},
                              .body = body});
    REQUIRE(res.status == 200);
    CHECK(res.body == body);
}

TEST_CASE("HEAD requests get headers only") {
    ProxyWorld w;
    Upstream up;
    auto label = w.map(up.port());
    auto res = http::request("127.0.0.1", w.proxy.port(),
                             {.method = "HEAD", .target = "/bytes/1000", .headers = {{"Host", w.host_for(label)}}});
    CHECK(res.status == 200);
    CHECK(res.body.empty());
    CHECK(res.header("content-length") == "1000");
}

TEST_CASE("isolation between two mappings") {
    ProxyWorld w;
    Upstream a({.sentinel = "sentinel-A"});
    Upstream b({.sentinel = "sentinel-B"});
    auto la = w.map(a.port());
    auto lb = w.map(b.port());
    std::atomic<int> wrong{0}, total{0};
    std::vector<std::thread> threads;
    for (int t = 0; t < 8; ++t) {
        threads.emplace_back([&, t] {
            for (int i = 0; i < 25; ++i) {
                bool use_a = (i + t) % 2 == 0;
                auto res = w.get(w.host_for(use_a ? la : lb));
                ++total;
                if (res.body != (use_a ? "sentinel-A\n" : "sentinel-B\n"))
                    ++wrong;
            }
        });
    }
    for (auto& t : threads)
        t.join();
    CHECK(total == 200);
    CHECK(wrong == 0);
}

TEST_CASE("websocket relay echoes and propagates close") {
    ProxyWorld w;
    Upstream up;
    auto label = w.map(up.port());
    http::WsClient ws("127.0.0.1", w.proxy.port(), "/api/kernels/1/channels", {.host_header = w.host_for(label)});
    ws.send({.binary = false, .data = "ping"});
    auto echo = ws.receive();
    REQUIRE(echo);
    CHECK(echo->data == "ping");
    CHECK_FALSE(echo->binary);
    ws.send({.binary = false, .data = "__close__"});
    CHECK_FALSE(ws.receive());
    CHECK(ws.close_code() == 1000);
}

TEST_CASE("websocket relay preserves 1000 random frames") {
    ProxyWorld w;
    Upstream up;
    auto label = w.map(up.port());
    std::mt19937_64 rng(1234);
    std::vector<http::WsFrame> frames;
    for (int i = 0; i < 1000; ++i) {
        http::WsFrame f{.binary = rng() % 2 == 0, .data = {}};
        auto n = rng() % 3 == 0 ? rng() % 70000 : rng() % 200;
        f.data = sim::deterministic_bytes(n, rng());
        if (!f.binary)
            for (auto& c : f.data)
                c = static_cast<char>('a' + static_cast<unsigned char>(c) % 26);
        frames.push_back(std::move(f));
    }
    auto transcript = [&](std::uint16_t port, const std::string& host) {
        http::WsClient ws("127.0.0.1", port, "/ws", {.host_header = host});
        std::vector<http::WsFrame> got;
        // Keep a few frames in flight in each direction.
        std::size_t sent = 0;
        while (got.size() < frames.size()) {
            while (sent < frames.size() && sent < got.size() + 8)
                ws.send(frames[sent++]);
            auto f = ws.receive();
            REQUIRE(f);
            got.push_back(*f);
        }
        ws.close();
        return got;
    };
    auto direct = transcript(up.port(), "127.0.0.1");
    auto proxied = transcript(w.proxy.port(), w.host_for(label));
    REQUIRE(proxied.size() == frames.size());
    for (std::size_t i = 0; i < frames.size(); ++i) {
        INFO("frame " << i);
        CHECK(proxied[i].binary == frames[i].binary);
        CHECK(proxied[i].data == frames[i].data);
        CHECK(proxied[i].data == direct[i].data);
    }
}

TEST_CASE("websocket upgrade refused by upstream becomes 502") {
    ProxyWorld w;
    // The management-style plain HTTP server answers the upgrade with 404.
    auto label = w.map(dead_port());
    try {
        http::WsClient ws("127.0.0.1", w.proxy.port(), "/ws", {.host_header = w.host_for(label)});
        FAIL("upgrade should fail");
    } catch (const http::WsUpgradeError& e) {
        INFO(std::string(e.what()));
        CHECK(e.status() == 502);
    }
}

TEST_CASE("websocket on a pending URL is not upgraded") {
    ProxyWorld w;
    auto label = w.issue();
    try {
        http::WsClient ws("127.0.0.1", w.proxy.port(), "/ws", {.host_header = w.host_for(label)});
        FAIL("upgrade should fail");
    } catch (const http::WsUpgradeError& e) {
        CHECK(e.status() == 200);
    }
}

TEST_CASE("deactivation drains live connections by default") {
    ProxyWorld w;
    Upstream up;
    auto label = w.map(up.port());
    http::WsClient ws("127.0.0.1", w.proxy.port(), "/ws", {.host_header = w.host_for(label)});
    w.reg.destroy_token(label, up.port(), ip("127.0.0.1"));
    w.reg.reconcile(w.clock.now());
    CHECK(w.get(w.host_for(label)).status == 404);
    ws.send({.binary = false, .data = "still here"});
    auto f = ws.receive();
    REQUIRE(f);
    CHECK(f->data == "still here");
}

TEST_CASE("kill_on_deactivate closes live connections") {
    auto fc = ProxyWorld::dev_config();
    fc.kill_on_deactivate = true;
    ProxyWorld w(fc);
    w.reg.on_deactivate([&](const std::string& l) { w.proxy.abort_label(l); });
    Upstream up;
    auto label = w.map(up.port());
    http::WsClient ws("127.0.0.1", w.proxy.port(), "/ws", {.host_header = w.host_for(label)});
    ws.send({.binary = false, .data = "hello"});
    REQUIRE(ws.receive());
    w.reg.destroy_token(label, up.port(), ip("127.0.0.1"));
    w.reg.reconcile(w.clock.now());
    bool closed = false;
    try {
        ws.send({.binary = false, .data = "after"});
        closed = !ws.receive().has_value();
    } catch (const std::exception&) {
        closed = true;
    }
    CHECK(closed);
}

TEST_CASE("oversized request headers are refused") {
    ProxyWorld w;
    auto res = w.get(w.host_for("a-b-c"), "/", {{"X-Big", std::string(32 * 1024, 'a')}});
    CHECK(res.status == 431);
}

TEST_CASE("public listener does not serve management paths") {
    ProxyWorld w;
    auto before = w.reg.last_seq();
    for (const char* path : {"/getlink.cgi", "/redeemtoken.cgi?token=x&port=8888", "/jobstatus", "/healthz"}) {
        CHECK(w.get(kDomain, path).status == 404);
        CHECK(w.get("127.0.0.1", path).status == 404);
    }
    CHECK(w.reg.last_seq() == before);
    CHECK(w.reg.issued_tokens() == 0);
}

TEST_CASE("frontend never dials a privileged port under registry fuzzing") {
    ProxyWorld w;
    std::atomic<int> privileged_dials{0};
    w.dialer.set_observer([&](const frontend::Target& t, bool permitted) {
        if (permitted && t.port < 1024)
            ++privileged_dials;
    });
    std::mt19937_64 rng(4242);
    std::vector<std::string> labels;
    for (int i = 0; i < 300; ++i) {
        auto label = w.issue();
        labels.push_back(label);
        int port = static_cast<int>(rng() % 2048);
        try {
            w.reg.redeem_token(label, port, ip("127.0.0.1"), w.clock.now());
        } catch (const registry::RegistryError&) {
        }
    }
    w.reg.reconcile(w.clock.now());
    for (const auto& r : w.reg.snapshot())
        if (r.mapping)
            REQUIRE(r.mapping->target_port >= 1024);
    for (std::size_t i = 0; i < labels.size(); i += 3)
        w.get(w.host_for(labels[i]));
    CHECK(privileged_dials == 0);
    CHECK(w.dialer.refused() == 0);
}

namespace {

// Self-signed wildcard certificate for the test domain.
void make_cert(const std::filesystem::path& dir) {
    auto cmd = "openssl req -x509 -newkey rsa:2048 -nodes -days 1 -subj '/CN=*." + std::string(kDomain) +
               "' -keyout '" + (dir / "key.pem").string() + "' -out '" + (dir / "cert.pem").string() +
               "' >/dev/null 2>&1";
    REQUIRE(std::system(cmd.c_str()) == 0);
}

} // namespace

TEST_CASE("TLS termination routes by Host and rejects SNI mismatch") {
    TempDir dir;
    make_cert(dir.path());
    auto fc = ProxyWorld::dev_config();
    fc.dev_plaintext = false;
    fc.tls = frontend::TlsFiles{dir.path() / "cert.pem", dir.path() / "key.pem"};
    CHECK(fc.validate().empty());
    ProxyWorld w(fc);
    Upstream up;
    auto label = w.map(up.port());
    auto host = w.host_for(label);
    http::ClientRequest req{.method = "GET", .target = "/headers", .headers = {{"Host", host}}};

    auto res = http::request("127.0.0.1", w.proxy.port(), req, {.tls = true, .sni = host});
    REQUIRE(res.status == 200);
    CHECK(nlohmann::json::parse(res.body)["headers"]["x-forwarded-proto"] == "https");

    auto mismatch = http::request("127.0.0.1", w.proxy.port(), req, {.tls = true, .sni = w.host_for("other-label-x")});
    CHECK(mismatch.status == 404);

    auto no_sni = http::request("127.0.0.1", w.proxy.port(), req, {.tls = true});
    CHECK(no_sni.status == 200);
}

TEST_CASE("frontend config validation") {
    frontend::FrontendConfig fc;
    CHECK_FALSE(fc.validate().empty());
    fc.dev_plaintext = true;
    CHECK(fc.validate().empty());
    fc.tls = frontend::TlsFiles{"/nonexistent/cert.pem", "/nonexistent/key.pem"};
    auto errors = fc.validate();
    CHECK(errors.size() == 3);
    fc = {};
    fc.dev_plaintext = true;
    fc.bind_address = "not-an-ip";
    CHECK(fc.validate().size() == 1);
}
