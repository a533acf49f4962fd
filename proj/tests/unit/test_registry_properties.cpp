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

#include "satellite/registry/registry.hpp"

#include "support/fixtures.hpp"
#include "support/reference_model.hpp"

#include <doctest.h>

#include <atomic>
#include <random>
#include <set>
#include <thread>

using namespace satellite;
using namespace satellite::registry;
using namespace std::chrono_literals;

namespace {

// Random interleaving of every mutating operation, checking registry-wide
// invariants after each step.
void run_interleaving(std::uint64_t seed, const std::function<void(const Registry&, Timestamp)>& check) {
    std::mt19937_64 rng(seed);
    ManualClock clock;
    auto cfg = satellite::testing::test_registry_config();
    cfg.mapping_ttl = 40s;
    cfg.wall_clock_limit = 60s;
    cfg.issuance_grace = 10s;
    cfg.retention = 15s;
    Registry reg(cfg, clock, seeded_random(seed));
    const std::vector<std::string> ips = {"10.1.0.5", "10.1.0.22", "172.16.0.1"};
    const std::vector<int> ports = {22, 1023, 1024, 8888, 70000};
    std::vector<std::string> labels;
    auto pick_ip = [&] { return IpAddress::from_string(ips[rng() % ips.size()]); };

    for (int step = 0; step < 300; ++step) {
        clock.advance(Seconds{static_cast<long>(rng() % 4)});
        try {
            switch (rng() % 5) {
            case 0:
                labels.push_back(reg.issue_token(pick_ip(), clock.now()).label());
                break;
            case 1:
                if (!labels.empty())
                    reg.redeem_token(labels[rng() % labels.size()], ports[rng() % ports.size()], pick_ip(),
                                     clock.now());
                break;
            case 2:
                if (!labels.empty())
                    reg.destroy_token(labels[rng() % labels.size()], ports[rng() % ports.size()], pick_ip());
                break;
            case 3:
                reg.expire(clock.now());
                break;
            default:
                reg.reconcile(clock.now());
                break;
            }
        } catch (const RegistryError&) {
        }
        check(reg, clock.now());
    }
}

} // namespace

TEST_CASE("property: non-terminal labels are unique") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        run_interleaving(seed, [](const Registry& reg, Timestamp) {
            std::set<std::string> live;
            for (const auto& r : reg.snapshot()) {
                if (is_terminal(r.state))
                    continue;
                CHECK(live.insert(r.label()).second);
            }
        });
    }
}

TEST_CASE("property: every active mapping is trusted and unprivileged") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        run_interleaving(seed, [](const Registry& reg, Timestamp) {
            for (const auto& r : reg.snapshot()) {
                CHECK(r.mapping.has_value() == (r.state == TokenState::Mapped));
                if (r.mapping) {
                    CHECK(reg.config().trusted_cidrs.contains(r.mapping->target_ip));
                    CHECK(r.mapping->target_port >= 1024);
                    CHECK(r.mapping->creator_ip == r.mapping->target_ip);
                    CHECK(r.mapping->expires_at - r.mapping->created_at <= reg.config().mapping_ttl);
                }
            }
        });
    }
}

TEST_CASE("property: journal transcripts only contain lifecycle edges and replay to the same state") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        std::mt19937_64 rng(seed);
        ManualClock clock;
        MemoryJournal journal;
        auto cfg = satellite::testing::test_registry_config();
        cfg.mapping_ttl = 30s;
        cfg.wall_clock_limit = 30s;
        cfg.issuance_grace = 5s;
        cfg.retention = 10s;
        Registry reg(cfg, clock, seeded_random(seed), &journal);
        std::vector<std::string> labels;
        for (int i = 0; i < 200; ++i) {
            clock.advance(Seconds{static_cast<long>(rng() % 5)});
            try {
                switch (rng() % 5) {
                case 0:
                    labels.push_back(reg.issue_token(testing::ip("10.1.0.5"), clock.now()).label());
                    break;
                case 1:
                    if (!labels.empty())
                        reg.redeem_token(labels[rng() % labels.size()], 9000, testing::ip("10.1.0.22"), clock.now());
                    break;
                case 2:
                    if (!labels.empty())
                        reg.destroy_token(labels[rng() % labels.size()], 9000, testing::ip("10.1.0.22"));
                    break;
                case 3:
                    if (!labels.empty())
                        reg.register_job(labels[rng() % labels.size()], "77", testing::ip("10.1.0.5"));
                    break;
                default:
                    reg.reconcile(clock.now());
                }
            } catch (const RegistryError&) {
            }
        }

        std::map<std::string, TokenState> state;
        for (const auto& e : journal.entries()) {
            auto to = *parse_token_state(e.state);
            if (e.op == "issue") {
                CHECK_FALSE(state.contains(e.token));
            } else if (e.op == "redeem" || e.op == "destroy" || e.op == "expire") {
                REQUIRE(state.contains(e.token));
                CHECK(is_allowed_transition(state[e.token], to));
            } else {
                REQUIRE(state.contains(e.token));
                CHECK(state[e.token] == to);
            }
            state[e.token] = to;
            if (e.op == "purge")
                state.erase(e.token);
        }

        Registry replayed(cfg, clock, seeded_random(0));
        replayed.replay(journal.entries());
        CHECK(replayed.snapshot() == reg.snapshot());
        CHECK(replayed.last_seq() == reg.last_seq());
    }
}

TEST_CASE("property: no mapping stays active past expires_at + reconcile_interval") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        std::mt19937_64 rng(seed);
        ManualClock clock;
        auto cfg = satellite::testing::test_registry_config();
        cfg.mapping_ttl = 20s;
        cfg.wall_clock_limit = 20s;
        Registry reg(cfg, clock, seeded_random(seed));
        auto next_reconcile = clock.now();
        for (int i = 0; i < 400; ++i) {
            clock.advance(1s);
            if (rng() % 3 == 0) {
                auto l = reg.issue_token(testing::ip("10.1.0.5"), clock.now()).label();
                reg.redeem_token(l, 9000 + static_cast<int>(rng() % 100), testing::ip("10.1.0.22"), clock.now());
            }
            if (clock.now() >= next_reconcile) {
                reg.reconcile(clock.now());
                next_reconcile = clock.now() + cfg.reconcile_interval;
            }
            for (const auto& r : reg.snapshot())
                if (r.mapping && r.mapping->active)
                    CHECK(clock.now() < r.mapping->expires_at + cfg.reconcile_interval);
        }
    }
}

TEST_CASE("property: reconcile twice without mutation yields {0, 0}") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        run_interleaving(seed, [](const Registry& reg, Timestamp now) {
            auto& r = const_cast<Registry&>(reg);
            r.reconcile(now);
            auto s = r.reconcile(now);
            CHECK(s.activations == 0);
            CHECK(s.deactivations == 0);
        });
    }
}

TEST_CASE("property: registry agrees with the reference interpreter") {
    std::mt19937_64 rng(20240101);
    for (int i = 0; i < 1000; ++i) {
        auto res = satellite::testing::run_random_transcript(rng);
        INFO(res.detail);
        REQUIRE(res.agree);
    }
}

TEST_CASE("concurrent redemptions of one token: exactly one wins") {
    ManualClock clock;
    Registry reg(satellite::testing::test_registry_config(), clock, seeded_random(3));
    for (int trial = 0; trial < 20; ++trial) {
        auto l = reg.issue_token(testing::ip("10.1.0.5"), clock.now()).label();
        std::atomic<int> ok{0}, already{0};
        std::vector<std::thread> threads;
        for (int i = 0; i < 16; ++i)
            threads.emplace_back([&] {
                try {
                    reg.redeem_token(l, 8888, testing::ip("10.1.0.22"), clock.now());
                    ++ok;
                } catch (const RegistryError& e) {
                    if (e.code() == Errc::AlreadyMapped)
                        ++already;
                }
            });
        for (auto& t : threads)
            t.join();
        CHECK(ok == 1);
        CHECK(already == 15);
    }
}
