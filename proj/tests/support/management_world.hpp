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

#include "satellite/management/api.hpp"
#include "satellite/registry/registry.hpp"

#include "support/fixtures.hpp"
#include "support/io_threads.hpp"

#include <string>

namespace satellite::testing {

// Registry and management listener on loopback, trusting 127/8.
struct ServedManagement {
    explicit ServedManagement(std::uint64_t seed = 5)
        : reg(loopback_config(), clock, registry::seeded_random(seed)),
          api(reg, board, clock),
          server(io.ioc, "127.0.0.1", 0, api) {
        server.start();
    }

    static registry::RegistryConfig loopback_config() {
        auto cfg = test_registry_config();
        cfg.trusted_cidrs = CidrSet({Cidr::from_string("127.0.0.0/8")});
        return cfg;
    }

    [[nodiscard]] std::string base_url() const { return "http://127.0.0.1:" + std::to_string(server.port()); }

    ManualClock clock;
    registry::Registry reg;
    management::JobStatusBoard board;
    management::ManagementApi api;
    IoThreads io{2};
    management::ManagementServer server;
};

} // namespace satellite::testing
