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

#include <boost/asio/io_context.hpp>

#include <chrono>
#include <cstdint>
#include <memory>
#include <string>

namespace satellite::sim {

struct FakeAppOptions {
    // Body of `GET /`, so tests can tell upstreams apart.
    std::string sentinel = "fake-app";
    // Delay before each HTTP response.
    std::chrono::milliseconds response_delay{0};
};

// Stand-in for a notebook server.
//
//   GET  /            sentinel + "\n"
//   GET  /headers     request line and headers as JSON
//   GET  /bytes/N     N bytes of deterministic_bytes(N, seed), seed from ?seed=
//   POST /echo        the request body
//   any WebSocket     echo; a text frame "__close__" closes with 1000
class FakeApp {
  public:
    FakeApp(boost::asio::io_context& ioc, const std::string& address, std::uint16_t port, FakeAppOptions opts = {});
    ~FakeApp();
    FakeApp(const FakeApp&) = delete;
    FakeApp& operator=(const FakeApp&) = delete;

    [[nodiscard]] std::uint16_t port() const;
    [[nodiscard]] std::uint64_t requests() const;
    void start();
    // Stops listening and drops every open connection, as if the process
    // died.
    void kill();

  private:
    struct Impl;
    std::shared_ptr<Impl> impl_;
};

std::string deterministic_bytes(std::size_t n, std::uint64_t seed);

} // namespace satellite::sim
