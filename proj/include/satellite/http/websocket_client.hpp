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

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

namespace satellite::http {

struct WsFrame {
    bool binary = false;
    std::string data;
};

struct WsOptions {
    std::chrono::milliseconds timeout{10'000};
    // Host header sent with the upgrade; defaults to host:port.
    std::string host_header;
    std::string local_address;
};

// Blocking plaintext WebSocket client for tests and the simulator.
class WsClient {
  public:
    // Throws on connection failure or a refused upgrade; `upgrade_status`
    // reports the HTTP status the server answered with.
    WsClient(const std::string& host, std::uint16_t port, const std::string& target, const WsOptions& opts = {});
    ~WsClient();
    WsClient(const WsClient&) = delete;
    WsClient& operator=(const WsClient&) = delete;

    void send(const WsFrame& f);
    // Next data frame, or nullopt once the peer has closed.
    std::optional<WsFrame> receive();
    void close(std::uint16_t code = 1000);

    // Close code the peer sent, once receive() has returned nullopt.
    [[nodiscard]] std::optional<std::uint16_t> close_code() const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

class WsUpgradeError : public std::runtime_error {
  public:
    WsUpgradeError(const std::string& what, int status) : std::runtime_error(what), status_(status) {}
    [[nodiscard]] int status() const { return status_; }

  private:
    int status_;
};

} // namespace satellite::http
