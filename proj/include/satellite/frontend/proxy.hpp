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

#include "satellite/frontend/dialer.hpp"
#include "satellite/frontend/pages.hpp"
#include "satellite/frontend/route.hpp"

#include <boost/asio/io_context.hpp>

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace satellite::frontend {

struct TlsFiles {
    std::filesystem::path certificate;
    std::filesystem::path private_key;
};

struct FrontendConfig {
    std::string bind_address = "0.0.0.0";
    std::uint16_t port = 443;
    std::optional<TlsFiles> tls;
    bool dev_plaintext = false;
    std::chrono::milliseconds connect_timeout{10'000};
    // Per read/write on an established upstream exchange.
    std::chrono::milliseconds read_timeout{300'000};
    // Between requests on a client connection.
    std::chrono::milliseconds idle_timeout{60'000};
    std::size_t max_header_bytes = 16 * 1024;
    // Bytes held in flight per direction while streaming.
    std::size_t stream_chunk_bytes = 64 * 1024;
    Seconds page_refresh{15};
    // Close live connections when their mapping is deactivated instead of
    // letting them drain.
    bool kill_on_deactivate = false;

    [[nodiscard]] std::vector<std::string> validate() const;
};

// Public listener: routes by Host, relays HTTP and WebSocket traffic to the
// mapped target, and serves placeholder and error pages.
class ProxyServer {
  public:
    ProxyServer(boost::asio::io_context& ioc, FrontendConfig cfg, const Router& router, const PageRenderer& pages,
                Dialer& dialer);
    ~ProxyServer();
    ProxyServer(const ProxyServer&) = delete;
    ProxyServer& operator=(const ProxyServer&) = delete;

    [[nodiscard]] std::uint16_t port() const;
    void start();
    void stop();

    // Closes connections currently relaying for `label`. Only tracked when
    // kill_on_deactivate is set.
    void abort_label(const std::string& label);

  private:
    struct Impl;
    std::shared_ptr<Impl> impl_;
};

} // namespace satellite::frontend
