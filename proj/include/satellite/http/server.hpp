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

#include "satellite/common/ip.hpp"
#include "satellite/http/client.hpp"

#include <boost/asio/io_context.hpp>

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace satellite::http {

struct ServerRequest {
    // Address of the connected socket; never taken from headers.
    IpAddress peer;
    std::string method;
    std::string target;
    std::vector<Header> headers;
    std::string body;

    [[nodiscard]] std::optional<std::string> header(std::string_view name) const;
};

struct ServerResponse {
    int status = 200;
    std::string content_type = "text/plain; charset=utf-8";
    std::string body;
    std::vector<Header> headers;
};

struct ServerOptions {
    std::size_t header_limit = 16 * 1024;
    std::size_t body_limit = 1024 * 1024;
    std::chrono::seconds idle_timeout{30};
};

// Buffered request/response HTTP/1.1 server. The handler runs on whichever
// io_context thread read the request.
class HttpServer {
  public:
    using Handler = std::function<ServerResponse(const ServerRequest&)>;

    // Binds and listens immediately; port 0 picks an ephemeral port.
    HttpServer(boost::asio::io_context& ioc, const std::string& address, std::uint16_t port, Handler handler,
               ServerOptions opts = {});
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    [[nodiscard]] std::uint16_t port() const;
    void start();
    void stop();

  private:
    struct Impl;
    std::shared_ptr<Impl> impl_;
};

} // namespace satellite::http
