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

#include "satellite/common/clock.hpp"
#include "satellite/common/ip.hpp"
#include "satellite/http/server.hpp"
#include "satellite/http/url.hpp"
#include "satellite/management/job_status.hpp"
#include "satellite/management/paths.hpp"
#include "satellite/registry/registry.hpp"

#include <boost/asio/io_context.hpp>

#include <functional>
#include <memory>
#include <string>
#include <string_view>

namespace satellite::management {

bool is_management_path(std::string_view path);

struct RequestContext {
    IpAddress peer_ip;
    std::string method;
    std::string path;
    // Query string and form body merged; body fields win.
    http::Params params;
};

using Response = http::ServerResponse;

// Transport-independent handlers for the management plane. Every path,
// including unknown ones, answers 403 to peers outside the trusted CIDRs.
class ManagementApi {
  public:
    using HealthFn = std::function<std::string()>;

    ManagementApi(registry::Registry& registry, JobStatusBoard& board, const Clock& clock, HealthFn health = {});

    Response handle(const RequestContext& ctx);

    Response handle_getlink(const RequestContext& ctx);
    Response handle_redeemtoken(const RequestContext& ctx);
    Response handle_destroytoken(const RequestContext& ctx);
    Response handle_jobstatus(const RequestContext& ctx);
    Response handle_registerjob(const RequestContext& ctx);

    // Builds the context from a raw request: peer from the socket, params
    // from the query string and an urlencoded body.
    static RequestContext context_from(const http::ServerRequest& req);

  private:
    registry::Registry& registry_;
    JobStatusBoard& board_;
    const Clock& clock_;
    HealthFn health_;
};

// Management listener: HttpServer in front of ManagementApi.
class ManagementServer {
  public:
    ManagementServer(boost::asio::io_context& ioc, const std::string& address, std::uint16_t port,
                     ManagementApi& api);

    [[nodiscard]] std::uint16_t port() const { return server_.port(); }
    void start() { server_.start(); }
    void stop() { server_.stop(); }

  private:
    http::HttpServer server_;
};

} // namespace satellite::management
