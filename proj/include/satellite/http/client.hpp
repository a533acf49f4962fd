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
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

// Small blocking HTTP/1.1 client used by the spawner, the job-side helper,
// the simulator's browser and the tests.
namespace satellite::http {

struct Header {
    std::string name;
    std::string value;
};

struct ClientRequest {
    std::string method = "GET";
    std::string target = "/";
    std::vector<Header> headers;
    std::string body;
};

struct ClientResponse {
    int status = 0;
    std::vector<Header> headers;
    std::string body;

    // Case-insensitive lookup of the first header named `name`.
    [[nodiscard]] std::optional<std::string> header(std::string_view name) const;
};

struct ClientOptions {
    std::chrono::milliseconds timeout{10'000};
    bool tls = false;
    // TLS server name; empty sends none. Certificates are not verified.
    std::string sni;
    // Source address to bind before connecting.
    std::string local_address;
    std::size_t body_limit = std::size_t{256} << 20;
};

class ClientError : public std::runtime_error {
  public:
    ClientError(const std::string& what, bool timed_out) : std::runtime_error(what), timed_out_(timed_out) {}
    [[nodiscard]] bool timed_out() const { return timed_out_; }

  private:
    bool timed_out_;
};

ClientResponse request(const std::string& host, std::uint16_t port, const ClientRequest& req,
                       const ClientOptions& opts = {});

ClientResponse get(const std::string& url, const ClientOptions& opts = {});
ClientResponse post_form(const std::string& url, const std::vector<std::pair<std::string, std::string>>& fields,
                         const ClientOptions& opts = {});

} // namespace satellite::http
