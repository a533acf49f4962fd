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

#include "satellite/spawner/port.hpp"

#include "satellite/spawner/errors.hpp"

#include <boost/asio/ip/tcp.hpp>

#include <random>
#include <thread>

namespace satellite::spawner {

namespace net = boost::asio;
using tcp = net::ip::tcp;

std::uint16_t pick_free_port(int low, int high, const std::string& address) {
    if (low < 1024)
        throw SpawnError(SpawnErrc::Usage, "pick_port",
                         "low end of the port range (" + std::to_string(low) + ") is below 1024");
    if (high > 65535 || low > high)
        throw SpawnError(SpawnErrc::Usage, "pick_port",
                         "port range " + std::to_string(low) + "-" + std::to_string(high) + " is empty or out of bounds");
    boost::system::error_code ec;
    auto addr = net::ip::make_address(address, ec);
    if (ec)
        throw SpawnError(SpawnErrc::Usage, "pick_port", "'" + address + "' is not an IP address");

    net::io_context ioc;
    auto span = static_cast<unsigned>(high - low + 1);
    std::random_device rd;
    auto offset = std::uniform_int_distribution<unsigned>(0, span - 1)(rd);
    for (unsigned i = 0; i < span; ++i) {
        auto port = static_cast<std::uint16_t>(low + (offset + i) % span);
        tcp::acceptor probe(ioc);
        probe.open(addr.is_v4() ? tcp::v4() : tcp::v6(), ec);
        if (ec)
            continue;
        probe.bind(tcp::endpoint(addr, port), ec);
        if (!ec)
            return port;
    }
    throw SpawnError(SpawnErrc::NoPort, "pick_port",
                     "no free port in " + std::to_string(low) + "-" + std::to_string(high));
}

bool wait_for_port(const std::string& host, std::uint16_t port, std::chrono::milliseconds timeout) {
    auto deadline = std::chrono::steady_clock::now() + timeout;
    net::io_context ioc;
    boost::system::error_code ec;
    auto addr = net::ip::make_address(host, ec);
    if (ec)
        return false;
    for (;;) {
        tcp::socket s(ioc);
        s.connect(tcp::endpoint(addr, port), ec);
        if (!ec)
            return true;
        if (std::chrono::steady_clock::now() >= deadline)
            return false;
        std::this_thread::sleep_for(std::chrono::milliseconds(100));
    }
}

} // namespace satellite::spawner
