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

#include "satellite/http/websocket_client.hpp"

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include <sys/socket.h>
#include <sys/time.h>

#include <stdexcept>

namespace satellite::http {

namespace net = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = net::ip::tcp;

struct WsClient::Impl {
    net::io_context ioc;
    websocket::stream<tcp::socket> ws{ioc};
    std::optional<std::uint16_t> peer_close;
};

namespace {

void set_socket_timeouts(tcp::socket& s, std::chrono::milliseconds t) {
    timeval tv{};
    tv.tv_sec = static_cast<time_t>(t.count() / 1000);
    tv.tv_usec = static_cast<suseconds_t>((t.count() % 1000) * 1000);
    ::setsockopt(s.native_handle(), SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof tv);
    ::setsockopt(s.native_handle(), SOL_SOCKET, SO_SNDTIMEO, &tv, sizeof tv);
}

} // namespace

WsClient::WsClient(const std::string& host, std::uint16_t port, const std::string& target, const WsOptions& opts)
    : impl_(std::make_unique<Impl>()) {
    auto& sock = impl_->ws.next_layer();
    tcp::endpoint remote(net::ip::make_address(host), port);
    sock.open(remote.protocol());
    if (!opts.local_address.empty())
        sock.bind(tcp::endpoint(net::ip::make_address(opts.local_address), 0));
    set_socket_timeouts(sock, opts.timeout);
    sock.connect(remote);
    std::string host_header = opts.host_header.empty() ? host + ":" + std::to_string(port) : opts.host_header;
    websocket::response_type res;
    beast::error_code ec;
    // The async form reports the server's response even when the upgrade is
    // declined; the blocking one leaves it empty.
    impl_->ws.async_handshake(res, host_header, target, [&](beast::error_code e) { ec = e; });
    impl_->ioc.run();
    impl_->ioc.restart();
    if (ec)
        throw WsUpgradeError("websocket upgrade failed: " + ec.message(), static_cast<int>(res.result_int()));
}

WsClient::~WsClient() {
    beast::error_code ec;
    impl_->ws.next_layer().close(ec);
}

void WsClient::send(const WsFrame& f) {
    impl_->ws.binary(f.binary);
    impl_->ws.write(net::buffer(f.data));
}

std::optional<WsFrame> WsClient::receive() {
    beast::flat_buffer buf;
    beast::error_code ec;
    impl_->ws.read(buf, ec);
    if (ec == websocket::error::closed) {
        impl_->peer_close = impl_->ws.reason().code;
        return std::nullopt;
    }
    if (ec)
        throw std::runtime_error("websocket read: " + ec.message());
    return WsFrame{.binary = impl_->ws.got_binary(), .data = beast::buffers_to_string(buf.data())};
}

void WsClient::close(std::uint16_t code) {
    if (!impl_->ws.is_open())
        return;
    impl_->ws.close(websocket::close_reason(code));
    // Drain until the peer's close frame arrives.
    beast::flat_buffer buf;
    beast::error_code ec;
    while (!ec)
        impl_->ws.read(buf, ec);
    if (ec == websocket::error::closed)
        impl_->peer_close = impl_->ws.reason().code;
}

std::optional<std::uint16_t> WsClient::close_code() const { return impl_->peer_close; }

} // namespace satellite::http
