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

#include "satellite/http/server.hpp"

#include "satellite/common/log.hpp"

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>

#include <strings.h>

namespace satellite::http {

namespace net = boost::asio;
namespace beast = boost::beast;
namespace bhttp = beast::http;
using tcp = net::ip::tcp;

std::optional<std::string> ServerRequest::header(std::string_view name) const {
    for (const auto& h : headers)
        if (h.name.size() == name.size() && ::strncasecmp(h.name.data(), name.data(), name.size()) == 0)
            return h.value;
    return std::nullopt;
}

struct HttpServer::Impl : std::enable_shared_from_this<Impl> {
    Impl(net::io_context& io, const tcp::endpoint& ep, Handler h, ServerOptions o)
        : ioc(io), acceptor(net::make_strand(io)), handler(std::move(h)), opts(o) {
        acceptor.open(ep.protocol());
        acceptor.set_option(net::socket_base::reuse_address(true));
        acceptor.bind(ep);
        acceptor.listen(net::socket_base::max_listen_connections);
        bound_port = acceptor.local_endpoint().port();
    }

    net::awaitable<void> accept_loop() {
        auto self = shared_from_this();
        for (;;) {
            boost::system::error_code ec;
            auto sock = co_await acceptor.async_accept(net::make_strand(ioc), net::redirect_error(net::use_awaitable, ec));
            if (ec == net::error::operation_aborted || !acceptor.is_open())
                co_return;
            if (ec)
                continue;
            auto ex = sock.get_executor();
            net::co_spawn(ex, session(std::move(sock)), net::detached);
        }
    }

    net::awaitable<void> session(tcp::socket sock) {
        auto self = shared_from_this();
        boost::system::error_code ec;
        auto remote = sock.remote_endpoint(ec);
        if (ec)
            co_return;
        auto peer = IpAddress::from_string(remote.address().to_string());
        beast::tcp_stream stream(std::move(sock));
        beast::flat_buffer buf;
        for (;;) {
            bhttp::request_parser<bhttp::string_body> parser;
            parser.header_limit(static_cast<std::uint32_t>(opts.header_limit));
            parser.body_limit(opts.body_limit);
            stream.expires_after(opts.idle_timeout);
            boost::system::error_code rec;
            co_await bhttp::async_read(stream, buf, parser, net::redirect_error(net::use_awaitable, rec));
            if (rec == bhttp::error::end_of_stream || rec == beast::error::timeout)
                break;
            bhttp::response<bhttp::string_body> res;
            bool keep_alive = false;
            if (rec) {
                if (rec != bhttp::error::body_limit && rec != bhttp::error::header_limit)
                    break;
                res.result(rec == bhttp::error::body_limit ? bhttp::status::payload_too_large
                                                           : bhttp::status::request_header_fields_too_large);
                res.set(bhttp::field::content_type, "text/plain; charset=utf-8");
                res.body() = "request too large\n";
            } else {
                auto& req = parser.get();
                keep_alive = req.keep_alive();
                ServerRequest sr{.peer = peer,
                                 .method = std::string(req.method_string()),
                                 .target = std::string(req.target()),
                                 .headers = {},
                                 .body = std::move(req.body())};
                for (const auto& f : req)
                    sr.headers.push_back({std::string(f.name_string()), std::string(f.value())});
                ServerResponse out;
                try {
                    out = handler(sr);
                } catch (const std::exception& e) {
                    log::emit(log::Level::err, "handler_failed", {{"error", e.what()}});
                    out = ServerResponse{.status = 500, .body = "internal error\n"};
                }
                res.result(static_cast<unsigned>(out.status));
                res.set(bhttp::field::content_type, out.content_type);
                for (const auto& h : out.headers)
                    res.set(h.name, h.value);
                res.body() = std::move(out.body);
            }
            res.version(11);
            res.keep_alive(keep_alive);
            res.prepare_payload();
            boost::system::error_code wec;
            co_await bhttp::async_write(stream, res, net::redirect_error(net::use_awaitable, wec));
            if (wec || !keep_alive)
                break;
        }
        stream.socket().shutdown(tcp::socket::shutdown_send, ec);
    }

    net::io_context& ioc;
    tcp::acceptor acceptor;
    std::uint16_t bound_port = 0;
    Handler handler;
    ServerOptions opts;
};

HttpServer::HttpServer(net::io_context& ioc, const std::string& address, std::uint16_t port, Handler handler,
                       ServerOptions opts)
    : impl_(std::make_shared<Impl>(ioc, tcp::endpoint(net::ip::make_address(address), port), std::move(handler),
                                   opts)) {}

HttpServer::~HttpServer() { stop(); }

std::uint16_t HttpServer::port() const { return impl_->bound_port; }

void HttpServer::start() {
    net::co_spawn(impl_->acceptor.get_executor(), impl_->accept_loop(), net::detached);
}

void HttpServer::stop() {
    net::post(impl_->acceptor.get_executor(), [impl = impl_] {
        boost::system::error_code ec;
        impl->acceptor.close(ec);
    });
}

} // namespace satellite::http
