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

#include "satellite/sim/fake_app.hpp"

#include "satellite/http/url.hpp"

#include <json.hpp>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include <atomic>
#include <charconv>
#include <list>
#include <mutex>

namespace satellite::sim {

namespace net = boost::asio;
namespace beast = boost::beast;
namespace bhttp = beast::http;
namespace websocket = beast::websocket;
using tcp = net::ip::tcp;
using boost::system::error_code;

std::string deterministic_bytes(std::size_t n, std::uint64_t seed) {
    std::string out(n, '\0');
    std::uint64_t x = seed * 0x9E3779B97F4A7C15ULL + 1;
    for (std::size_t i = 0; i < n; ++i) {
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        out[i] = static_cast<char>(x >> 24);
    }
    return out;
}

namespace {

struct Live {
    net::any_io_executor ex;
    tcp::socket* sock = nullptr;
    bool alive = true;
};

std::optional<std::size_t> parse_size(std::string_view s) {
    std::size_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        return std::nullopt;
    return v;
}

} // namespace

struct FakeApp::Impl : std::enable_shared_from_this<Impl> {
    Impl(net::io_context& io, const tcp::endpoint& ep, FakeAppOptions o) : ioc(io), acceptor(net::make_strand(io)), opts(std::move(o)) {
        acceptor.open(ep.protocol());
        acceptor.set_option(net::socket_base::reuse_address(true));
        acceptor.bind(ep);
        acceptor.listen();
        bound_port = acceptor.local_endpoint().port();
    }

    net::awaitable<void> accept_loop() {
        auto self = shared_from_this();
        for (;;) {
            error_code ec;
            auto sock = co_await acceptor.async_accept(net::make_strand(ioc), net::redirect_error(net::use_awaitable, ec));
            if (!acceptor.is_open())
                co_return;
            if (ec)
                continue;
            auto ex = sock.get_executor();
            net::co_spawn(ex, session(tcp::socket(std::move(sock))), net::detached);
        }
    }

    std::shared_ptr<Live> track(tcp::socket& s) {
        auto l = std::make_shared<Live>();
        l->ex = s.get_executor();
        l->sock = &s;
        std::lock_guard lock(mu);
        live.push_back(l);
        return l;
    }

    void untrack(const std::shared_ptr<Live>& l) {
        l->alive = false;
        std::lock_guard lock(mu);
        live.remove(l);
    }

    net::awaitable<void> session(tcp::socket sock) {
        auto self = shared_from_this();
        beast::tcp_stream stream(std::move(sock));
        auto handle = track(stream.socket());
        struct Untrack {
            Impl& impl;
            std::shared_ptr<Live> l;
            ~Untrack() { impl.untrack(l); }
        } untrack{*this, handle};

        beast::flat_buffer buf;
        for (;;) {
            bhttp::request_parser<bhttp::string_body> p;
            p.body_limit(std::uint64_t{64} << 20);
            error_code ec;
            co_await bhttp::async_read(stream, buf, p, net::redirect_error(net::use_awaitable, ec));
            if (ec)
                break;
            ++requests;
            auto req = p.release();
            if (websocket::is_upgrade(req)) {
                co_await echo_websocket(std::move(stream), std::move(req));
                co_return;
            }
            if (opts.response_delay.count() > 0) {
                net::steady_timer t(co_await net::this_coro::executor, opts.response_delay);
                co_await t.async_wait(net::redirect_error(net::use_awaitable, ec));
            }
            auto res = respond(req);
            co_await bhttp::async_write(stream, res, net::redirect_error(net::use_awaitable, ec));
            if (ec || !res.keep_alive())
                break;
        }
        error_code ec;
        stream.socket().shutdown(tcp::socket::shutdown_send, ec);
    }

    bhttp::response<bhttp::string_body> respond(const bhttp::request<bhttp::string_body>& req) {
        bhttp::response<bhttp::string_body> res{bhttp::status::ok, req.version()};
        res.keep_alive(req.keep_alive());
        res.set(bhttp::field::server, "fake-app");
        auto [path, query] = http::split_target(std::string_view(req.target().data(), req.target().size()));
        if (path == "/" && req.method() == bhttp::verb::get) {
            res.set(bhttp::field::content_type, "text/plain");
            res.body() = opts.sentinel + "\n";
        } else if (path == "/headers") {
            nlohmann::json j;
            j["method"] = std::string(req.method_string());
            j["target"] = std::string(req.target());
            j["sentinel"] = opts.sentinel;
            nlohmann::json headers = nlohmann::json::object();
            for (const auto& f : req) {
                std::string name(f.name_string());
                for (auto& c : name)
                    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
                headers[name] = std::string(f.value());
            }
            j["headers"] = headers;
            res.set(bhttp::field::content_type, "application/json");
            res.body() = j.dump();
        } else if (path.starts_with("/bytes/")) {
            auto n = parse_size(path.substr(7));
            auto params = http::parse_form(query);
            std::uint64_t seed = 0;
            if (auto it = params.find("seed"); it != params.end())
                seed = parse_size(it->second).value_or(0);
            if (!n) {
                res.result(bhttp::status::bad_request);
            } else {
                res.set(bhttp::field::content_type, "application/octet-stream");
                res.body() = deterministic_bytes(*n, seed);
            }
        } else if (path == "/echo" && req.method() == bhttp::verb::post) {
            res.set(bhttp::field::content_type, "application/octet-stream");
            res.body() = req.body();
        } else {
            res.result(bhttp::status::not_found);
            res.body() = "no such path\n";
        }
        res.prepare_payload();
        return res;
    }

    net::awaitable<void> echo_websocket(beast::tcp_stream stream, bhttp::request<bhttp::string_body> req) {
        stream.expires_never();
        websocket::stream<beast::tcp_stream> ws(std::move(stream));
        auto handle = track(beast::get_lowest_layer(ws).socket());
        struct Untrack {
            Impl& impl;
            std::shared_ptr<Live> l;
            ~Untrack() { impl.untrack(l); }
        } untrack{*this, handle};
        error_code ec;
        co_await ws.async_accept(req, net::redirect_error(net::use_awaitable, ec));
        if (ec)
            co_return;
        beast::flat_buffer buf;
        for (;;) {
            co_await ws.async_read(buf, net::redirect_error(net::use_awaitable, ec));
            if (ec)
                co_return;
            auto data = beast::buffers_to_string(buf.data());
            buf.consume(buf.size());
            if (ws.got_text() && data == "__close__") {
                const websocket::close_reason reason(websocket::close_code::normal, "bye");
                co_await ws.async_close(reason, net::redirect_error(net::use_awaitable, ec));
                // Wait for the peer's close frame.
                while (!ec)
                    co_await ws.async_read(buf, net::redirect_error(net::use_awaitable, ec));
                co_return;
            }
            ws.binary(ws.got_binary());
            co_await ws.async_write(net::buffer(data), net::redirect_error(net::use_awaitable, ec));
            if (ec)
                co_return;
        }
    }

    net::io_context& ioc;
    tcp::acceptor acceptor;
    FakeAppOptions opts;
    std::uint16_t bound_port = 0;
    std::atomic<std::uint64_t> requests{0};
    std::mutex mu;
    std::list<std::shared_ptr<Live>> live;
};

FakeApp::FakeApp(net::io_context& ioc, const std::string& address, std::uint16_t port, FakeAppOptions opts)
    : impl_(std::make_shared<Impl>(ioc, tcp::endpoint(net::ip::make_address(address), port), std::move(opts))) {}

FakeApp::~FakeApp() { kill(); }

std::uint16_t FakeApp::port() const { return impl_->bound_port; }

std::uint64_t FakeApp::requests() const { return impl_->requests.load(); }

void FakeApp::start() { net::co_spawn(impl_->acceptor.get_executor(), impl_->accept_loop(), net::detached); }

void FakeApp::kill() {
    net::post(impl_->acceptor.get_executor(), [impl = impl_] {
        error_code ec;
        impl->acceptor.close(ec);
    });
    std::lock_guard lock(impl_->mu);
    for (const auto& l : impl_->live) {
        net::post(l->ex, [l] {
            if (l->alive) {
                error_code ec;
                l->sock->close(ec);
            }
        });
    }
}

} // namespace satellite::sim
