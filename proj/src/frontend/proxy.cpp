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

#include "satellite/frontend/proxy.hpp"

#include "satellite/common/log.hpp"

#include <boost/asio.hpp>
#include <boost/asio/ssl.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/ssl.hpp>
#include <boost/beast/websocket/rfc6455.hpp>

#include <limits>
#include <map>
#include <mutex>

namespace satellite::frontend {

namespace net = boost::asio;
namespace ssl = net::ssl;
namespace beast = boost::beast;
namespace bhttp = beast::http;
using tcp = net::ip::tcp;
using boost::system::error_code;

std::vector<std::string> FrontendConfig::validate() const {
    std::vector<std::string> errors;
    if (tls.has_value() == dev_plaintext)
        errors.emplace_back("frontend: exactly one of tls and dev_plaintext must be set");
    if (tls) {
        if (!std::filesystem::exists(tls->certificate))
            errors.push_back("frontend.tls.certificate: no such file: " + tls->certificate.string());
        if (!std::filesystem::exists(tls->private_key))
            errors.push_back("frontend.tls.private_key: no such file: " + tls->private_key.string());
    }
    error_code ec;
    net::ip::make_address(bind_address, ec);
    if (ec)
        errors.push_back("frontend.bind: not an IP address: " + bind_address);
    if (connect_timeout.count() <= 0 || read_timeout.count() <= 0 || idle_timeout.count() <= 0)
        errors.emplace_back("frontend: timeouts must be positive");
    if (max_header_bytes < 1024)
        errors.emplace_back("frontend.max_header_bytes: must be at least 1024");
    if (stream_chunk_bytes == 0)
        errors.emplace_back("frontend.stream_chunk_bytes: must be positive");
    if (page_refresh.count() <= 0)
        errors.emplace_back("frontend.page_refresh: must be positive");
    return errors;
}

namespace {

constexpr auto kNoLimit = std::numeric_limits<std::uint64_t>::max();

template <class Fields>
void strip_hop_by_hop(Fields& f, bool keep_upgrade) {
    std::vector<std::string> named;
    for (auto tok : bhttp::token_list(f[bhttp::field::connection]))
        named.emplace_back(tok);
    for (const auto& n : named) {
        if (beast::iequals(n, "content-length") || beast::iequals(n, "transfer-encoding"))
            continue;
        if (keep_upgrade && beast::iequals(n, "upgrade"))
            continue;
        f.erase(n);
    }
    f.erase(bhttp::field::connection);
    f.erase(bhttp::field::keep_alive);
    f.erase(bhttp::field::proxy_authenticate);
    f.erase(bhttp::field::proxy_authorization);
    f.erase(bhttp::field::proxy_connection);
    f.erase(bhttp::field::te);
    f.erase(bhttp::field::trailer);
    if (!keep_upgrade)
        f.erase(bhttp::field::upgrade);
}

std::string host_port(const Target& t) {
    auto ip = t.ip.to_string();
    if (!t.ip.is_v4())
        ip = "[" + ip + "]";
    return ip + ":" + std::to_string(t.port);
}

tcp::endpoint endpoint_of(const Target& t) {
    return {net::ip::make_address(t.ip.to_string()), static_cast<std::uint16_t>(t.port)};
}

enum class RelayResult { Ok, ReadFailed, ReadTimedOut, WriteFailed };

// Streams one message from `in` to `out` through a bounded buffer.
template <bool isRequest, class In, class Out>
net::awaitable<RelayResult> relay(In& in, beast::flat_buffer& inbuf, bhttp::parser<isRequest, bhttp::buffer_body>& p,
                                  Out& out, std::size_t chunk, std::chrono::milliseconds timeout) {
    std::vector<char> tmp(chunk);
    bhttp::serializer<isRequest, bhttp::buffer_body> sr{p.get()};
    error_code ec;
    beast::get_lowest_layer(out).expires_after(timeout);
    co_await bhttp::async_write_header(out, sr, net::redirect_error(net::use_awaitable, ec));
    if (ec)
        co_return RelayResult::WriteFailed;
    do {
        auto& body = p.get().body();
        if (!p.is_done()) {
            body.data = tmp.data();
            body.size = tmp.size();
            beast::get_lowest_layer(in).expires_after(timeout);
            co_await bhttp::async_read(in, inbuf, p, net::redirect_error(net::use_awaitable, ec));
            if (ec == bhttp::error::need_buffer)
                ec = {};
            if (ec)
                co_return ec == beast::error::timeout ? RelayResult::ReadTimedOut : RelayResult::ReadFailed;
            body.size = tmp.size() - body.size;
            body.data = tmp.data();
            body.more = !p.is_done();
        } else {
            body.data = nullptr;
            body.size = 0;
            body.more = false;
        }
        beast::get_lowest_layer(out).expires_after(timeout);
        co_await bhttp::async_write(out, sr, net::redirect_error(net::use_awaitable, ec));
        if (ec == bhttp::error::need_buffer)
            ec = {};
        if (ec)
            co_return RelayResult::WriteFailed;
    } while (!p.is_done() && !sr.is_done());
    co_return RelayResult::Ok;
}

// Reads and discards the rest of a request body.
template <class Stream>
net::awaitable<bool> drain(Stream& s, beast::flat_buffer& buf, bhttp::request_parser<bhttp::buffer_body>& p) {
    char tmp[8192];
    error_code ec;
    while (!p.is_done()) {
        p.get().body().data = tmp;
        p.get().body().size = sizeof tmp;
        co_await bhttp::async_read(s, buf, p, net::redirect_error(net::use_awaitable, ec));
        if (ec == bhttp::error::need_buffer)
            ec = {};
        if (ec)
            co_return false;
    }
    co_return true;
}

template <class Stream>
void shutdown_send(Stream& s) {
    error_code ec;
    beast::get_lowest_layer(s).socket().shutdown(tcp::socket::shutdown_send, ec);
}

// Copies raw bytes until `from` ends, then half-closes `to`.
template <class From, class To>
net::awaitable<void> pump(From& from, To& to, beast::flat_buffer& leftover, std::size_t chunk) {
    error_code ec;
    if (leftover.size() > 0) {
        co_await net::async_write(to, leftover.data(), net::redirect_error(net::use_awaitable, ec));
        leftover.consume(leftover.size());
    }
    std::vector<char> tmp(chunk);
    while (!ec) {
        auto n = co_await from.async_read_some(net::buffer(tmp), net::redirect_error(net::use_awaitable, ec));
        if (ec)
            break;
        co_await net::async_write(to, net::buffer(tmp.data(), n), net::redirect_error(net::use_awaitable, ec));
        if (ec) {
            error_code ignored;
            beast::get_lowest_layer(from).socket().close(ignored);
        }
    }
    shutdown_send(to);
}

// Handle through which abort_label reaches a live session. Touched only on
// the session's strand.
struct LiveConnection {
    net::any_io_executor strand;
    tcp::socket* client = nullptr;
    tcp::socket* upstream = nullptr;
    bool alive = true;

    void close() {
        error_code ec;
        if (client)
            client->close(ec);
        if (upstream)
            upstream->close(ec);
    }
};

} // namespace

struct ProxyServer::Impl : std::enable_shared_from_this<Impl> {
    Impl(net::io_context& io, FrontendConfig c, const Router& r, const PageRenderer& pg, Dialer& d)
        : ioc(io), cfg(std::move(c)), router(r), pages(pg), dialer(d), acceptor(net::make_strand(io)) {
        if (cfg.tls) {
            tls.emplace(ssl::context::tls_server);
            tls->set_options(ssl::context::default_workarounds | ssl::context::no_sslv2 | ssl::context::no_sslv3 |
                             ssl::context::no_tlsv1 | ssl::context::no_tlsv1_1);
            tls->use_certificate_chain_file(cfg.tls->certificate.string());
            tls->use_private_key_file(cfg.tls->private_key.string(), ssl::context::pem);
        }
        tcp::endpoint ep(net::ip::make_address(cfg.bind_address), cfg.port);
        acceptor.open(ep.protocol());
        acceptor.set_option(net::socket_base::reuse_address(true));
        acceptor.bind(ep);
        acceptor.listen(net::socket_base::max_listen_connections);
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
            net::co_spawn(ex, handle(tcp::socket(std::move(sock))), net::detached);
        }
    }

    net::awaitable<void> handle(tcp::socket sock) {
        auto self = shared_from_this();
        error_code ec;
        auto remote = sock.remote_endpoint(ec);
        if (ec)
            co_return;
        auto peer = IpAddress::from_string(remote.address().to_string());
        beast::tcp_stream stream(std::move(sock));
        if (!tls) {
            std::optional<std::string> no_sni;
            co_await session(stream, peer, no_sni);
            co_return;
        }
        beast::ssl_stream<beast::tcp_stream> secure(std::move(stream), *tls);
        beast::get_lowest_layer(secure).expires_after(cfg.idle_timeout);
        co_await secure.async_handshake(ssl::stream_base::server, net::redirect_error(net::use_awaitable, ec));
        if (ec)
            co_return;
        std::string sni;
        if (const char* name = ::SSL_get_servername(secure.native_handle(), TLSEXT_NAMETYPE_host_name))
            sni = name;
        std::optional<std::string> sni_opt(std::move(sni));
        co_await session(secure, peer, sni_opt);
    }

    // `sni` is set (possibly empty) for TLS connections.
    template <class Stream>
    net::awaitable<void> session(Stream& client, const IpAddress& peer, std::optional<std::string> sni) {
        beast::flat_buffer buf;
        for (;;) {
            bhttp::request_parser<bhttp::buffer_body> p;
            p.header_limit(static_cast<std::uint32_t>(cfg.max_header_bytes));
            p.body_limit(kNoLimit);
            beast::get_lowest_layer(client).expires_after(cfg.idle_timeout);
            error_code ec;
            co_await bhttp::async_read_header(client, buf, p, net::redirect_error(net::use_awaitable, ec));
            if (ec == bhttp::error::header_limit) {
                std::string body = "request header too large\n";
                co_await write_page(client, 431, body, false, false, "text/plain");
                break;
            }
            if (ec)
                break;
            auto& req = p.get();
            std::string host(req[bhttp::field::host]);
            auto decision = router.resolve_host(host);
            if (sni && !sni->empty() && normalize_host(*sni) != normalize_host(host))
                decision = RouteDecision{};
            bool keep = req.keep_alive();
            bool head = req.method() == bhttp::verb::head;
            log::emit(log::Level::debug, "proxy_request",
                      {{"host", host},
                       {"route", std::string(to_string(decision.kind))},
                       {"method", std::string(req.method_string())}});

            if (decision.kind != RouteKind::Proxy) {
                bool drained = co_await drain(client, buf, p);
                keep = keep && drained;
                bool pending = decision.kind == RouteKind::Pending;
                std::string body = pending ? pages.pending(decision.label, decision.status) : pages.not_found();
                co_await write_page(client, pending ? 200 : 404, body, keep, head);
                if (!keep)
                    break;
                continue;
            }
            if (beast::websocket::is_upgrade(req)) {
                bool secure = sni.has_value();
                co_await relay_websocket(client, buf, p, decision, peer, secure, host);
                co_return;
            }
            bool secure = sni.has_value();
            keep = co_await proxy_http(client, buf, p, decision, peer, secure, host, keep, head);
            if (!keep)
                break;
        }
        shutdown_send(client);
    }

    std::string failure_page(int status, const std::string& label) const {
        return status == 504 ? pages.gateway_timeout(label) : pages.bad_gateway(label);
    }

    // Callers pass named locals: GCC 11 mishandles temporaries that live
    // across a co_await.
    template <class Stream>
    net::awaitable<void> write_page(Stream& client, int status, const std::string& body, bool keep, bool head,
                                    const char* type = "text/html; charset=utf-8") {
        bhttp::response<bhttp::string_body> res{static_cast<bhttp::status>(status), 11};
        res.set(bhttp::field::content_type, type);
        res.set(bhttp::field::cache_control, "no-store");
        res.keep_alive(keep);
        res.body() = body;
        res.prepare_payload();
        if (head)
            res.body().clear();
        beast::get_lowest_layer(client).expires_after(cfg.read_timeout);
        error_code ec;
        co_await bhttp::async_write(client, res, net::redirect_error(net::use_awaitable, ec));
    }

    std::shared_ptr<LiveConnection> track(const std::string& label, net::any_io_executor strand) {
        if (!cfg.kill_on_deactivate)
            return nullptr;
        auto c = std::make_shared<LiveConnection>();
        c->strand = std::move(strand);
        std::lock_guard lock(live_mu);
        live.emplace(label, c);
        return c;
    }

    void untrack(const std::string& label, const std::shared_ptr<LiveConnection>& c) {
        if (!c)
            return;
        c->alive = false;
        std::lock_guard lock(live_mu);
        auto [lo, hi] = live.equal_range(label);
        for (auto it = lo; it != hi; ++it) {
            if (it->second == c) {
                live.erase(it);
                break;
            }
        }
    }

    struct Tracked {
        Impl& impl;
        std::string label;
        std::shared_ptr<LiveConnection> conn;
        ~Tracked() { impl.untrack(label, conn); }
    };

    // Connects to the target or explains why not (502/504 status).
    net::awaitable<int> connect_upstream(beast::tcp_stream& up, const Target& t) {
        if (!dialer.permit(t))
            co_return 502;
        error_code ec;
        up.expires_after(cfg.connect_timeout);
        const auto ep = endpoint_of(t);
        co_await up.async_connect(ep, net::redirect_error(net::use_awaitable, ec));
        if (ec == beast::error::timeout)
            co_return 504;
        if (ec)
            co_return 502;
        co_return 0;
    }

    template <class Stream>
    net::awaitable<bool> proxy_http(Stream& client, beast::flat_buffer& buf, bhttp::request_parser<bhttp::buffer_body>& p,
                                    const RouteDecision& d, const IpAddress& peer, bool secure,
                                    const std::string& host, bool keep, bool head) {
        auto ex = co_await net::this_coro::executor;
        Tracked tracked{*this, d.label, track(d.label, ex)};
        if (tracked.conn)
            tracked.conn->client = &beast::get_lowest_layer(client).socket();

        beast::tcp_stream up(ex);
        const Target target = *d.target;
        int failure = co_await connect_upstream(up, target);
        if (failure != 0) {
            bool drained = co_await drain(client, buf, p);
            keep = keep && drained;
            std::string body = failure_page(failure, d.label);
            co_await write_page(client, failure, body, keep, head);
            co_return keep;
        }
        if (tracked.conn)
            tracked.conn->upstream = &up.socket();

        auto& req = p.get();
        bool expect_continue = beast::iequals(req[bhttp::field::expect], "100-continue");
        strip_hop_by_hop(req, false);
        req.erase(bhttp::field::expect);
        req.set(bhttp::field::host, host_port(*d.target));
        req.set("X-Forwarded-For", peer.to_string());
        req.set("X-Forwarded-Proto", secure ? "https" : "http");
        req.set("X-Forwarded-Host", host);
        req.keep_alive(false);

        error_code ec;
        if (expect_continue) {
            bhttp::response<bhttp::empty_body> cont{bhttp::status::continue_, 11};
            co_await bhttp::async_write(client, cont, net::redirect_error(net::use_awaitable, ec));
            if (ec)
                co_return false;
        }

        auto sent = co_await relay(client, buf, p, up, cfg.stream_chunk_bytes, cfg.read_timeout);
        if (sent == RelayResult::WriteFailed) {
            // Upstream went away while taking the request.
            std::string body = failure_page(502, d.label);
            co_await write_page(client, 502, body, false, head);
            co_return false;
        }
        if (sent != RelayResult::Ok)
            co_return false;

        bhttp::response_parser<bhttp::buffer_body> rp;
        rp.body_limit(kNoLimit);
        if (head)
            rp.skip(true);
        beast::flat_buffer ubuf;
        up.expires_after(cfg.read_timeout);
        co_await bhttp::async_read_header(up, ubuf, rp, net::redirect_error(net::use_awaitable, ec));
        if (ec) {
            int status = ec == beast::error::timeout ? 504 : 502;
            std::string body = failure_page(status, d.label);
            co_await write_page(client, status, body, keep, head);
            co_return keep;
        }
        auto& res = rp.get();
        strip_hop_by_hop(res, false);
        bool client_keep = keep && !rp.need_eof();
        res.keep_alive(client_keep);

        auto got = co_await relay(up, ubuf, rp, client, cfg.stream_chunk_bytes, cfg.read_timeout);
        co_return got == RelayResult::Ok && client_keep;
    }

    template <class Stream>
    net::awaitable<void> relay_websocket(Stream& client, beast::flat_buffer& buf,
                                         bhttp::request_parser<bhttp::buffer_body>& p, const RouteDecision& d,
                                         const IpAddress& peer, bool secure, const std::string& host) {
        auto ex = co_await net::this_coro::executor;
        Tracked tracked{*this, d.label, track(d.label, ex)};
        if (tracked.conn)
            tracked.conn->client = &beast::get_lowest_layer(client).socket();

        beast::tcp_stream up(ex);
        const Target target = *d.target;
        int failure = co_await connect_upstream(up, target);
        if (failure != 0) {
            std::string body = failure_page(failure, d.label);
            co_await write_page(client, failure, body, false, false);
            co_return;
        }
        if (tracked.conn)
            tracked.conn->upstream = &up.socket();

        bhttp::request<bhttp::empty_body> upgrade(p.get().base());
        strip_hop_by_hop(upgrade, true);
        upgrade.set(bhttp::field::connection, "Upgrade");
        upgrade.set(bhttp::field::host, host_port(*d.target));
        upgrade.set("X-Forwarded-For", peer.to_string());
        upgrade.set("X-Forwarded-Proto", secure ? "https" : "http");
        upgrade.set("X-Forwarded-Host", host);

        error_code ec;
        up.expires_after(cfg.read_timeout);
        co_await bhttp::async_write(up, upgrade, net::redirect_error(net::use_awaitable, ec));
        bhttp::response_parser<bhttp::string_body> rp;
        beast::flat_buffer ubuf;
        if (!ec)
            co_await bhttp::async_read(up, ubuf, rp, net::redirect_error(net::use_awaitable, ec));
        if (ec || rp.get().result() != bhttp::status::switching_protocols) {
            int status = ec == beast::error::timeout ? 504 : 502;
            std::string body = failure_page(status, d.label);
            co_await write_page(client, status, body, false, false);
            co_return;
        }
        beast::get_lowest_layer(client).expires_after(cfg.read_timeout);
        co_await bhttp::async_write(client, rp.get(), net::redirect_error(net::use_awaitable, ec));
        if (ec)
            co_return;

        // Both directions now carry opaque frames; close frames pass through
        // like any other bytes.
        beast::get_lowest_layer(client).expires_never();
        up.expires_never();
        net::steady_timer done(ex, net::steady_timer::time_point::max());
        int running = 2;
        auto finished = [&](std::exception_ptr) {
            if (--running == 0)
                done.cancel();
        };
        net::co_spawn(ex, pump(client, up, buf, cfg.stream_chunk_bytes), finished);
        net::co_spawn(ex, pump(up, client, ubuf, cfg.stream_chunk_bytes), finished);
        while (running > 0)
            co_await done.async_wait(net::redirect_error(net::use_awaitable, ec));
    }

    net::io_context& ioc;
    FrontendConfig cfg;
    const Router& router;
    const PageRenderer& pages;
    Dialer& dialer;
    tcp::acceptor acceptor;
    std::optional<ssl::context> tls;
    std::uint16_t bound_port = 0;
    std::mutex live_mu;
    std::multimap<std::string, std::shared_ptr<LiveConnection>> live;
};

ProxyServer::ProxyServer(net::io_context& ioc, FrontendConfig cfg, const Router& router, const PageRenderer& pages,
                         Dialer& dialer)
    : impl_(std::make_shared<Impl>(ioc, std::move(cfg), router, pages, dialer)) {}

ProxyServer::~ProxyServer() { stop(); }

std::uint16_t ProxyServer::port() const { return impl_->bound_port; }

void ProxyServer::start() { net::co_spawn(impl_->acceptor.get_executor(), impl_->accept_loop(), net::detached); }

void ProxyServer::stop() {
    net::post(impl_->acceptor.get_executor(), [impl = impl_] {
        error_code ec;
        impl->acceptor.close(ec);
    });
}

void ProxyServer::abort_label(const std::string& label) {
    std::lock_guard lock(impl_->live_mu);
    auto [lo, hi] = impl_->live.equal_range(label);
    for (auto it = lo; it != hi; ++it) {
        auto conn = it->second;
        net::post(conn->strand, [conn] {
            if (conn->alive)
                conn->close();
        });
    }
}

} // namespace satellite::frontend
