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

#include "satellite/http/client.hpp"

#include "satellite/http/url.hpp"

#include <boost/asio.hpp>
#include <boost/asio/ssl.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/ssl.hpp>

#include <strings.h>

namespace satellite::http {

namespace net = boost::asio;
namespace beast = boost::beast;
namespace bhttp = beast::http;
using tcp = net::ip::tcp;

std::optional<std::string> ClientResponse::header(std::string_view name) const {
    for (const auto& h : headers)
        if (h.name.size() == name.size() && ::strncasecmp(h.name.data(), name.data(), name.size()) == 0)
            return h.value;
    return std::nullopt;
}

namespace {

bhttp::request<bhttp::string_body> to_beast(const std::string& host, std::uint16_t port, const ClientRequest& req) {
    bhttp::request<bhttp::string_body> out;
    out.method_string(req.method);
    out.target(req.target);
    out.version(11);
    bool has_host = false;
    for (const auto& h : req.headers) {
        if (::strcasecmp(h.name.c_str(), "host") == 0)
            has_host = true;
        out.insert(h.name, h.value);
    }
    if (!has_host)
        out.set(bhttp::field::host, host + ":" + std::to_string(port));
    if (!out.count(bhttp::field::connection))
        out.set(bhttp::field::connection, "close");
    out.body() = req.body;
    if (!req.body.empty() || req.method == "POST" || req.method == "PUT")
        out.prepare_payload();
    return out;
}

template <class Stream>
net::awaitable<ClientResponse> exchange(Stream& stream, bhttp::request<bhttp::string_body>& req, std::size_t limit) {
    co_await bhttp::async_write(stream, req, net::use_awaitable);
    beast::flat_buffer buf;
    bhttp::response_parser<bhttp::string_body> parser;
    parser.body_limit(limit);
    if (req.method() == bhttp::verb::head)
        parser.skip(true);
    co_await bhttp::async_read(stream, buf, parser, net::use_awaitable);
    auto& res = parser.get();
    ClientResponse out;
    out.status = static_cast<int>(res.result_int());
    for (const auto& f : res)
        out.headers.push_back({std::string(f.name_string()), std::string(f.value())});
    out.body = std::move(res.body());
    co_return out;
}

net::awaitable<ClientResponse> run(const std::string& host, std::uint16_t port, const ClientRequest& request,
                                   const ClientOptions& opts) {
    auto ex = co_await net::this_coro::executor;
    tcp::resolver resolver(ex);
    const std::string service = std::to_string(port);
    auto results = co_await resolver.async_resolve(host, service, net::use_awaitable);

    beast::tcp_stream tcp_stream(ex);
    tcp_stream.expires_after(opts.timeout);
    if (!opts.local_address.empty()) {
        auto local = net::ip::make_address(opts.local_address);
        auto& sock = tcp_stream.socket();
        sock.open(local.is_v4() ? tcp::v4() : tcp::v6());
        sock.bind(tcp::endpoint(local, 0));
        co_await tcp_stream.async_connect(*results.begin(), net::use_awaitable);
    } else {
        co_await tcp_stream.async_connect(results, net::use_awaitable);
    }

    auto req = to_beast(host, port, request);
    if (!opts.tls)
        co_return co_await exchange(tcp_stream, req, opts.body_limit);

    net::ssl::context ctx(net::ssl::context::tls_client);
    ctx.set_verify_mode(net::ssl::verify_none);
    beast::ssl_stream<beast::tcp_stream> tls(std::move(tcp_stream), ctx);
    if (!opts.sni.empty())
        ::SSL_set_tlsext_host_name(tls.native_handle(), opts.sni.c_str());
    co_await tls.async_handshake(net::ssl::stream_base::client, net::use_awaitable);
    co_return co_await exchange(tls, req, opts.body_limit);
}

} // namespace

ClientResponse request(const std::string& host, std::uint16_t port, const ClientRequest& req,
                       const ClientOptions& opts) {
    net::io_context ioc;
    std::optional<ClientResponse> result;
    std::exception_ptr failure;
    net::co_spawn(ioc, run(host, port, req, opts), [&](std::exception_ptr e, ClientResponse r) {
        if (e)
            failure = e;
        else
            result = std::move(r);
    });
    ioc.run();
    if (failure) {
        try {
            std::rethrow_exception(failure);
        } catch (const boost::system::system_error& e) {
            bool timed_out = e.code() == beast::error::timeout;
            throw ClientError(host + ":" + std::to_string(port) + ": " + e.code().message(), timed_out);
        } catch (const std::exception& e) {
            throw ClientError(host + ":" + std::to_string(port) + ": " + e.what(), false);
        }
    }
    return std::move(*result);
}

ClientResponse get(const std::string& url, const ClientOptions& opts) {
    auto u = parse_url(url);
    if (!u)
        throw ClientError("malformed URL: " + url, false);
    ClientOptions o = opts;
    o.tls = o.tls || u->scheme == "https";
    return request(u->host, u->port, ClientRequest{.method = "GET", .target = u->path}, o);
}

ClientResponse post_form(const std::string& url, const std::vector<std::pair<std::string, std::string>>& fields,
                         const ClientOptions& opts) {
    auto u = parse_url(url);
    if (!u)
        throw ClientError("malformed URL: " + url, false);
    ClientOptions o = opts;
    o.tls = o.tls || u->scheme == "https";
    ClientRequest req{.method = "POST",
                      .target = u->path,
                      .headers = {{"Content-Type", "application/x-www-form-urlencoded"}},
                      .body = encode_form(fields)};
    return request(u->host, u->port, req, o);
}

} // namespace satellite::http
