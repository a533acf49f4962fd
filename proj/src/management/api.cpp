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

#include "satellite/management/api.hpp"

#include "satellite/common/log.hpp"

#include <charconv>

namespace satellite::management {

namespace {

using registry::Errc;
using registry::RegistryError;

Response text(int status, std::string body) {
    return Response{.status = status, .content_type = "text/plain; charset=utf-8", .body = std::move(body)};
}

Response ok() { return text(200, "OK\n"); }

Response method_not_allowed() { return text(405, "method not allowed\n"); }

Response from_error(const RegistryError& e) {
    switch (e.code()) {
    case Errc::OriginForbidden:
        return text(403, "origin forbidden\n");
    case Errc::PrivilegedPort:
        return text(403, "privileged port refused\n");
    case Errc::NotFound:
        return text(404, "token not found\n");
    case Errc::AlreadyMapped:
        return text(409, "token already mapped\n");
    case Errc::Conflict:
        return text(409, "a different job is registered\n");
    case Errc::BadPort:
        return text(400, "bad port\n");
    case Errc::InvalidArgument:
        return text(400, std::string(e.what()) + "\n");
    case Errc::Exhausted:
        return text(503, "no token available, retry later\n");
    }
    return text(500, "internal error\n");
}

const std::string* param(const RequestContext& ctx, std::string_view name) {
    auto it = ctx.params.find(name);
    return it == ctx.params.end() ? nullptr : &it->second;
}

// Whole-string decimal integer; anything else is malformed.
std::optional<int> parse_int(const std::string& s) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
        return std::nullopt;
    return v;
}

bool is_get_or_post(const RequestContext& ctx) { return ctx.method == "GET" || ctx.method == "POST"; }

} // namespace

bool is_management_path(std::string_view path) {
    return path == kGetLinkPath || path == kRedeemPath || path == kDestroyPath || path == kJobStatusPath ||
           path == kRegisterJobPath || path == kHealthPath;
}

ManagementApi::ManagementApi(registry::Registry& registry, JobStatusBoard& board, const Clock& clock,
                             HealthFn health)
    : registry_(registry), board_(board), clock_(clock), health_(std::move(health)) {}

Response ManagementApi::handle(const RequestContext& ctx) {
    Response res;
    if (!registry_.config().trusted_cidrs.contains(ctx.peer_ip)) {
        res = text(403, "origin forbidden\n");
    } else if (ctx.path == kGetLinkPath) {
        res = handle_getlink(ctx);
    } else if (ctx.path == kRedeemPath) {
        res = handle_redeemtoken(ctx);
    } else if (ctx.path == kDestroyPath) {
        res = handle_destroytoken(ctx);
    } else if (ctx.path == kJobStatusPath) {
        res = handle_jobstatus(ctx);
    } else if (ctx.path == kRegisterJobPath) {
        res = handle_registerjob(ctx);
    } else if (ctx.path == kHealthPath && health_) {
        res = ctx.method == "GET" ? Response{.status = 200, .content_type = "application/json", .body = health_()}
                                  : method_not_allowed();
    } else {
        res = text(404, "not found\n");
    }
    log::emit(log::Level::info, "management_request",
              {{"peer", ctx.peer_ip.to_string()},
               {"method", ctx.method},
               {"path", ctx.path},
               {"status", std::to_string(res.status)}});
    return res;
}

Response ManagementApi::handle_getlink(const RequestContext& ctx) {
    if (ctx.method != "GET")
        return method_not_allowed();
    try {
        auto rec = registry_.issue_token(ctx.peer_ip, clock_.now());
        return text(200, rec.label() + "\n");
    } catch (const RegistryError& e) {
        return from_error(e);
    }
}

Response ManagementApi::handle_redeemtoken(const RequestContext& ctx) {
    if (!is_get_or_post(ctx))
        return method_not_allowed();
    const auto* token = param(ctx, "token");
    const auto* port_text = param(ctx, "port");
    if (!token || !port_text)
        return text(400, "token and port are required\n");
    auto port = parse_int(*port_text);
    if (!port)
        return text(400, "bad port\n");
    try {
        registry_.redeem_token(*token, *port, ctx.peer_ip, clock_.now());
        return ok();
    } catch (const RegistryError& e) {
        return from_error(e);
    }
}

Response ManagementApi::handle_destroytoken(const RequestContext& ctx) {
    if (!is_get_or_post(ctx))
        return method_not_allowed();
    const auto* token = param(ctx, "token");
    const auto* port_text = param(ctx, "port");
    if (!token || !port_text)
        return text(400, "token and port are required\n");
    auto port = parse_int(*port_text);
    if (!port)
        return text(400, "bad port\n");
    try {
        registry_.destroy_token(*token, *port, ctx.peer_ip);
        return ok();
    } catch (const RegistryError& e) {
        return from_error(e);
    }
}

Response ManagementApi::handle_jobstatus(const RequestContext& ctx) {
    if (ctx.method != "POST")
        return method_not_allowed();
    const auto* job_id = param(ctx, "job_id");
    const auto* state_text = param(ctx, "state");
    if (!job_id || !registry::is_valid_job_id(*job_id))
        return text(400, "missing or malformed job_id\n");
    if (!state_text)
        return text(400, "missing state\n");
    auto state = parse_job_state(*state_text);
    if (!state)
        return text(400, "unknown state\n");
    JobStatusReport report{.job_id = *job_id, .state = *state, .detail = std::nullopt, .reported_at = clock_.now()};
    if (const auto* detail = param(ctx, "detail"))
        report.detail = *detail;
    board_.report(std::move(report));
    log::emit(log::Level::info, "job_status", {{"job_id", *job_id}, {"state", std::string(to_string(*state))}});
    return ok();
}

Response ManagementApi::handle_registerjob(const RequestContext& ctx) {
    if (!is_get_or_post(ctx))
        return method_not_allowed();
    const auto* token = param(ctx, "token");
    const auto* job_id = param(ctx, "job_id");
    if (!token || !job_id)
        return text(400, "token and job_id are required\n");
    try {
        registry_.register_job(*token, *job_id, ctx.peer_ip);
        return ok();
    } catch (const RegistryError& e) {
        return from_error(e);
    }
}

RequestContext ManagementApi::context_from(const http::ServerRequest& req) {
    auto [path, query] = http::split_target(req.target);
    RequestContext ctx{.peer_ip = req.peer, .method = req.method, .path = std::string(path), .params = {}};
    ctx.params = http::parse_form(query);
    auto type = req.header("Content-Type");
    if (!req.body.empty() && type && type->starts_with("application/x-www-form-urlencoded")) {
        for (auto& [k, v] : http::parse_form(req.body))
            ctx.params.insert_or_assign(k, v);
    }
    return ctx;
}

ManagementServer::ManagementServer(boost::asio::io_context& ioc, const std::string& address, std::uint16_t port,
                                   ManagementApi& api)
    : server_(ioc, address, port, [&api](const http::ServerRequest& req) {
          return api.handle(ManagementApi::context_from(req));
      }) {}

} // namespace satellite::management
