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

#include "satellite/sim/transcript.hpp"

#include <json.hpp>

#include <stdexcept>

namespace satellite::sim {

std::string_view to_string(EventKind k) {
    switch (k) {
    case EventKind::TokenIssued:
        return "TOKEN_ISSUED";
    case EventKind::JobSubmitted:
        return "JOB_SUBMITTED";
    case EventKind::StatusPosted:
        return "STATUS_POSTED";
    case EventKind::Redeemed:
        return "REDEEMED";
    case EventKind::Activated:
        return "ACTIVATED";
    case EventKind::FirstProxiedResponse:
        return "FIRST_PROXIED_RESPONSE";
    case EventKind::Destroyed:
        return "DESTROYED";
    case EventKind::Expired:
        return "EXPIRED";
    case EventKind::PageObserved:
        return "PAGE_OBSERVED";
    }
    return "?";
}

std::string_view to_string(PageKind k) {
    switch (k) {
    case PageKind::Pending:
        return "PENDING";
    case PageKind::Proxy:
        return "PROXY";
    case PageKind::NotFound:
        return "NOT_FOUND";
    case PageKind::BadGateway:
        return "BAD_GATEWAY";
    case PageKind::GatewayTimeout:
        return "GATEWAY_TIMEOUT";
    case PageKind::Other:
        return "OTHER";
    }
    return "?";
}

namespace {

constexpr EventKind kAllEvents[] = {EventKind::TokenIssued, EventKind::JobSubmitted,
                                    EventKind::StatusPosted, EventKind::Redeemed,
                                    EventKind::Activated,   EventKind::FirstProxiedResponse,
                                    EventKind::Destroyed,   EventKind::Expired,
                                    EventKind::PageObserved};
constexpr PageKind kAllPages[] = {PageKind::Pending,    PageKind::Proxy,          PageKind::NotFound,
                                  PageKind::BadGateway, PageKind::GatewayTimeout, PageKind::Other};

} // namespace

void Transcript::add(Seconds t, EventKind kind, std::string detail) {
    events.push_back({t, kind, std::move(detail)});
}

std::optional<std::size_t> Transcript::index_of(EventKind kind, std::string_view detail) const {
    for (std::size_t i = 0; i < events.size(); ++i)
        if (events[i].kind == kind && (detail.empty() || events[i].detail == detail))
            return i;
    return std::nullopt;
}

std::optional<Seconds> Transcript::time_of(EventKind kind, std::string_view detail) const {
    auto i = index_of(kind, detail);
    return i ? std::optional(events[*i].t) : std::nullopt;
}

std::vector<PageKind> Transcript::pages() const {
    std::vector<PageKind> out;
    for (const auto& e : events) {
        if (e.kind != EventKind::PageObserved)
            continue;
        for (auto p : kAllPages)
            if (to_string(p) == e.detail)
                out.push_back(p);
    }
    return out;
}

std::string Transcript::to_ndjson() const {
    std::string out;
    for (const auto& e : events) {
        nlohmann::ordered_json j;
        j["t"] = e.t.count();
        j["event"] = to_string(e.kind);
        if (!e.detail.empty())
            j["detail"] = e.detail;
        out += j.dump();
        out.push_back('\n');
    }
    return out;
}

Transcript Transcript::from_ndjson(std::string_view text) {
    Transcript t;
    while (!text.empty()) {
        auto nl = text.find('\n');
        auto line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (line.empty())
            continue;
        auto j = nlohmann::json::parse(line);
        TranscriptEvent e;
        e.t = Seconds{j.at("t").get<std::int64_t>()};
        auto name = j.at("event").get<std::string>();
        bool found = false;
        for (auto k : kAllEvents)
            if (to_string(k) == name) {
                e.kind = k;
                found = true;
            }
        if (!found)
            throw std::invalid_argument("unknown transcript event " + name);
        if (j.contains("detail"))
            e.detail = j["detail"].get<std::string>();
        t.events.push_back(std::move(e));
    }
    return t;
}

} // namespace satellite::sim
