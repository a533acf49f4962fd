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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace satellite::sim {

enum class EventKind {
    TokenIssued,
    JobSubmitted,
    StatusPosted,
    Redeemed,
    Activated,
    FirstProxiedResponse,
    Destroyed,
    Expired,
    PageObserved,
};

std::string_view to_string(EventKind k);

// What the simulated browser saw at the session URL.
enum class PageKind { Pending, Proxy, NotFound, BadGateway, GatewayTimeout, Other };

std::string_view to_string(PageKind k);

struct TranscriptEvent {
    // Simulated seconds since the scenario started.
    Seconds t{0};
    EventKind kind = EventKind::PageObserved;
    // Page kind for PAGE_OBSERVED, job state for STATUS_POSTED.
    std::string detail;

    friend bool operator==(const TranscriptEvent&, const TranscriptEvent&) = default;
};

struct Transcript {
    std::vector<TranscriptEvent> events;

    void add(Seconds t, EventKind kind, std::string detail = {});

    // Index of the first matching event.
    [[nodiscard]] std::optional<std::size_t> index_of(EventKind kind, std::string_view detail = {}) const;
    [[nodiscard]] std::optional<Seconds> time_of(EventKind kind, std::string_view detail = {}) const;
    [[nodiscard]] std::vector<PageKind> pages() const;

    // One {"t":..,"event":..[,"detail":..]} object per line.
    [[nodiscard]] std::string to_ndjson() const;
    static Transcript from_ndjson(std::string_view text);

    friend bool operator==(const Transcript&, const Transcript&) = default;
};

} // namespace satellite::sim
