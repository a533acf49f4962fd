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

#include "satellite/ops/health.hpp"

#include <json.hpp>

namespace satellite::ops {

Health compute_health(const registry::Registry& registry, Timestamp now) {
    Health h;
    h.active_mappings = registry.active_mappings();
    h.issued_tokens = registry.issued_tokens();
    h.last_reconcile = registry.last_reconcile();
    auto limit = registry.config().reconcile_interval * kStaleReconcileIntervals;
    h.ok = h.last_reconcile && now - *h.last_reconcile <= limit;
    return h;
}

std::string to_json(const Health& h) {
    nlohmann::json j;
    j["status"] = h.ok ? "ok" : "degraded";
    j["active_mappings"] = h.active_mappings;
    j["issued_tokens"] = h.issued_tokens;
    j["last_reconcile"] = h.last_reconcile ? nlohmann::json(to_unix(*h.last_reconcile)) : nlohmann::json(nullptr);
    return j.dump();
}

} // namespace satellite::ops
