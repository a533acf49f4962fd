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
#include "satellite/registry/registry.hpp"

#include <cstddef>
#include <optional>
#include <string>

namespace satellite::ops {

// A reconciler that has not run within this many intervals is stalled.
inline constexpr int kStaleReconcileIntervals = 10;

struct Health {
    bool ok = false;
    std::size_t active_mappings = 0;
    std::size_t issued_tokens = 0;
    std::optional<Timestamp> last_reconcile;
};

Health compute_health(const registry::Registry& registry, Timestamp now);

// {"status":"ok"|"degraded","active_mappings":N,"issued_tokens":N,
//  "last_reconcile":<unix seconds>|null}
std::string to_json(const Health& h);

} // namespace satellite::ops
