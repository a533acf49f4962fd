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

#include "satellite/ops/reconciler.hpp"

#include "satellite/common/log.hpp"

namespace satellite::ops {

Reconciler::Reconciler(registry::Registry& registry, const Clock& clock) : registry_(registry), clock_(clock) {}

Reconciler::~Reconciler() { stop(); }

std::optional<registry::ReconcileSummary> Reconciler::tick(Timestamp now) {
    std::lock_guard lk(tick_mu_);
    auto last = registry_.last_reconcile();
    if (last && now - *last < registry_.config().reconcile_interval)
        return std::nullopt;
    auto summary = registry_.reconcile(now);
    if (summary.activations || summary.deactivations || !summary.expired.empty() || summary.purged)
        log::emit(log::Level::info, "reconcile",
                  {{"activations", std::to_string(summary.activations)},
                   {"deactivations", std::to_string(summary.deactivations)},
                   {"expired", std::to_string(summary.expired.size())},
                   {"purged", std::to_string(summary.purged)}});
    return summary;
}

void Reconciler::start(std::chrono::milliseconds poll) {
    std::lock_guard lk(mu_);
    if (thread_.joinable())
        return;
    stopping_ = false;
    thread_ = std::thread([this, poll] {
        std::unique_lock lk(mu_);
        while (!stopping_) {
            lk.unlock();
            try {
                tick(clock_.now());
            } catch (const std::exception& e) {
                log::emit(log::Level::err, "reconcile_failed", {{"error", e.what()}});
            }
            lk.lock();
            cv_.wait_for(lk, poll, [this] { return stopping_; });
        }
    });
}

void Reconciler::stop() {
    {
        std::lock_guard lk(mu_);
        stopping_ = true;
    }
    cv_.notify_all();
    if (thread_.joinable())
        thread_.join();
}

} // namespace satellite::ops
