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

#include <condition_variable>
#include <mutex>
#include <optional>
#include <thread>

namespace satellite::ops {

// Runs Registry::reconcile once per reconcile_interval. Simulations call
// tick() directly with their own clock; the service starts the thread.
class Reconciler {
  public:
    Reconciler(registry::Registry& registry, const Clock& clock);
    ~Reconciler();
    Reconciler(const Reconciler&) = delete;
    Reconciler& operator=(const Reconciler&) = delete;

    // Reconciles if a full interval has passed since the last run, or if
    // there has been none.
    std::optional<registry::ReconcileSummary> tick(Timestamp now);

    // Polls the clock in the background until stop().
    void start(std::chrono::milliseconds poll = std::chrono::milliseconds{200});
    void stop();

  private:
    registry::Registry& registry_;
    const Clock& clock_;
    std::mutex tick_mu_;
    std::mutex mu_;
    std::condition_variable cv_;
    bool stopping_ = false;
    std::thread thread_;
};

} // namespace satellite::ops
