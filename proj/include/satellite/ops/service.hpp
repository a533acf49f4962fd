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
#include "satellite/frontend/dialer.hpp"
#include "satellite/frontend/pages.hpp"
#include "satellite/frontend/proxy.hpp"
#include "satellite/frontend/route.hpp"
#include "satellite/management/api.hpp"
#include "satellite/management/job_status.hpp"
#include "satellite/ops/config.hpp"
#include "satellite/ops/health.hpp"
#include "satellite/ops/reconciler.hpp"
#include "satellite/registry/journal.hpp"
#include "satellite/registry/registry.hpp"

#include <boost/asio/executor_work_guard.hpp>
#include <boost/asio/io_context.hpp>

#include <memory>
#include <optional>
#include <thread>
#include <vector>

namespace satellite::ops {

struct ServiceOptions {
    // Defaults to the system clock.
    const Clock* clock = nullptr;
    // Defaults to the operating system's random source.
    registry::RandomSource rng;
    // Off when a simulation drives Reconciler::tick itself.
    bool reconcile_thread = true;
};

// The running service: journal replay, registry, management listener,
// public frontend and reconciler, wired from one ServiceConfig.
class Service {
  public:
    // Replays the journal. Throws registry::JournalError on a corrupt one and
    // ConfigError if the configuration is invalid.
    explicit Service(ServiceConfig cfg, ServiceOptions opts = {});
    ~Service();
    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    // Binds both listeners, runs the first reconcile, starts the io threads.
    void start();
    void stop();

    [[nodiscard]] std::uint16_t frontend_port() const { return proxy_->port(); }
    [[nodiscard]] std::uint16_t management_port() const { return management_->port(); }
    [[nodiscard]] std::size_t replayed_entries() const { return replayed_; }

    [[nodiscard]] const ServiceConfig& config() const { return cfg_; }
    [[nodiscard]] const Clock& clock() const { return *clock_; }
    registry::Registry& registry() { return *registry_; }
    management::JobStatusBoard& board() { return board_; }
    Reconciler& reconciler() { return *reconciler_; }
    frontend::Dialer& dialer() { return *dialer_; }
    [[nodiscard]] Health health() const;

  private:
    ServiceConfig cfg_;
    ServiceOptions opts_;
    SystemClock system_clock_;
    const Clock* clock_;
    std::size_t replayed_ = 0;
    std::unique_ptr<registry::FileJournal> journal_;
    std::unique_ptr<registry::Registry> registry_;
    management::JobStatusBoard board_;
    std::unique_ptr<management::ManagementApi> api_;
    std::unique_ptr<frontend::PageRenderer> pages_;
    std::unique_ptr<frontend::Router> router_;
    std::unique_ptr<frontend::Dialer> dialer_;
    std::unique_ptr<Reconciler> reconciler_;
    boost::asio::io_context ioc_;
    std::optional<boost::asio::executor_work_guard<boost::asio::io_context::executor_type>> work_;
    std::unique_ptr<management::ManagementServer> management_;
    std::unique_ptr<frontend::ProxyServer> proxy_;
    std::vector<std::thread> threads_;
    bool started_ = false;
};

} // namespace satellite::ops
