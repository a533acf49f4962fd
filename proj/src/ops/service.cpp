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

#include "satellite/ops/service.hpp"

#include "satellite/common/log.hpp"

#include <filesystem>

namespace satellite::ops {

Service::Service(ServiceConfig cfg, ServiceOptions opts)
    : cfg_(std::move(cfg)), opts_(std::move(opts)), clock_(opts_.clock ? opts_.clock : &system_clock_) {
    if (auto v = cfg_.validate(); !v.empty())
        throw ConfigError(std::move(v));

    auto parent = cfg_.journal.path.parent_path();
    if (!parent.empty())
        std::filesystem::create_directories(parent);
    auto entries = registry::FileJournal::read(cfg_.journal.path);
    journal_ = std::make_unique<registry::FileJournal>(
        cfg_.journal.path, registry::FileJournal::Options{.fsync = cfg_.journal.fsync,
                                                          .compact_threshold_bytes = cfg_.journal.compact_threshold_bytes});
    auto rng = opts_.rng ? opts_.rng : registry::secure_random();
    registry_ = std::make_unique<registry::Registry>(cfg_.registry, *clock_, rng, journal_.get());
    registry_->replay(entries);
    replayed_ = entries.size();

    api_ = std::make_unique<management::ManagementApi>(*registry_, board_, *clock_,
                                                       [this] { return to_json(health()); });
    auto templates = cfg_.template_dir ? frontend::PageTemplates::load(*cfg_.template_dir)
                                       : frontend::PageTemplates::builtin();
    pages_ = std::make_unique<frontend::PageRenderer>(std::move(templates), cfg_.frontend.page_refresh);
    router_ = std::make_unique<frontend::Router>(*registry_, board_);
    dialer_ = std::make_unique<frontend::Dialer>(cfg_.registry.trusted_cidrs);
    reconciler_ = std::make_unique<Reconciler>(*registry_, *clock_);
}

Service::~Service() { stop(); }

Health Service::health() const { return compute_health(*registry_, clock_->now()); }

void Service::start() {
    if (started_)
        return;
    management_ = std::make_unique<management::ManagementServer>(ioc_, cfg_.management.bind_address,
                                                                 cfg_.management.port, *api_);
    proxy_ = std::make_unique<frontend::ProxyServer>(ioc_, cfg_.frontend, *router_, *pages_, *dialer_);
    if (cfg_.frontend.kill_on_deactivate)
        registry_->on_deactivate([proxy = proxy_.get()](const std::string& label) { proxy->abort_label(label); });

    // Mappings restored from the journal go live before the first request.
    reconciler_->tick(clock_->now());

    management_->start();
    proxy_->start();
    work_.emplace(boost::asio::make_work_guard(ioc_));
    for (int i = 0; i < cfg_.io_threads; ++i)
        threads_.emplace_back([this] { ioc_.run(); });
    if (opts_.reconcile_thread)
        reconciler_->start();
    started_ = true;
    log::emit(log::Level::info, "service_started",
              {{"frontend_port", std::to_string(frontend_port())},
               {"management_port", std::to_string(management_port())},
               {"replayed_entries", std::to_string(replayed_)},
               {"mode", cfg_.frontend.tls ? "tls" : "dev_plaintext"}});
}

void Service::stop() {
    if (!started_)
        return;
    started_ = false;
    reconciler_->stop();
    registry_->on_deactivate({});
    proxy_->stop();
    management_->stop();
    work_.reset();
    ioc_.stop();
    for (auto& t : threads_)
        t.join();
    threads_.clear();
    log::emit(log::Level::info, "service_stopped");
}

} // namespace satellite::ops
