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
#include "satellite/common/ip.hpp"
#include "satellite/registry/config.hpp"
#include "satellite/registry/errors.hpp"
#include "satellite/registry/journal.hpp"
#include "satellite/registry/records.hpp"
#include "satellite/registry/token.hpp"

#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace satellite::registry {

// What the data plane needs to know about one label.
struct RouteLookup {
    TokenState state;
    std::optional<std::string> job_id;
    // Set only for an active mapping.
    std::optional<Mapping> mapping;
};

// Authoritative token/mapping state machine.
//
// Every mutation is applied as a journal entry under one writer lock, so the
// live path and startup replay run the same code. Readers take a shared lock
// and see a mapping either fully active or not at all.
class Registry {
  public:
    Registry(RegistryConfig cfg, const Clock& clock, RandomSource rng = secure_random(),
             JournalSink* journal = nullptr);

    // Rebuilds state from a journal read at startup. Entries are not
    // re-journaled. Throws JournalError on any transition outside the
    // lifecycle edges.
    void replay(std::span<const JournalEntry> entries);

    TokenRecord issue_token(const IpAddress& client, Timestamp now);
    TokenRecord register_job(std::string_view token, std::string_view job_id, const IpAddress& client);
    Mapping redeem_token(std::string_view token, int port, const IpAddress& client, Timestamp now);
    void destroy_token(std::string_view token, int port, const IpAddress& client);

    // Moves due MAPPED and stale ISSUED records to EXPIRED; returns their labels.
    std::vector<std::string> expire(Timestamp now);

    // expire(now), purge terminal records past retention, activate pending
    // mappings, then drop routes whose record is no longer MAPPED.
    ReconcileSummary reconcile(Timestamp now);

    [[nodiscard]] std::optional<TokenRecord> find(std::string_view label) const;
    [[nodiscard]] std::optional<RouteLookup> lookup(std::string_view label) const;
    // Records ordered by label.
    [[nodiscard]] std::vector<TokenRecord> snapshot() const;
    [[nodiscard]] std::size_t active_mappings() const;
    [[nodiscard]] std::size_t issued_tokens() const;
    [[nodiscard]] std::optional<Timestamp> last_reconcile() const;
    [[nodiscard]] const RegistryConfig& config() const { return cfg_; }
    [[nodiscard]] const Clock& clock() const { return clock_; }
    [[nodiscard]] std::uint64_t last_seq() const;

    // Called, outside the lock, for each label reconcile removes from the
    // routing table.
    void on_deactivate(std::function<void(const std::string&)> fn);

  private:
    using Lock = std::unique_lock<std::shared_mutex>;

    void require_trusted(const IpAddress& ip) const;
    TokenRecord& require_live(std::string_view label);
    // Applies `e` to in-memory state; throws JournalError if illegal.
    void apply(const JournalEntry& e);
    void check_mapping(const JournalEntry& e, const Mapping& m) const;
    // apply() then journal, assigning seq/ts.
    void commit(JournalEntry e);
    void maybe_compact();
    std::vector<std::string> expire_locked(Timestamp now);

    RegistryConfig cfg_;
    const Clock& clock_;
    TokenGenerator generator_;
    JournalSink* journal_;

    mutable std::shared_mutex mu_;
    std::map<std::string, TokenRecord, std::less<>> records_;
    std::set<std::string, std::less<>> routed_;
    std::uint64_t seq_ = 0;
    std::optional<Timestamp> last_reconcile_;
    std::function<void(const std::string&)> on_deactivate_;
};

} // namespace satellite::registry
