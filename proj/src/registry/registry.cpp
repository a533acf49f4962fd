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

#include "satellite/registry/registry.hpp"

#include "satellite/common/log.hpp"

#include <algorithm>

namespace satellite::registry {

namespace {

constexpr int kMinPort = 1;
constexpr int kMaxPort = 65535;
constexpr int kFirstUnprivilegedPort = 1024;
TokenState expect_state(const JournalEntry& e) {
    auto s = parse_token_state(e.state);
    if (!s)
        throw JournalError("journal entry " + std::to_string(e.seq) + " has unknown state '" + e.state + "'");
    return *s;
}

void check_transition(const JournalEntry& e, TokenState from, TokenState to) {
    if (!is_allowed_transition(from, to))
        throw JournalError("journal entry " + std::to_string(e.seq) + " (" + e.op + ") moves " + e.token + " from " +
                           std::string(to_string(from)) + " to " + std::string(to_string(to)));
}

} // namespace

Registry::Registry(RegistryConfig cfg, const Clock& clock, RandomSource rng, JournalSink* journal)
    : cfg_(std::move(cfg)), clock_(clock), generator_(cfg_.wordlist, std::move(rng)), journal_(journal) {}

void Registry::on_deactivate(std::function<void(const std::string&)> fn) {
    std::unique_lock lk(mu_);
    on_deactivate_ = std::move(fn);
}

void Registry::require_trusted(const IpAddress& ip) const {
    if (!cfg_.trusted_cidrs.contains(ip))
        throw RegistryError(Errc::OriginForbidden, "origin " + ip.to_string() + " is outside the trusted network");
}

TokenRecord& Registry::require_live(std::string_view label) {
    auto it = records_.find(label);
    if (it == records_.end() || is_terminal(it->second.state))
        throw RegistryError(Errc::NotFound, "unknown token");
    return it->second;
}

// Port and target rules that no configuration change can legitimately
// relax. Trust and TTL are config-dependent and left to the dialer and
// expiry respectively.
void Registry::check_mapping(const JournalEntry& e, const Mapping& m) const {
    if (m.target_port < kFirstUnprivilegedPort || m.target_port > kMaxPort || m.creator_ip != m.target_ip)
        throw JournalError("journal entry " + std::to_string(e.seq) + " carries a mapping outside policy");
}

void Registry::apply(const JournalEntry& e) {
    const TokenState to = expect_state(e);
    const auto& a = e.args;
    auto existing = [&]() -> TokenRecord& {
        auto it = records_.find(e.token);
        if (it == records_.end())
            throw JournalError("journal entry " + std::to_string(e.seq) + " (" + e.op + ") names unknown token " +
                               e.token);
        return it->second;
    };

    try {
        if (e.op == "issue") {
            auto token = Token::parse(e.token);
            if (!token || records_.contains(e.token) || to != TokenState::Issued)
                throw JournalError("journal entry " + std::to_string(e.seq) + " is an invalid issue");
            TokenRecord r{.token = *token};
            r.state = TokenState::Issued;
            r.issued_at = from_unix(a.at("issued_at").get<std::int64_t>());
            r.issuer_ip = IpAddress::from_string(a.at("issuer_ip").get<std::string>());
            records_.emplace(e.token, std::move(r));
        } else if (e.op == "register") {
            auto& r = existing();
            if (is_terminal(r.state) || to != r.state)
                throw JournalError("journal entry " + std::to_string(e.seq) + " registers a job on a dead token");
            r.job_id = a.at("job_id").get<std::string>();
        } else if (e.op == "redeem") {
            auto& r = existing();
            check_transition(e, r.state, to);
            if (to != TokenState::Mapped)
                throw JournalError("redeem must produce MAPPED");
            Mapping m = mapping_from_json(a);
            m.active = false;
            check_mapping(e, m);
            r.state = TokenState::Mapped;
            r.mapping = m;
        } else if (e.op == "activate") {
            auto& r = existing();
            if (r.state != TokenState::Mapped || to != TokenState::Mapped || !r.mapping)
                throw JournalError("journal entry " + std::to_string(e.seq) + " activates a non-mapped token");
            r.mapping->active = true;
            routed_.insert(e.token);
        } else if (e.op == "destroy" || e.op == "expire") {
            auto& r = existing();
            check_transition(e, r.state, to);
            if ((e.op == "destroy") != (to == TokenState::Destroyed))
                throw JournalError("journal entry " + std::to_string(e.seq) + " has the wrong terminal state");
            r.state = to;
            r.mapping.reset();
            r.ended_at = from_unix(a.at("ended_at").get<std::int64_t>());
        } else if (e.op == "purge") {
            auto& r = existing();
            if (!is_terminal(r.state))
                throw JournalError("journal entry " + std::to_string(e.seq) + " purges a live token");
            records_.erase(e.token);
        } else if (e.op == "restore") {
            TokenRecord r = record_from_json(a.at("record"));
            if (r.label() != e.token || r.state != to)
                throw JournalError("journal entry " + std::to_string(e.seq) + " restores an inconsistent record");
            if (r.mapping)
                check_mapping(e, *r.mapping);
            records_.insert_or_assign(e.token, r);
            if (r.mapping && r.mapping->active)
                routed_.insert(e.token);
        } else {
            throw JournalError("journal entry " + std::to_string(e.seq) + " has unknown op '" + e.op + "'");
        }
    } catch (const nlohmann::json::exception& ex) {
        throw JournalError("journal entry " + std::to_string(e.seq) + " has malformed args: " + ex.what());
    } catch (const std::invalid_argument& ex) {
        throw JournalError("journal entry " + std::to_string(e.seq) + ": " + ex.what());
    }
}

void Registry::commit(JournalEntry e) {
    e.seq = seq_ + 1;
    apply(e);
    seq_ = e.seq;
    if (journal_) {
        journal_->append(e);
        maybe_compact();
    }
}

void Registry::maybe_compact() {
    if (!journal_->wants_compaction())
        return;
    std::vector<JournalEntry> snap;
    snap.reserve(records_.size());
    for (const auto& [label, r] : records_) {
        JournalEntry e;
        e.seq = ++seq_;
        e.ts = to_unix(clock_.now());
        e.op = "restore";
        e.token = label;
        e.args = {{"record", to_json(r)}};
        e.state = std::string(to_string(r.state));
        snap.push_back(std::move(e));
    }
    journal_->compact(snap);
    log::emit(log::Level::info, "journal_compacted", {{"records", std::to_string(snap.size())}});
}

void Registry::replay(std::span<const JournalEntry> entries) {
    std::unique_lock lk(mu_);
    for (const auto& e : entries) {
        if (e.seq <= seq_)
            throw JournalError("journal sequence is not increasing at " + std::to_string(e.seq));
        apply(e);
        seq_ = e.seq;
    }
}

TokenRecord Registry::issue_token(const IpAddress& client, Timestamp now) {
    require_trusted(client);
    std::unique_lock lk(mu_);
    for (int attempt = 0; attempt < cfg_.issue_retry_budget; ++attempt) {
        Token t = generator_.next();
        if (records_.contains(t.label()))
            continue;
        JournalEntry e;
        e.ts = to_unix(now);
        e.op = "issue";
        e.token = t.label();
        e.args = {{"issuer_ip", client.to_string()}, {"issued_at", to_unix(now)}};
        e.state = "ISSUED";
        commit(std::move(e));
        TokenRecord out = records_.at(t.label());
        lk.unlock();
        log::token_event("token_issued", t.label(), {{"client", client.to_string()}});
        return out;
    }
    throw RegistryError(Errc::Exhausted, "no unused token label found within the retry budget");
}

TokenRecord Registry::register_job(std::string_view token, std::string_view job_id, const IpAddress& client) {
    require_trusted(client);
    if (!is_valid_job_id(job_id))
        throw RegistryError(Errc::InvalidArgument, "job id must be 1-256 printable characters");
    std::unique_lock lk(mu_);
    TokenRecord& r = require_live(token);
    if (r.job_id) {
        if (*r.job_id == job_id)
            return r;
        throw RegistryError(Errc::Conflict, "token already registered to a different job");
    }
    JournalEntry e;
    e.ts = to_unix(clock_.now());
    e.op = "register";
    e.token = r.label();
    e.args = {{"job_id", std::string(job_id)}};
    e.state = std::string(to_string(r.state));
    commit(std::move(e));
    TokenRecord out = records_.at(std::string(token));
    lk.unlock();
    log::token_event("job_registered", token, {{"job_id", std::string(job_id)}});
    return out;
}

Mapping Registry::redeem_token(std::string_view token, int port, const IpAddress& client, Timestamp now) {
    require_trusted(client);
    if (port < kMinPort || port > kMaxPort)
        throw RegistryError(Errc::BadPort, "port must be within 1-65535");
    if (port < kFirstUnprivilegedPort)
        throw RegistryError(Errc::PrivilegedPort, "privileged port refused");
    std::unique_lock lk(mu_);
    TokenRecord& r = require_live(token);
    if (r.state == TokenState::Mapped)
        throw RegistryError(Errc::AlreadyMapped, "token is already mapped");

    Mapping m;
    m.target_ip = client;
    m.target_port = port;
    m.created_at = now;
    m.expires_at = now + cfg_.mapping_ttl;
    m.creator_ip = client;

    JournalEntry e;
    e.ts = to_unix(now);
    e.op = "redeem";
    e.token = r.label();
    e.args = to_json(m);
    e.args.erase("active");
    e.state = "MAPPED";
    commit(std::move(e));
    lk.unlock();
    log::token_event("token_redeemed", token, {{"target", client.to_string() + ":" + std::to_string(port)}});
    return m;
}

void Registry::destroy_token(std::string_view token, int port, const IpAddress& client) {
    require_trusted(client);
    std::unique_lock lk(mu_);
    auto it = records_.find(token);
    if (it == records_.end() || it->second.state != TokenState::Mapped)
        throw RegistryError(Errc::NotFound, "no mapping for token");
    const Mapping& m = *it->second.mapping;
    if (client != m.creator_ip)
        throw RegistryError(Errc::OriginForbidden, "only the host that created the mapping may destroy it");
    if (port != m.target_port)
        throw RegistryError(Errc::BadPort, "port does not match the mapping");

    JournalEntry e;
    e.ts = to_unix(clock_.now());
    e.op = "destroy";
    e.token = it->first;
    e.args = {{"ended_at", e.ts}};
    e.state = "DESTROYED";
    commit(std::move(e));
    lk.unlock();
    log::token_event("token_destroyed", token);
}

std::vector<std::string> Registry::expire_locked(Timestamp now) {
    std::vector<std::string> due;
    for (const auto& [label, r] : records_) {
        if (r.state == TokenState::Mapped && r.mapping->expires_at <= now)
            due.push_back(label);
        else if (r.state == TokenState::Issued && r.issued_at + cfg_.issuance_ttl() <= now)
            due.push_back(label);
    }
    for (const auto& label : due) {
        JournalEntry e;
        e.ts = to_unix(now);
        e.op = "expire";
        e.token = label;
        e.args = {{"ended_at", to_unix(now)}};
        e.state = "EXPIRED";
        commit(std::move(e));
    }
    return due;
}

std::vector<std::string> Registry::expire(Timestamp now) {
    std::unique_lock lk(mu_);
    auto due = expire_locked(now);
    lk.unlock();
    for (const auto& label : due)
        log::token_event("token_expired", label);
    return due;
}

ReconcileSummary Registry::reconcile(Timestamp now) {
    ReconcileSummary s;
    std::function<void(const std::string&)> notify;
    {
        std::unique_lock lk(mu_);
        s.expired = expire_locked(now);

        std::vector<std::string> purge;
        std::vector<std::string> activate;
        for (const auto& [label, r] : records_) {
            if (is_terminal(r.state) && r.ended_at && *r.ended_at + cfg_.retention <= now)
                purge.push_back(label);
            else if (r.state == TokenState::Mapped && !r.mapping->active)
                activate.push_back(label);
        }
        for (const auto& label : purge) {
            JournalEntry e;
            e.ts = to_unix(now);
            e.op = "purge";
            e.token = label;
            e.state = std::string(to_string(records_.at(label).state));
            commit(std::move(e));
        }
        s.purged = purge.size();
        for (const auto& label : activate) {
            JournalEntry e;
            e.ts = to_unix(now);
            e.op = "activate";
            e.token = label;
            e.state = "MAPPED";
            commit(std::move(e));
        }
        s.activated = activate;
        s.activations = activate.size();

        for (auto it = routed_.begin(); it != routed_.end();) {
            auto rec = records_.find(*it);
            bool live = rec != records_.end() && rec->second.state == TokenState::Mapped &&
                        rec->second.mapping->active;
            if (live) {
                ++it;
                continue;
            }
            s.deactivated.push_back(*it);
            it = routed_.erase(it);
        }
        s.deactivations = s.deactivated.size();
        last_reconcile_ = now;
        notify = on_deactivate_;
    }
    for (const auto& label : s.expired)
        log::token_event("token_expired", label);
    for (const auto& label : s.activated)
        log::token_event("mapping_activated", label);
    for (const auto& label : s.deactivated) {
        log::token_event("mapping_deactivated", label);
        if (notify)
            notify(label);
    }
    return s;
}

std::optional<TokenRecord> Registry::find(std::string_view label) const {
    std::shared_lock lk(mu_);
    auto it = records_.find(label);
    if (it == records_.end())
        return std::nullopt;
    return it->second;
}

std::optional<RouteLookup> Registry::lookup(std::string_view label) const {
    std::shared_lock lk(mu_);
    auto it = records_.find(label);
    if (it == records_.end())
        return std::nullopt;
    const auto& r = it->second;
    RouteLookup out{.state = r.state, .job_id = r.job_id, .mapping = std::nullopt};
    if (r.state == TokenState::Mapped && r.mapping->active)
        out.mapping = r.mapping;
    return out;
}

std::vector<TokenRecord> Registry::snapshot() const {
    std::shared_lock lk(mu_);
    std::vector<TokenRecord> out;
    out.reserve(records_.size());
    for (const auto& [_, r] : records_)
        out.push_back(r);
    return out;
}

std::size_t Registry::active_mappings() const {
    std::shared_lock lk(mu_);
    return static_cast<std::size_t>(std::count_if(records_.begin(), records_.end(), [](const auto& kv) {
        return kv.second.state == TokenState::Mapped && kv.second.mapping->active;
    }));
}

std::size_t Registry::issued_tokens() const {
    std::shared_lock lk(mu_);
    return static_cast<std::size_t>(std::count_if(
        records_.begin(), records_.end(), [](const auto& kv) { return kv.second.state == TokenState::Issued; }));
}

std::optional<Timestamp> Registry::last_reconcile() const {
    std::shared_lock lk(mu_);
    return last_reconcile_;
}

std::uint64_t Registry::last_seq() const {
    std::shared_lock lk(mu_);
    return seq_;
}

} // namespace satellite::registry
