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

#include "satellite/ops/config.hpp"

#include <json.hpp>

#include <fstream>
#include <initializer_list>
#include <limits>
#include <set>
#include <sstream>

namespace satellite::ops {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string join_lines(const std::vector<std::string>& v) {
    std::string out = "invalid configuration:";
    for (const auto& s : v)
        out += "\n  - " + s;
    return out;
}

// Reads one JSON object, recording type errors and unknown keys instead of
// stopping at the first one.
class Section {
  public:
    Section(const json& obj, std::string prefix, std::vector<std::string>& violations)
        : obj_(obj), prefix_(std::move(prefix)), v_(violations) {}

    void allow(std::initializer_list<std::string_view> keys) {
        std::set<std::string, std::less<>> known(keys.begin(), keys.end());
        for (const auto& [k, _] : obj_.items())
            if (!known.contains(k))
                v_.push_back(name(k) + " is not a recognized setting");
    }

    const json* find(std::string_view key) const {
        auto it = obj_.find(std::string(key));
        return it == obj_.end() ? nullptr : &*it;
    }

    [[nodiscard]] std::string name(std::string_view key) const { return prefix_ + std::string(key); }

    void string(std::string_view key, std::string& out) {
        if (auto* j = find(key)) {
            if (j->is_string())
                out = j->get<std::string>();
            else
                v_.push_back(name(key) + " must be a string");
        }
    }

    void path(std::string_view key, fs::path& out, const fs::path& base) {
        std::string s;
        if (!find(key))
            return;
        string(key, s);
        if (s.empty()) {
            if (find(key)->is_string())
                v_.push_back(name(key) + " must not be empty");
            return;
        }
        out = resolve(s, base);
    }

    void boolean(std::string_view key, bool& out) {
        if (auto* j = find(key)) {
            if (j->is_boolean())
                out = j->get<bool>();
            else
                v_.push_back(name(key) + " must be true or false");
        }
    }

    template <class Int>
    void integer(std::string_view key, Int& out, std::int64_t lo, std::int64_t hi) {
        if (auto* j = find(key)) {
            if (!j->is_number_integer()) {
                v_.push_back(name(key) + " must be an integer");
                return;
            }
            auto value = j->is_number_unsigned() && j->get<std::uint64_t>() > std::uint64_t(hi)
                             ? hi + 1
                             : j->get<std::int64_t>();
            if (value < lo || value > hi) {
                v_.push_back(name(key) + " must be between " + std::to_string(lo) + " and " + std::to_string(hi));
                return;
            }
            out = static_cast<Int>(value);
        }
    }

    void seconds(std::string_view key, Seconds& out) {
        if (auto* j = find(key)) {
            if (!j->is_number_integer()) {
                v_.push_back(name(key) + " must be an integer number of seconds");
                return;
            }
            std::int64_t s = 0;
            integer(key, s, 0, std::int64_t{10} * 365 * 24 * 3600);
            out = Seconds{s};
        }
    }

    template <class Fn>
    void object(std::string_view key, Fn&& fn) {
        if (auto* j = find(key)) {
            if (!j->is_object()) {
                v_.push_back(name(key) + " must be an object");
                return;
            }
            Section inner(*j, name(key) + ".", v_);
            fn(inner);
        }
    }

    static fs::path resolve(const std::string& s, const fs::path& base) {
        fs::path p(s);
        return p.is_absolute() || base.empty() ? p : base / p;
    }

    std::vector<std::string>& violations() { return v_; }

  private:
    const json& obj_;
    std::string prefix_;
    std::vector<std::string>& v_;
};

void read_registry(Section& s, registry::RegistryConfig& r, const fs::path& base) {
    s.allow({"trusted_cidrs", "satellite_domain", "mapping_ttl", "wall_clock_limit", "issuance_grace", "retention",
             "reconcile_interval", "wordlist_path", "issue_retry_budget"});
    if (auto* j = s.find("trusted_cidrs")) {
        if (!j->is_array()) {
            s.violations().push_back(s.name("trusted_cidrs") + " must be a list of CIDR blocks");
        } else {
            std::vector<Cidr> blocks;
            for (const auto& item : *j) {
                auto parsed = item.is_string() ? Cidr::parse(item.get<std::string>()) : std::nullopt;
                if (!parsed)
                    s.violations().push_back(s.name("trusted_cidrs") + " entry " + item.dump() +
                                             " is not a CIDR block");
                else
                    blocks.push_back(*parsed);
            }
            r.trusted_cidrs = CidrSet(std::move(blocks));
        }
    }
    s.string("satellite_domain", r.satellite_domain);
    s.seconds("mapping_ttl", r.mapping_ttl);
    s.seconds("wall_clock_limit", r.wall_clock_limit);
    s.seconds("issuance_grace", r.issuance_grace);
    s.seconds("retention", r.retention);
    s.seconds("reconcile_interval", r.reconcile_interval);
    s.integer("issue_retry_budget", r.issue_retry_budget, 1, 1'000'000);
    fs::path wordlist;
    s.path("wordlist_path", wordlist, base);
    if (!wordlist.empty()) {
        std::error_code ec;
        if (!fs::is_regular_file(wordlist, ec)) {
            s.violations().push_back(s.name("wordlist_path") + " '" + wordlist.string() + "' is not a readable file");
            r.wordlist.reset();
        } else {
            r.wordlist = registry::Wordlist::load(wordlist);
        }
    }
}

std::chrono::milliseconds to_ms(Seconds s) { return std::chrono::duration_cast<std::chrono::milliseconds>(s); }

void read_frontend(Section& s, frontend::FrontendConfig& f, const fs::path& base) {
    s.allow({"bind", "port", "tls", "dev_plaintext", "connect_timeout", "read_timeout", "idle_timeout",
             "max_header_bytes", "stream_chunk_bytes", "page_refresh", "kill_on_deactivate"});
    s.string("bind", f.bind_address);
    s.integer("port", f.port, 0, 65535);
    s.object("tls", [&](Section& t) {
        t.allow({"certificate", "private_key"});
        frontend::TlsFiles files;
        t.path("certificate", files.certificate, base);
        t.path("private_key", files.private_key, base);
        if (!t.find("certificate"))
            t.violations().push_back(t.name("certificate") + " is required");
        if (!t.find("private_key"))
            t.violations().push_back(t.name("private_key") + " is required");
        f.tls = files;
    });
    s.boolean("dev_plaintext", f.dev_plaintext);
    Seconds connect = Seconds{f.connect_timeout.count() / 1000};
    Seconds read = Seconds{f.read_timeout.count() / 1000};
    Seconds idle = Seconds{f.idle_timeout.count() / 1000};
    s.seconds("connect_timeout", connect);
    s.seconds("read_timeout", read);
    s.seconds("idle_timeout", idle);
    f.connect_timeout = to_ms(connect);
    f.read_timeout = to_ms(read);
    f.idle_timeout = to_ms(idle);
    s.integer("max_header_bytes", f.max_header_bytes, 0, 1 << 24);
    s.integer("stream_chunk_bytes", f.stream_chunk_bytes, 0, 1 << 26);
    s.seconds("page_refresh", f.page_refresh);
    s.boolean("kill_on_deactivate", f.kill_on_deactivate);
}

} // namespace

ConfigError::ConfigError(std::vector<std::string> violations)
    : std::runtime_error(join_lines(violations)), violations_(std::move(violations)) {}

bool is_log_level(std::string_view name) {
    for (std::string_view known : {"trace", "debug", "info", "warn", "warning", "error", "critical", "off"})
        if (name == known)
            return true;
    return false;
}

std::vector<std::string> ServiceConfig::validate() const {
    std::vector<std::string> v = registry.validate();
    for (auto& f : frontend.validate())
        v.push_back(std::move(f));
    if (!IpAddress::parse(management.bind_address))
        v.push_back("management.bind '" + management.bind_address + "' is not an IP address");
    if (journal.path.empty()) {
        v.emplace_back("journal.path must not be empty");
    } else {
        std::error_code ec;
        auto parent = journal.path.parent_path();
        if (fs::exists(journal.path, ec) && !fs::is_regular_file(journal.path, ec))
            v.push_back("journal.path '" + journal.path.string() + "' is not a regular file");
        // The service creates missing directories; an existing non-directory
        // ancestor makes that impossible.
        for (auto p = parent; !p.empty() && p != p.root_path(); p = p.parent_path()) {
            if (fs::exists(p, ec)) {
                if (!fs::is_directory(p, ec))
                    v.push_back("journal.path parent '" + p.string() + "' is not a directory");
                break;
            }
        }
    }
    if (journal.compact_threshold_bytes < 4096)
        v.emplace_back("journal.compact_threshold_bytes must be at least 4096");
    if (!is_log_level(log_level))
        v.push_back("log_level '" + log_level + "' is not one of trace, debug, info, warn, error, critical, off");
    if (template_dir) {
        std::error_code ec;
        if (!fs::is_directory(*template_dir, ec))
            v.push_back("template_dir '" + template_dir->string() + "' is not a directory");
    }
    if (io_threads < 1 || io_threads > 256)
        v.emplace_back("io_threads must be between 1 and 256");
    return v;
}

ServiceConfig parse_config(std::string_view json_text, const fs::path& base_dir) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError({std::string("not valid JSON: ") + e.what()});
    }
    if (!doc.is_object())
        throw ConfigError({"top level must be a JSON object"});

    ServiceConfig cfg;
    cfg.journal.path = base_dir / cfg.journal.path;
    std::vector<std::string> v;
    Section top(doc, "", v);
    top.allow({"registry", "frontend", "management", "journal", "log_level", "template_dir", "io_threads"});
    if (!top.find("registry"))
        v.emplace_back("registry section is required");
    top.object("registry", [&](Section& s) { read_registry(s, cfg.registry, base_dir); });
    top.object("frontend", [&](Section& s) { read_frontend(s, cfg.frontend, base_dir); });
    top.object("management", [&](Section& s) {
        s.allow({"bind", "port"});
        s.string("bind", cfg.management.bind_address);
        s.integer("port", cfg.management.port, 0, 65535);
    });
    top.object("journal", [&](Section& s) {
        s.allow({"path", "fsync", "compact_threshold_bytes"});
        s.path("path", cfg.journal.path, base_dir);
        s.boolean("fsync", cfg.journal.fsync);
        s.integer("compact_threshold_bytes", cfg.journal.compact_threshold_bytes, 0,
                  std::numeric_limits<std::int64_t>::max());
    });
    top.string("log_level", cfg.log_level);
    if (top.find("template_dir")) {
        fs::path dir;
        top.path("template_dir", dir, base_dir);
        if (!dir.empty())
            cfg.template_dir = dir;
    }
    top.integer("io_threads", cfg.io_threads, 1, 256);

    for (auto& s : cfg.validate())
        v.push_back(std::move(s));
    if (!v.empty())
        throw ConfigError(std::move(v));
    return cfg;
}

ServiceConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError({"cannot read " + path.string()});
    std::stringstream ss;
    ss << in.rdbuf();
    auto base = fs::absolute(path).parent_path();
    return parse_config(ss.str(), base);
}

} // namespace satellite::ops
