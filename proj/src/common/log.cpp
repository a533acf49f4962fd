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

#include "satellite/common/log.hpp"

#include "satellite/common/digest.hpp"

#include <spdlog/sinks/stdout_sinks.h>

#include <mutex>

namespace satellite::log {

namespace {

std::mutex g_mutex;
std::shared_ptr<spdlog::logger> g_logger;

bool needs_quotes(std::string_view v) {
    if (v.empty())
        return true;
    for (char c : v)
        if (c == ' ' || c == '"' || c == '=' || c == '\n' || c == '\t')
            return true;
    return false;
}

void append_value(std::string& out, std::string_view v) {
    if (!needs_quotes(v)) {
        out.append(v);
        return;
    }
    out.push_back('"');
    for (char c : v) {
        if (c == '"' || c == '\\')
            out.push_back('\\');
        if (c == '\n') {
            out.append("\\n");
            continue;
        }
        out.push_back(c);
    }
    out.push_back('"');
}

std::shared_ptr<spdlog::logger> make_stderr_logger() {
    auto l = std::make_shared<spdlog::logger>("satellite", std::make_shared<spdlog::sinks::stderr_sink_mt>());
    l->set_pattern("ts=%Y-%m-%dT%H:%M:%S.%eZ level=%l %v", spdlog::pattern_time_type::utc);
    l->flush_on(spdlog::level::warn);
    return l;
}

} // namespace

void init(std::string_view level) {
    auto l = make_stderr_logger();
    l->set_level(spdlog::level::from_str(std::string(level)));
    set_logger(std::move(l));
}

std::shared_ptr<spdlog::logger> logger() {
    std::lock_guard lk(g_mutex);
    if (!g_logger) {
        g_logger = make_stderr_logger();
        g_logger->set_level(spdlog::level::warn);
    }
    return g_logger;
}

void set_logger(std::shared_ptr<spdlog::logger> l) {
    std::lock_guard lk(g_mutex);
    g_logger = std::move(l);
}

std::string format_fields(std::string_view event, std::initializer_list<Field> fields) {
    std::string out = "event=";
    out.append(event);
    for (const auto& [k, v] : fields) {
        out.push_back(' ');
        out.append(k);
        out.push_back('=');
        append_value(out, v);
    }
    return out;
}

void emit(Level level, std::string_view event, std::initializer_list<Field> fields) {
    auto l = logger();
    if (!l->should_log(level))
        return;
    l->log(level, "{}", format_fields(event, fields));
}

std::string token_hash(std::string_view label) { return sha256_hex(label).substr(0, 12); }

void token_event(std::string_view event, std::string_view label, std::initializer_list<Field> fields) {
    auto l = logger();
    if (l->should_log(Level::info)) {
        std::string line = format_fields(event, fields);
        line.append(" token_hash=").append(token_hash(label));
        l->info("{}", line);
    }
    if (l->should_log(Level::debug)) {
        std::string line = format_fields(event, fields);
        line.append(" token=").append(label);
        l->debug("{}", line);
    }
}

} // namespace satellite::log
