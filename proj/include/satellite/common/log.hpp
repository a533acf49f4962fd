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

#include <spdlog/spdlog.h>

#include <initializer_list>
#include <memory>
#include <string>
#include <string_view>
#include <utility>

// Structured logging: one event per line, `event=<name>` followed by
// `key=value` fields with stable names.
namespace satellite::log {

using Level = spdlog::level::level_enum;
using Field = std::pair<std::string_view, std::string>;

// Installs the process-wide stderr logger. Accepts spdlog level names.
void init(std::string_view level);

std::shared_ptr<spdlog::logger> logger();
void set_logger(std::shared_ptr<spdlog::logger> l);

void emit(Level level, std::string_view event, std::initializer_list<Field> fields = {});

// Stable short digest of a token label. Info-level lines carry this instead
// of the label itself; the label only appears at debug level.
std::string token_hash(std::string_view label);

// Logs `event` at info with the hashed token, and the same event at debug
// with the clear label.
void token_event(std::string_view event, std::string_view label, std::initializer_list<Field> fields = {});

std::string format_fields(std::string_view event, std::initializer_list<Field> fields);

} // namespace satellite::log
