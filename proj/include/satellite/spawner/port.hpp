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

#include <chrono>
#include <cstdint>
#include <string>

namespace satellite::spawner {

// A port in [low, high] that was bindable on `address` when probed. Probing
// starts at a random offset so concurrent jobs on one node spread out.
// Throws SpawnError(Usage) if low < 1024 or the range is empty, and
// SpawnError(NoPort) when every port is taken.
std::uint16_t pick_free_port(int low, int high, const std::string& address = "0.0.0.0");

// Polls until something accepts connections on host:port.
bool wait_for_port(const std::string& host, std::uint16_t port, std::chrono::milliseconds timeout);

} // namespace satellite::spawner
