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

#include "satellite/common/ip.hpp"
#include "satellite/frontend/route.hpp"

#include <atomic>
#include <cstdint>
#include <functional>
#include <mutex>

namespace satellite::frontend {

inline constexpr int kFirstUnprivilegedPort = 1024;

// Last check before any upstream connection is opened: the target must be
// on the trusted network and on an unprivileged port, whatever the registry
// says.
class Dialer {
  public:
    using Observer = std::function<void(const Target&, bool permitted)>;

    explicit Dialer(CidrSet trusted);

    bool permit(const Target& t);

    [[nodiscard]] std::uint64_t permitted() const { return permitted_.load(); }
    [[nodiscard]] std::uint64_t refused() const { return refused_.load(); }

    void set_observer(Observer o);

  private:
    CidrSet trusted_;
    std::atomic<std::uint64_t> permitted_{0};
    std::atomic<std::uint64_t> refused_{0};
    std::mutex mu_;
    Observer observer_;
};

} // namespace satellite::frontend
