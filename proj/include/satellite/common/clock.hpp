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

#include <atomic>
#include <chrono>
#include <cstdint>

namespace satellite {

using Seconds = std::chrono::seconds;
using Timestamp = std::chrono::sys_seconds;

inline std::int64_t to_unix(Timestamp t) { return t.time_since_epoch().count(); }
inline Timestamp from_unix(std::int64_t s) { return Timestamp{Seconds{s}}; }

// Every piece of expiry logic reads time through one of these so tests can
// drive the whole service from a single simulated clock.
class Clock {
  public:
    virtual ~Clock() = default;
    [[nodiscard]] virtual Timestamp now() const = 0;
};

class SystemClock final : public Clock {
  public:
    [[nodiscard]] Timestamp now() const override {
        return std::chrono::time_point_cast<Seconds>(std::chrono::system_clock::now());
    }
};

class ManualClock final : public Clock {
  public:
    explicit ManualClock(Timestamp start = from_unix(1'600'000'000)) : now_(to_unix(start)) {}

    [[nodiscard]] Timestamp now() const override { return from_unix(now_.load()); }

    void set(Timestamp t) { now_.store(to_unix(t)); }
    void advance(Seconds d) { now_.fetch_add(d.count()); }

  private:
    std::atomic<std::int64_t> now_;
};

} // namespace satellite
