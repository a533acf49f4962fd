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

#include "satellite/frontend/dialer.hpp"

#include "satellite/common/log.hpp"

namespace satellite::frontend {

Dialer::Dialer(CidrSet trusted) : trusted_(std::move(trusted)) {}

bool Dialer::permit(const Target& t) {
    bool ok = t.port >= kFirstUnprivilegedPort && t.port <= 65535 && trusted_.contains(t.ip);
    (ok ? permitted_ : refused_)++;
    if (!ok)
        log::emit(log::Level::warn, "dial_refused", {{"port", std::to_string(t.port)}});
    Observer o;
    {
        std::lock_guard lock(mu_);
        o = observer_;
    }
    if (o)
        o(t, ok);
    return ok;
}

void Dialer::set_observer(Observer o) {
    std::lock_guard lock(mu_);
    observer_ = std::move(o);
}

} // namespace satellite::frontend
