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

#include <stdexcept>
#include <string>
#include <string_view>

namespace satellite::registry {

enum class Errc {
    OriginForbidden,
    Exhausted,
    NotFound,
    Conflict,
    PrivilegedPort,
    AlreadyMapped,
    BadPort,
    InvalidArgument,
};

std::string_view to_string(Errc e);

class RegistryError : public std::runtime_error {
  public:
    RegistryError(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    [[nodiscard]] Errc code() const { return code_; }

  private:
    Errc code_;
};

} // namespace satellite::registry
