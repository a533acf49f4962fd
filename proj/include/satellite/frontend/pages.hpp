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
#include "satellite/management/job_status.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace satellite::frontend {

// HTML page templates. Placeholders are `{{name}}`; values are escaped
// before substitution except `job_block`, which is generated markup.
//
//   pending.html          label, refresh_seconds, status_class, headline,
//                         message, job_block
//   not_found.html        (none)
//   bad_gateway.html      label
//   gateway_timeout.html  label
struct PageTemplates {
    std::string pending;
    std::string not_found;
    std::string bad_gateway;
    std::string gateway_timeout;

    static PageTemplates builtin();
    // Built-ins overridden by whichever of the files above exist in `dir`.
    static PageTemplates load(const std::filesystem::path& dir);
};

class PageRenderer {
  public:
    explicit PageRenderer(PageTemplates templates = PageTemplates::builtin(), Seconds refresh = Seconds{15});

    [[nodiscard]] std::string pending(std::string_view label,
                                      const std::optional<management::JobStatusReport>& status) const;
    // Same body for every host so it says nothing about past tokens.
    [[nodiscard]] std::string not_found() const;
    [[nodiscard]] std::string bad_gateway(std::string_view label) const;
    [[nodiscard]] std::string gateway_timeout(std::string_view label) const;

  private:
    PageTemplates t_;
    Seconds refresh_;
};

} // namespace satellite::frontend
