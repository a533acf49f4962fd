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

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace satellite {

// `{{name}}` substitution. Names are [a-z0-9_]+, optionally padded with
// spaces inside the braces.
struct TemplateResult {
    std::string text;
    // Placeholders the lookup could not resolve, in order of appearance.
    std::vector<std::string> unresolved;
};

using TemplateLookup = std::function<std::optional<std::string>(std::string_view name)>;

TemplateResult render_template(std::string_view tmpl, const TemplateLookup& lookup);

// Names of every placeholder in `tmpl`, in order, duplicates kept.
std::vector<std::string> template_placeholders(std::string_view tmpl);

std::string html_escape(std::string_view s);

} // namespace satellite
