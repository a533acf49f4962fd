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

#include "satellite/common/template.hpp"

namespace satellite {

namespace {

bool is_name_char(char c) { return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_'; }

// If a placeholder starts at `pos`, returns its name and sets `end` one past
// the closing braces.
std::optional<std::string_view> placeholder_at(std::string_view s, std::size_t pos, std::size_t& end) {
    if (s.compare(pos, 2, "{{") != 0)
        return std::nullopt;
    auto close = s.find("}}", pos + 2);
    if (close == std::string_view::npos)
        return std::nullopt;
    auto inner = s.substr(pos + 2, close - pos - 2);
    while (!inner.empty() && inner.front() == ' ')
        inner.remove_prefix(1);
    while (!inner.empty() && inner.back() == ' ')
        inner.remove_suffix(1);
    if (inner.empty())
        return std::nullopt;
    for (char c : inner)
        if (!is_name_char(c))
            return std::nullopt;
    end = close + 2;
    return inner;
}

} // namespace

TemplateResult render_template(std::string_view tmpl, const TemplateLookup& lookup) {
    TemplateResult out;
    out.text.reserve(tmpl.size());
    std::size_t i = 0;
    while (i < tmpl.size()) {
        std::size_t end = 0;
        if (auto name = placeholder_at(tmpl, i, end)) {
            if (auto value = lookup(*name)) {
                out.text += *value;
            } else {
                out.unresolved.emplace_back(*name);
                out.text.append(tmpl.substr(i, end - i));
            }
            i = end;
        } else {
            out.text.push_back(tmpl[i++]);
        }
    }
    return out;
}

std::vector<std::string> template_placeholders(std::string_view tmpl) {
    std::vector<std::string> names;
    std::size_t i = 0;
    while (i < tmpl.size()) {
        std::size_t end = 0;
        if (auto name = placeholder_at(tmpl, i, end)) {
            names.emplace_back(*name);
            i = end;
        } else {
            ++i;
        }
    }
    return names;
}

std::string html_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
        case '&':
            out += "&amp;";
            break;
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '"':
            out += "&quot;";
            break;
        case '\'':
            out += "&#39;";
            break;
        default:
            out.push_back(c);
        }
    }
    return out;
}

} // namespace satellite
