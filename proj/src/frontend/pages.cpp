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

#include "satellite/frontend/pages.hpp"

#include "satellite/common/template.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace satellite::frontend {

namespace {

constexpr const char* kPending = R"(<!DOCTYPE html>
<html lang="en">
<head>
<meta charset="utf-8">
<meta http-equiv="refresh" content="{{refresh_seconds}}">
<title>{{label}}</title>
</head>
<body class="{{status_class}}">
<h1>{{headline}}</h1>
<p>{{message}}</p>
<p>Token: <code>{{label}}</code></p>
{{job_block}}
<p>This page reloads every {{refresh_seconds}} seconds.</p>
</body>
</html>
)";

constexpr const char* kNotFound = R"(<!DOCTYPE html>
<html lang="en">
<head><meta charset="utf-8"><title>Not found</title></head>
<body>
<h1>Not found</h1>
<p>There is no application at this address.</p>
</body>
</html>
)";

constexpr const char* kBadGateway = R"(<!DOCTYPE html>
<html lang="en">
<head><meta charset="utf-8"><title>Bad gateway</title></head>
<body>
<h1>Application unreachable</h1>
<p>The application for <code>{{label}}</code> did not accept the connection.</p>
</body>
</html>
)";

constexpr const char* kGatewayTimeout = R"(<!DOCTYPE html>
<html lang="en">
<head><meta charset="utf-8"><title>Gateway timeout</title></head>
<body>
<h1>Application timed out</h1>
<p>The application for <code>{{label}}</code> did not answer in time.</p>
</body>
</html>
)";

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot read template " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string fill(std::string_view tmpl, const std::map<std::string, std::string, std::less<>>& values) {
    return render_template(tmpl,
                           [&](std::string_view name) -> std::optional<std::string> {
                               auto it = values.find(name);
                               if (it == values.end())
                                   return std::string{};
                               return it->second;
                           })
        .text;
}

std::string iso_time(Timestamp t) {
    auto tt = static_cast<std::time_t>(to_unix(t));
    std::tm tm{};
    ::gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct Wording {
    const char* status_class;
    const char* headline;
    const char* message;
};

Wording wording_for(const std::optional<management::JobStatusReport>& status) {
    using management::JobState;
    if (!status)
        return {"status-waiting", "Waiting for your application",
                "The application is not yet running. It will appear here once the batch job starts."};
    switch (status->state) {
    case JobState::Running:
        return {"status-starting", "Your job is running",
                "The batch job has started; the application is not yet running."};
    case JobState::Failed:
        return {"status-failed", "Your job failed",
                "The batch job reported a failure. The application will not start at this address."};
    case JobState::Cancelled:
        return {"status-failed", "Your job was cancelled",
                "The batch job was cancelled. The application will not start at this address."};
    case JobState::Completed:
        return {"status-failed", "Your job has ended",
                "The batch job completed before the application became reachable."};
    case JobState::Pending:
    case JobState::Unknown:
        break;
    }
    return {"status-waiting", "Waiting for your application",
            "The application is not yet running. The batch job is waiting in the queue."};
}

} // namespace

PageTemplates PageTemplates::builtin() { return PageTemplates{kPending, kNotFound, kBadGateway, kGatewayTimeout}; }

PageTemplates PageTemplates::load(const std::filesystem::path& dir) {
    auto t = builtin();
    auto override_with = [&](std::string& slot, const char* name) {
        auto p = dir / name;
        if (std::filesystem::exists(p))
            slot = read_file(p);
    };
    override_with(t.pending, "pending.html");
    override_with(t.not_found, "not_found.html");
    override_with(t.bad_gateway, "bad_gateway.html");
    override_with(t.gateway_timeout, "gateway_timeout.html");
    return t;
}

PageRenderer::PageRenderer(PageTemplates templates, Seconds refresh) : t_(std::move(templates)), refresh_(refresh) {}

std::string PageRenderer::pending(std::string_view label,
                                  const std::optional<management::JobStatusReport>& status) const {
    auto w = wording_for(status);
    std::string job_block;
    if (status) {
        job_block = "<dl class=\"job\">\n<dt>Job</dt><dd>" + html_escape(status->job_id) + "</dd>\n" +
                    "<dt>State</dt><dd>" + std::string(management::to_string(status->state)) + "</dd>\n";
        if (status->detail)
            job_block += "<dt>Detail</dt><dd>" + html_escape(*status->detail) + "</dd>\n";
        job_block += "<dt>Reported</dt><dd>" + iso_time(status->reported_at) + "</dd>\n</dl>";
    }
    return fill(t_.pending, {{"label", html_escape(label)},
                             {"refresh_seconds", std::to_string(refresh_.count())},
                             {"status_class", w.status_class},
                             {"headline", w.headline},
                             {"message", w.message},
                             {"job_block", job_block}});
}

std::string PageRenderer::not_found() const { return fill(t_.not_found, {}); }

std::string PageRenderer::bad_gateway(std::string_view label) const {
    return fill(t_.bad_gateway, {{"label", html_escape(label)}});
}

std::string PageRenderer::gateway_timeout(std::string_view label) const {
    return fill(t_.gateway_timeout, {{"label", html_escape(label)}});
}

} // namespace satellite::frontend
