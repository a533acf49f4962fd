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

#include <string_view>

namespace satellite::management {

inline constexpr std::string_view kGetLinkPath = "/getlink.cgi";
inline constexpr std::string_view kRedeemPath = "/redeemtoken.cgi";
inline constexpr std::string_view kDestroyPath = "/destroytoken.cgi";
inline constexpr std::string_view kJobStatusPath = "/jobstatus";
inline constexpr std::string_view kRegisterJobPath = "/registerjob.cgi";
inline constexpr std::string_view kHealthPath = "/healthz";

} // namespace satellite::management
