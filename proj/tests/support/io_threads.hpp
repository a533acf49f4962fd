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

#include <boost/asio/executor_work_guard.hpp>
#include <boost/asio/io_context.hpp>

#include <thread>
#include <vector>

namespace satellite::testing {

// Runs an io_context on a few background threads for the lifetime of the
// object.
class IoThreads {
  public:
    explicit IoThreads(int n = 4) : guard_(boost::asio::make_work_guard(ioc)) {
        for (int i = 0; i < n; ++i)
            threads_.emplace_back([this] { ioc.run(); });
    }
    ~IoThreads() {
        guard_.reset();
        ioc.stop();
        for (auto& t : threads_)
            t.join();
    }
    IoThreads(const IoThreads&) = delete;
    IoThreads& operator=(const IoThreads&) = delete;

    boost::asio::io_context ioc;

  private:
    boost::asio::executor_work_guard<boost::asio::io_context::executor_type> guard_;
    std::vector<std::thread> threads_;
};

} // namespace satellite::testing
