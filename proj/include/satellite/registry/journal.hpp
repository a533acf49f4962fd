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

#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace satellite::registry {

// One state transition. Encoded as a single JSON object per line:
//   {"seq":12,"ts":1600000123,"op":"redeem","token":"...","args":{...},"state":"MAPPED"}
struct JournalEntry {
    std::uint64_t seq = 0;
    std::int64_t ts = 0;
    std::string op;
    std::string token;
    nlohmann::json args = nlohmann::json::object();
    std::string state;

    friend bool operator==(const JournalEntry&, const JournalEntry&) = default;
};

class JournalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

std::string encode(const JournalEntry& e);
JournalEntry decode(std::string_view line);

class JournalSink {
  public:
    virtual ~JournalSink() = default;
    virtual void append(const JournalEntry& e) = 0;
    [[nodiscard]] virtual bool wants_compaction() const { return false; }
    // Atomically replaces the log with `snapshot`.
    virtual void compact(const std::vector<JournalEntry>& snapshot) { (void)snapshot; }
};

class MemoryJournal final : public JournalSink {
  public:
    void append(const JournalEntry& e) override { entries_.push_back(e); }
    [[nodiscard]] const std::vector<JournalEntry>& entries() const { return entries_; }

  private:
    std::vector<JournalEntry> entries_;
};

// Append-only log file. A torn final line (no trailing newline, e.g. after a
// crash mid-write) is ignored on load; any other undecodable line is an error.
class FileJournal final : public JournalSink {
  public:
    struct Options {
        bool fsync = true;
        std::uintmax_t compact_threshold_bytes = 4u << 20;
    };

    FileJournal(std::filesystem::path path, Options opts);
    ~FileJournal() override;
    FileJournal(const FileJournal&) = delete;
    FileJournal& operator=(const FileJournal&) = delete;

    static std::vector<JournalEntry> read(const std::filesystem::path& path);

    void append(const JournalEntry& e) override;
    [[nodiscard]] bool wants_compaction() const override;
    void compact(const std::vector<JournalEntry>& snapshot) override;

    [[nodiscard]] std::uintmax_t size_bytes() const { return size_; }
    [[nodiscard]] const std::filesystem::path& path() const { return path_; }

  private:
    void open_for_append();
    void drop_torn_tail();
    void write_all(int fd, std::string_view data);

    std::filesystem::path path_;
    Options opts_;
    int fd_ = -1;
    std::uintmax_t size_ = 0;
};

} // namespace satellite::registry
