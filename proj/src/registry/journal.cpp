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

#include "satellite/registry/journal.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <system_error>

namespace satellite::registry {

std::string encode(const JournalEntry& e) {
    nlohmann::json j = {
        {"seq", e.seq}, {"ts", e.ts}, {"op", e.op}, {"token", e.token}, {"args", e.args}, {"state", e.state},
    };
    return j.dump();
}

JournalEntry decode(std::string_view line) {
    try {
        auto j = nlohmann::json::parse(line);
        JournalEntry e;
        e.seq = j.at("seq").get<std::uint64_t>();
        e.ts = j.at("ts").get<std::int64_t>();
        e.op = j.at("op").get<std::string>();
        e.token = j.at("token").get<std::string>();
        e.args = j.at("args");
        e.state = j.at("state").get<std::string>();
        return e;
    } catch (const nlohmann::json::exception& ex) {
        throw JournalError(std::string("undecodable journal line: ") + ex.what());
    }
}

FileJournal::FileJournal(std::filesystem::path path, Options opts) : path_(std::move(path)), opts_(opts) {
    open_for_append();
}

FileJournal::~FileJournal() {
    if (fd_ >= 0)
        ::close(fd_);
}

void FileJournal::open_for_append() {
    if (fd_ >= 0)
        ::close(fd_);
    fd_ = ::open(path_.c_str(), O_RDWR | O_CREAT | O_APPEND | O_CLOEXEC, 0600);
    if (fd_ < 0)
        throw std::system_error(errno, std::generic_category(), "open journal " + path_.string());
    auto end = ::lseek(fd_, 0, SEEK_END);
    size_ = end < 0 ? 0 : static_cast<std::uintmax_t>(end);
    drop_torn_tail();
}

// Cuts a partial last line left by a crash so the next append starts on a
// fresh line.
void FileJournal::drop_torn_tail() {
    off_t keep = static_cast<off_t>(size_);
    char block[4096];
    while (keep > 0) {
        off_t start = keep >= static_cast<off_t>(sizeof block) ? keep - static_cast<off_t>(sizeof block) : 0;
        auto n = ::pread(fd_, block, static_cast<std::size_t>(keep - start), start);
        if (n <= 0)
            throw std::system_error(errno, std::generic_category(), "read journal " + path_.string());
        auto* nl = static_cast<const char*>(::memrchr(block, '\n', static_cast<std::size_t>(n)));
        if (nl) {
            keep = start + (nl - block) + 1;
            break;
        }
        keep = start;
    }
    if (static_cast<std::uintmax_t>(keep) == size_)
        return;
    if (::ftruncate(fd_, keep) != 0)
        throw std::system_error(errno, std::generic_category(), "truncate journal " + path_.string());
    size_ = static_cast<std::uintmax_t>(keep);
}

void FileJournal::write_all(int fd, std::string_view data) {
    while (!data.empty()) {
        ssize_t n = ::write(fd, data.data(), data.size());
        if (n < 0) {
            if (errno == EINTR)
                continue;
            throw std::system_error(errno, std::generic_category(), "write journal");
        }
        data.remove_prefix(static_cast<std::size_t>(n));
    }
}

std::vector<JournalEntry> FileJournal::read(const std::filesystem::path& path) {
    std::vector<JournalEntry> out;
    std::ifstream in(path, std::ios::binary);
    if (!in)
        return out;
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::size_t pos = 0;
    while (pos < content.size()) {
        auto nl = content.find('\n', pos);
        if (nl == std::string::npos)
            break; // torn tail
        std::string_view line(content.data() + pos, nl - pos);
        if (!line.empty())
            out.push_back(decode(line));
        pos = nl + 1;
    }
    return out;
}

void FileJournal::append(const JournalEntry& e) {
    std::string line = encode(e);
    line.push_back('\n');
    write_all(fd_, line);
    if (opts_.fsync)
        ::fdatasync(fd_);
    size_ += line.size();
}

bool FileJournal::wants_compaction() const {
    return opts_.compact_threshold_bytes > 0 && size_ > opts_.compact_threshold_bytes;
}

void FileJournal::compact(const std::vector<JournalEntry>& snapshot) {
    auto tmp = path_;
    tmp += ".compact";
    int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0600);
    if (fd < 0)
        throw std::system_error(errno, std::generic_category(), "open " + tmp.string());
    try {
        for (const auto& e : snapshot) {
            std::string line = encode(e);
            line.push_back('\n');
            write_all(fd, line);
        }
        ::fsync(fd);
    } catch (...) {
        ::close(fd);
        throw;
    }
    ::close(fd);
    std::filesystem::rename(tmp, path_);
    open_for_append();
}

} // namespace satellite::registry
