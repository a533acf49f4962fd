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

#include "satellite/registry/token.hpp"

#include <sys/random.h>

#include <cerrno>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace satellite::registry {

extern const char* const builtin_wordlist_text;

namespace {

bool is_word(std::string_view w) {
    if (w.empty())
        return false;
    for (char c : w)
        if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')))
            return false;
    return true;
}

std::vector<std::string> split_lines(std::istream& in) {
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
            line.pop_back();
        if (!line.empty())
            out.push_back(line);
    }
    return out;
}

} // namespace

bool is_dns_label(std::string_view s) {
    if (s.empty() || s.size() > kMaxLabelLength)
        return false;
    if (s.front() == '-' || s.back() == '-')
        return false;
    char prev = 0;
    for (char c : s) {
        bool alnum = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
        if (!alnum && c != '-')
            return false;
        if (c == '-' && prev == '-')
            return false;
        prev = c;
    }
    return true;
}

std::optional<Token> Token::parse(std::string_view label) {
    if (!is_dns_label(label))
        return std::nullopt;
    return Token(std::string(label));
}

Wordlist::Wordlist(std::vector<std::string> words) : words_(std::move(words)) {
    index_.reserve(words_.size());
    for (const auto& w : words_)
        index_.insert(w);
}

std::shared_ptr<const Wordlist> Wordlist::builtin() {
    static const std::shared_ptr<const Wordlist> list = [] {
        std::istringstream in(builtin_wordlist_text);
        return std::make_shared<const Wordlist>(split_lines(in));
    }();
    return list;
}

std::shared_ptr<const Wordlist> Wordlist::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot read wordlist " + path.string());
    return std::make_shared<const Wordlist>(split_lines(in));
}

std::vector<std::string> Wordlist::violations() const {
    std::vector<std::string> out;
    if (words_.size() < kMinWordlistSize)
        out.push_back("wordlist has " + std::to_string(words_.size()) + " entries, need at least " +
                      std::to_string(kMinWordlistSize));
    if (index_.size() != words_.size())
        out.push_back("wordlist contains duplicate entries");
    for (const auto& w : words_)
        if (!is_word(w))
            out.push_back("wordlist entry '" + w + "' is not lowercase alphanumeric");
    return out;
}

RandomSource secure_random() {
    return [] {
        std::uint64_t v = 0;
        auto* p = reinterpret_cast<unsigned char*>(&v);
        std::size_t got = 0;
        while (got < sizeof(v)) {
            ssize_t n = ::getrandom(p + got, sizeof(v) - got, 0);
            if (n < 0) {
                if (errno == EINTR)
                    continue;
                throw std::system_error(errno, std::generic_category(), "getrandom");
            }
            got += static_cast<std::size_t>(n);
        }
        return v;
    };
}

RandomSource seeded_random(std::uint64_t seed) {
    auto engine = std::make_shared<std::mt19937_64>(seed);
    return [engine] { return (*engine)(); };
}

TokenGenerator::TokenGenerator(std::shared_ptr<const Wordlist> words, RandomSource rng)
    : words_(std::move(words)), rng_(std::move(rng)) {
    if (!words_ || words_->size() == 0)
        throw std::invalid_argument("token generator needs a non-empty wordlist");
}

// Rejection sampling keeps the choice exactly uniform and independent of the
// standard library's distribution implementation.
std::size_t TokenGenerator::uniform_index(std::size_t bound) {
    const auto n = static_cast<std::uint64_t>(bound);
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    for (;;) {
        std::uint64_t v = rng_();
        if (v < limit)
            return static_cast<std::size_t>(v % n);
    }
}

Token TokenGenerator::next() {
    std::string label;
    for (std::size_t i = 0; i < kWordsPerToken; ++i) {
        if (i)
            label.push_back('-');
        label += words_->word(uniform_index(words_->size()));
    }
    auto t = Token::parse(label);
    if (!t)
        throw std::logic_error("wordlist produced a non-DNS label: " + label);
    return *t;
}

bool TokenGenerator::well_formed(std::string_view label) const {
    if (!is_dns_label(label))
        return false;
    std::size_t words = 0;
    std::size_t start = 0;
    for (;;) {
        auto dash = label.find('-', start);
        auto w = label.substr(start, dash == std::string_view::npos ? std::string_view::npos : dash - start);
        if (!words_->contains(w))
            return false;
        ++words;
        if (dash == std::string_view::npos)
            break;
        start = dash + 1;
    }
    return words == kWordsPerToken;
}

} // namespace satellite::registry
