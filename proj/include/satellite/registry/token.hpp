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

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace satellite::registry {

inline constexpr std::size_t kMaxLabelLength = 63;
inline constexpr std::size_t kWordsPerToken = 3;
inline constexpr std::size_t kMinWordlistSize = 2048;

// `^[a-z0-9]+(-[a-z0-9]+)*$`, at most 63 characters.
bool is_dns_label(std::string_view s);

// The leftmost label of a user's URL, and the capability to redeem it.
class Token {
  public:
    // Syntactic check only; wordlist membership is TokenGenerator's concern.
    static std::optional<Token> parse(std::string_view label);

    [[nodiscard]] const std::string& label() const { return label_; }

    friend bool operator==(const Token&, const Token&) = default;
    friend auto operator<=>(const Token&, const Token&) = default;

  private:
    explicit Token(std::string label) : label_(std::move(label)) {}
    std::string label_;
};

class Wordlist {
  public:
    explicit Wordlist(std::vector<std::string> words);

    // The shipped 2048-word list.
    static std::shared_ptr<const Wordlist> builtin();
    // One word per line; blank lines ignored.
    static std::shared_ptr<const Wordlist> load(const std::filesystem::path& path);

    [[nodiscard]] std::size_t size() const { return words_.size(); }
    [[nodiscard]] const std::string& word(std::size_t i) const { return words_[i]; }
    [[nodiscard]] bool contains(std::string_view w) const { return index_.contains(std::string(w)); }

    // Entries that are not `^[a-z0-9]+$`, duplicates, and a size shortfall.
    [[nodiscard]] std::vector<std::string> violations() const;

  private:
    std::vector<std::string> words_;
    std::unordered_set<std::string> index_;
};

// Uniform 64-bit words.
using RandomSource = std::function<std::uint64_t()>;

RandomSource secure_random();
RandomSource seeded_random(std::uint64_t seed);

class TokenGenerator {
  public:
    TokenGenerator(std::shared_ptr<const Wordlist> words, RandomSource rng);

    Token next();

    // Three hyphen-joined words, each in the wordlist.
    [[nodiscard]] bool well_formed(std::string_view label) const;

  private:
    std::size_t uniform_index(std::size_t bound);

    std::shared_ptr<const Wordlist> words_;
    RandomSource rng_;
};

} // namespace satellite::registry
