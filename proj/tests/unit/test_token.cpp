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

#include "satellite/registry/config.hpp"
#include "satellite/registry/token.hpp"

#include "support/fixtures.hpp"

#include <doctest.h>

#include <map>
#include <unordered_set>

using namespace satellite::registry;

TEST_CASE("is_dns_label") {
    CHECK(is_dns_label("bullseye-compare-citation"));
    CHECK(is_dns_label("a"));
    CHECK(is_dns_label("abc123"));
    CHECK(is_dns_label(std::string(63, 'a')));
    CHECK_FALSE(is_dns_label(std::string(64, 'a')));
    CHECK_FALSE(is_dns_label(""));
    CHECK_FALSE(is_dns_label("-abc"));
    CHECK_FALSE(is_dns_label("abc-"));
    CHECK_FALSE(is_dns_label("a--b"));
    CHECK_FALSE(is_dns_label("Abc"));
    CHECK_FALSE(is_dns_label("a.b"));
    CHECK_FALSE(is_dns_label("a_b"));
}

TEST_CASE("builtin wordlist satisfies the wordlist invariants") {
    auto w = Wordlist::builtin();
    CHECK(w->size() >= kMinWordlistSize);
    CHECK(w->violations().empty());
}

TEST_CASE("wordlist violations are all reported") {
    Wordlist w({"alpha", "Beta", "alpha", "two words"});
    auto v = w.violations();
    CHECK(v.size() == 4); // size, duplicate, two bad entries
}

TEST_CASE("generated tokens are three wordlist words and DNS labels") {
    TokenGenerator gen(Wordlist::builtin(), seeded_random(42));
    for (int i = 0; i < 2000; ++i) {
        auto t = gen.next();
        CHECK(satellite::testing::matches_label_regex(t.label()));
        CHECK(gen.well_formed(t.label()));
    }
    CHECK_FALSE(gen.well_formed("bullseye-compare"));
    CHECK_FALSE(gen.well_formed("notaword-notaword-notaword"));
}

TEST_CASE("seeded generation is reproducible") {
    TokenGenerator a(Wordlist::builtin(), seeded_random(9));
    TokenGenerator b(Wordlist::builtin(), seeded_random(9));
    for (int i = 0; i < 50; ++i)
        CHECK(a.next() == b.next());
}

TEST_CASE("word choice covers a small wordlist roughly uniformly") {
    std::vector<std::string> words = {"aa", "bb", "cc"};
    TokenGenerator gen(std::make_shared<const Wordlist>(words), seeded_random(1));
    std::map<std::string, int> first;
    const int n = 30000;
    for (int i = 0; i < n; ++i) {
        auto label = gen.next().label();
        first[label.substr(0, 2)]++;
    }
    for (const auto& w : words) {
        CHECK(first[w] > n / 3 - 600);
        CHECK(first[w] < n / 3 + 600);
    }
}

TEST_CASE("is_dns_name") {
    CHECK(is_dns_name("comet-user-content.sdsc.edu"));
    CHECK(is_dns_name("localhost.test"));
    CHECK_FALSE(is_dns_name("localhost"));
    CHECK_FALSE(is_dns_name("bad..name"));
    CHECK_FALSE(is_dns_name("-bad.name"));
    CHECK_FALSE(is_dns_name("under_score.name"));
    CHECK_FALSE(is_dns_name(""));
}
