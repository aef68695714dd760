// Copyright 2026 The XLT Authors.
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

#include <doctest.h>

#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "xlt/common.hpp"
#include "xlt/text.hpp"

using xlt::text::Lexicon;
using xlt::text::NormalizeConfig;
using xlt::text::normalize_tweet;
using xlt::text::segment_hashtag;

namespace {

std::string joined(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) out += w;
  return out;
}

}  // namespace

TEST_CASE("segment_hashtag: single dictionary word stays whole") {
  const auto& lex = Lexicon::builtin_english();
  CHECK(segment_hashtag("hello", lex) == std::vector<std::string>{"hello"});
  CHECK(segment_hashtag("Hello", lex) == std::vector<std::string>{"hello"});
}

TEST_CASE("segment_hashtag: buildthewall splits into three words") {
  const auto& lex = Lexicon::builtin_english();
  const std::vector<std::string> want = {"build", "the", "wall"};
  CHECK(segment_hashtag("buildthewall", lex) == want);
  CHECK(segment_hashtag("BuildTheWall", lex) == want);
}

TEST_CASE("segment_hashtag: OOV gibberish falls back to identity") {
  const auto& lex = Lexicon::builtin_english();
  CHECK(segment_hashtag("xqzzv", lex) == std::vector<std::string>{"xqzzv"});
}

TEST_CASE("segment_hashtag: empty tag is an error") {
  const auto& lex = Lexicon::builtin_english();
  CHECK_THROWS_WITH_AS(segment_hashtag("", lex), "empty hashtag",
                       xlt::ValidationError);
}

TEST_CASE("segment_hashtag matches the exhaustive enumeration oracle") {
  // Controlled lexicon so oracle tags can be composed from known words.
  const std::vector<std::pair<std::string, double>> counts = {
      {"a", 500.0},   {"i", 400.0},    {"an", 120.0},  {"in", 300.0},
      {"the", 900.0}, {"there", 80.0}, {"here", 60.0}, {"cat", 40.0},
      {"cats", 20.0}, {"at", 200.0},   {"on", 150.0},  {"one", 90.0},
      {"ones", 15.0}, {"son", 25.0},   {"so", 110.0},  {"none", 10.0},
      {"no", 130.0},  {"not", 170.0},  {"note", 30.0}, {"tea", 22.0}};
  const Lexicon lex(counts);

  std::mt19937_64 gen(12345);
  std::vector<std::string> vocab;
  for (const auto& [w, _] : counts) vocab.push_back(w);

  for (int trial = 0; trial < 300; ++trial) {
    std::string tag;
    const int parts = 1 + static_cast<int>(gen() % 4);
    for (int p = 0; p < parts && tag.size() < 14; ++p) {
      if (gen() % 5 == 0) {
        // Inject an OOV chunk.
        const int len = 1 + static_cast<int>(gen() % 3);
        for (int c = 0; c < len; ++c) {
          tag += static_cast<char>('a' + gen() % 26);
        }
      } else {
        tag += vocab[gen() % vocab.size()];
      }
    }
    if (tag.empty() || tag.size() > 18) continue;

    const auto got = segment_hashtag(tag, lex);
    const auto best = xlt::oracles::best_segmentation_exhaustive(tag, lex);
    CAPTURE(tag);
    CHECK(joined(got) == tag);
    CHECK(xlt::oracles::segmentation_score(got, lex) ==
          doctest::Approx(best.score).epsilon(1e-12));
    CHECK(got.size() == best.words.size());
  }
}

TEST_CASE("normalize_tweet: placeholder substitution") {
  CHECK(normalize_tweet("@user1 go home http://t.co/xyz") ==
        "@USER go home HTTPURL");
  CHECK(normalize_tweet("see www.example.com now") == "see HTTPURL now");
  CHECK(normalize_tweet("HTTPS://EXAMPLE.COM") == "HTTPURL");
}

TEST_CASE("normalize_tweet: hashtag handling") {
  CHECK(normalize_tweet("#hello world") == "hello world");
  CHECK(normalize_tweet("stop them #buildthewall") ==
        "stop them build the wall");
}

TEST_CASE("normalize_tweet: hashtag tails are re-normalized") {
  CHECK(normalize_tweet("#hello!") == "hello !");
  CHECK(normalize_tweet("#hello#world") == "hello world");
  CHECK(normalize_tweet("#hello@you") == "hello @USER");
}

TEST_CASE("normalize_tweet: whitespace collapsing") {
  CHECK(normalize_tweet("  a\t b \n c ") == "a b c");
  CHECK(normalize_tweet("") == "");
  CHECK(normalize_tweet("   \t\n ") == "");
}

TEST_CASE("normalize_tweet: flags disable individual replacements") {
  NormalizeConfig cfg;
  cfg.replace_mentions = false;
  CHECK(normalize_tweet("@user hi", cfg) == "@user hi");
  cfg = NormalizeConfig{};
  cfg.segment_hashtags = false;
  CHECK(normalize_tweet("#buildthewall", cfg) == "#buildthewall");
}

TEST_CASE("normalize_tweet is idempotent on fuzzed tweets") {
  std::mt19937_64 gen(777);
  const std::vector<std::string> pieces = {
      "@someone",  "#hello",      "#buildthewall", "http://x.io/q",
      "www.a.com", "plain",       "word",          "#xqzzv",
      "@USER",     "HTTPURL",     "the",           "stop!",
      "#Stop",     "a,b",         "...",           "#tag123",
      "ünïcode",   "https://y.z", "#ünï",          "@a@b",
      "#a#b",      "#a@b",        "#hello!",       "#a!b#c",
      "#",         "#!",          "a#b",           "#the.www.x"};
  for (int trial = 0; trial < 500; ++trial) {
    std::string tweet;
    const int n = static_cast<int>(gen() % 8);
    for (int i = 0; i < n; ++i) {
      if (i) tweet += (gen() % 6 == 0) ? "  " : " ";
      tweet += pieces[gen() % pieces.size()];
    }
    const std::string once = normalize_tweet(tweet);
    const std::string twice = normalize_tweet(once);
    CAPTURE(tweet);
    CHECK(once == twice);
  }
}

TEST_CASE("token_count counts whitespace tokens") {
  CHECK(xlt::text::token_count("a b c") == 3);
  CHECK(xlt::text::token_count("") == 0);
  CHECK(xlt::text::token_count("one") == 1);
}

TEST_CASE("Lexicon: OOV penalty is 10 orders of magnitude per character") {
  const Lexicon lex({{"aa", 90.0}, {"b", 10.0}});
  // min log10 = log10(10/100) = -1; OOV "ccc" scores -1 - 30.
  CHECK(lex.log10_score("ccc") == doctest::Approx(-31.0).epsilon(1e-12));
  CHECK(lex.log10_score("aa") == doctest::Approx(std::log10(0.9)));
  CHECK(!lex.contains("ccc"));
  CHECK(lex.contains("aa"));
}
