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

#ifndef XLT_TEXT_HPP
#define XLT_TEXT_HPP

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace xlt::text {

inline constexpr std::string_view kMentionToken = "@USER";
inline constexpr std::string_view kUrlToken = "HTTPURL";

// Unigram frequency table for hashtag segmentation. Scores are log10
// probabilities; out-of-vocabulary words are penalized by 10 orders of
// magnitude per character below the rarest in-vocabulary word.
class Lexicon {
 public:
  Lexicon() = default;
  explicit Lexicon(const std::vector<std::pair<std::string, double>>& counts);

  static Lexicon load(const std::string& path);  // word<TAB>count per line
  static const Lexicon& builtin_english();

  bool contains(const std::string& word) const;
  double log10_score(const std::string& word) const;
  size_t size() const { return log10_.size(); }
  size_t max_word_length() const { return max_word_length_; }

 private:
  std::unordered_map<std::string, double> log10_;
  double min_log10_ = 0.0;
  size_t max_word_length_ = 1;
};

struct NormalizeConfig {
  bool replace_mentions = true;
  bool replace_urls = true;
  bool segment_hashtags = true;
  const Lexicon* lexicon = nullptr;  // null -> builtin English
};

// Maximum-likelihood split of a lowercased tag under the unigram model.
// Returns the single lowercased word when no split scores better.
std::vector<std::string> segment_hashtag(const std::string& tag,
                                         const Lexicon& lexicon);

// Tweet normalization: mention/URL placeholders, hashtag segmentation,
// whitespace collapsing. Total and idempotent.
std::string normalize_tweet(const std::string& textIn,
                            const NormalizeConfig& config = {});

// Whitespace token count of the normalized text; the length statistic used by
// comparable subsampling.
size_t token_count(const std::string& normalized_text);

}  // namespace xlt::text

#endif  // XLT_TEXT_HPP
