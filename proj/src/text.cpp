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

#include "xlt/text.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "xlt/common.hpp"
#include "xlt/lexicon_data.hpp"

namespace xlt::text {

namespace {

// Word characters for hashtag bodies: ASCII alphanumerics, underscore, and any
// non-ASCII byte (UTF-8 continuation or lead, kept opaque).
bool is_word_char(char c) {
  const unsigned char u = static_cast<unsigned char>(c);
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c == '_' || u >= 0x80;
}

bool is_url_token(const std::string& tok) {
  const std::string low = strings::lower_ascii(tok);
  return strings::starts_with(low, "http://") ||
         strings::starts_with(low, "https://") ||
         strings::starts_with(low, "ftp://") ||
         strings::starts_with(low, "www.");
}

}  // namespace

Lexicon::Lexicon(const std::vector<std::pair<std::string, double>>& counts) {
  double total = 0.0;
  for (const auto& [word, count] : counts) {
    if (word.empty() || count <= 0.0) continue;
    total += count;
  }
  if (total <= 0.0) return;
  min_log10_ = std::numeric_limits<double>::infinity();
  for (const auto& [word, count] : counts) {
    if (word.empty() || count <= 0.0) continue;
    const double lg = std::log10(count / total);
    log10_[word] = lg;
    min_log10_ = std::min(min_log10_, lg);
    max_word_length_ = std::max(max_word_length_, word.size());
  }
}

Lexicon Lexicon::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open lexicon: " + path);
  std::vector<std::pair<std::string, double>> counts;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cols = strings::split(line, '\t');
    if (cols.size() != 2) {
      throw ValidationError("lexicon " + path + " line " +
                            std::to_string(lineno) + ": expected word<TAB>count");
    }
    counts.emplace_back(cols[0], std::stod(cols[1]));
  }
  return Lexicon(counts);
}

const Lexicon& Lexicon::builtin_english() {
  static const Lexicon instance = [] {
    std::vector<std::pair<std::string, double>> counts;
    counts.reserve(detail::kBuiltinEnglishSize);
    for (size_t i = 0; i < detail::kBuiltinEnglishSize; ++i) {
      counts.emplace_back(detail::kBuiltinEnglish[i].word,
                          detail::kBuiltinEnglish[i].count);
    }
    return Lexicon(counts);
  }();
  return instance;
}

bool Lexicon::contains(const std::string& word) const {
  return log10_.count(word) > 0;
}

double Lexicon::log10_score(const std::string& word) const {
  const auto it = log10_.find(word);
  if (it != log10_.end()) return it->second;
  // OOV: 10 orders of magnitude per character below the rarest known word.
  return min_log10_ - 10.0 * static_cast<double>(word.size());
}

std::vector<std::string> segment_hashtag(const std::string& tag,
                                         const Lexicon& lexicon) {
  if (tag.empty()) throw ValidationError("empty hashtag");
  const std::string low = strings::lower_ascii(tag);
  const size_t n = low.size();

  // best[i]: max total log10 score over segmentations of low[0..i). All word
  // lengths are admissible; an OOV run scores better unsplit than split, so
  // the DP matches exhaustive enumeration exactly.
  const double neg_inf = -std::numeric_limits<double>::infinity();
  std::vector<double> best(n + 1, neg_inf);
  std::vector<int> words_used(n + 1, 0);
  std::vector<size_t> back(n + 1, 0);
  best[0] = 0.0;
  for (size_t i = 1; i <= n; ++i) {
    for (size_t j = 0; j < i; ++j) {
      if (best[j] == neg_inf) continue;
      const double s = best[j] + lexicon.log10_score(low.substr(j, i - j));
      // Ties break toward fewer words.
      const bool better =
          s > best[i] || (s == best[i] && words_used[j] + 1 < words_used[i]);
      if (better) {
        best[i] = s;
        words_used[i] = words_used[j] + 1;
        back[i] = j;
      }
    }
  }

  const double unsplit = lexicon.log10_score(low);
  if (unsplit >= best[n]) return {low};

  std::vector<std::string> out;
  for (size_t i = n; i > 0; i = back[i]) {
    out.push_back(low.substr(back[i], i - back[i]));
  }
  std::reverse(out.begin(), out.end());
  return out;
}

namespace {

// One whitespace token; the tail after a hashtag body re-enters here so a
// second normalization pass is a no-op ("#a@b" -> "a @USER", not "a @b").
void normalize_token(const std::string& tok, const NormalizeConfig& config,
                     const Lexicon& lex, std::vector<std::string>& out) {
  if (config.replace_mentions && !tok.empty() && tok[0] == '@') {
    out.emplace_back(kMentionToken);
    return;
  }
  if (config.replace_urls && is_url_token(tok)) {
    out.emplace_back(kUrlToken);
    return;
  }
  if (config.segment_hashtags && tok.size() >= 2 && tok[0] == '#') {
    size_t end = 1;
    while (end < tok.size() && is_word_char(tok[end])) ++end;
    if (end > 1) {
      for (auto& w : segment_hashtag(tok.substr(1, end - 1), lex)) {
        out.push_back(std::move(w));
      }
      if (end < tok.size()) normalize_token(tok.substr(end), config, lex, out);
      return;
    }
  }
  out.push_back(tok);
}

}  // namespace

std::string normalize_tweet(const std::string& textIn,
                            const NormalizeConfig& config) {
  const Lexicon& lex =
      config.lexicon ? *config.lexicon : Lexicon::builtin_english();
  std::vector<std::string> out_tokens;
  for (const std::string& tok : strings::split_ws(textIn)) {
    normalize_token(tok, config, lex, out_tokens);
  }
  return strings::join(out_tokens, " ");
}

size_t token_count(const std::string& normalized_text) {
  return strings::split_ws(normalized_text).size();
}

}  // namespace xlt::text
