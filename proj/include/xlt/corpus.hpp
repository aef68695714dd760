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

#ifndef XLT_CORPUS_HPP
#define XLT_CORPUS_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace xlt::corpus {

inline constexpr std::string_view kHateful = "hateful";
inline constexpr std::string_view kNonHateful = "non-hateful";

struct LabeledExample {
  std::string id;
  std::string text;
  std::string label;
  std::string language;  // ISO 639-1
  std::string domain;    // e.g. "immigrants", "women"
};

enum class Split { kTrain = 0, kDev = 1, kTest = 2 };
inline constexpr std::array<Split, 3> kAllSplits = {Split::kTrain, Split::kDev,
                                                    Split::kTest};
const char* split_name(Split s);
Split split_from_name(const std::string& name);

struct Corpus {
  std::string name;
  std::string language;
  std::string domain;
  std::string provenance;
  std::array<std::vector<LabeledExample>, 3> splits;

  std::vector<LabeledExample>& split(Split s) {
    return splits[static_cast<size_t>(s)];
  }
  const std::vector<LabeledExample>& split(Split s) const {
    return splits[static_cast<size_t>(s)];
  }
  size_t total_size() const;

  // Throws when split ids overlap or an example disagrees on language/domain.
  void validate() const;
};

struct SplitSizes {
  size_t train = 0;
  size_t dev = 0;
  size_t test = 0;

  size_t total() const { return train + dev + test; }
  size_t of(Split s) const;
};

// Splits one CSV record into columns: double-quote quoting, "" escapes a
// quote inside a quoted field. Fields must not span lines.
std::vector<std::string> parse_csv_line(const std::string& line);

// Canonical classification file: UTF-8 TSV, header "id\ttext\tlabel".
std::vector<LabeledExample> read_canonical_tsv(const std::string& path,
                                               const std::string& language,
                                               const std::string& domain);
void write_canonical_tsv(const std::string& path,
                         const std::vector<LabeledExample>& examples);

// Reads a corpus from <dir>/{train,dev,test}.tsv.
Corpus read_corpus_dir(const std::string& dir, const std::string& name,
                       const std::string& language, const std::string& domain);
void write_corpus_dir(const std::string& dir, const Corpus& corpus);

// Converters from the shared-task column layouts to canonical rows.
// hateval: CSV  id,text,HS,TR,AG          (HS 1 = hateful)
// ami:     TSV  id,text,misogynous[,...]  (misogynous 1 = hateful)
// haspeede:TSV  id,text,label             (label 1 = hateful)
std::vector<LabeledExample> convert_hateval_csv(const std::string& path,
                                                const std::string& language,
                                                const std::string& domain);
std::vector<LabeledExample> convert_ami_tsv(const std::string& path,
                                            const std::string& language,
                                            const std::string& domain);
std::vector<LabeledExample> convert_haspeede_tsv(const std::string& path,
                                                 const std::string& language,
                                                 const std::string& domain);

// Pools every split, shuffles deterministically, re-emits exact sizes.
Corpus merge_and_resplit(const Corpus& corpus, const SplitSizes& sizes,
                         uint64_t seed);

// Fraction of examples carrying the positive label.
double hate_ratio(const std::vector<LabeledExample>& examples,
                  const std::string& positive_label);

struct SamplingConstraints {
  SplitSizes target_sizes;
  double ks_threshold = 0.05;      // accept when KS p-value >= threshold
  double label_ratio_tolerance = 0.02;
  size_t max_attempts = 1000;
  uint64_t rng_seed = 0;
  std::string positive_label = std::string(kHateful);
};

struct SplitSampleReport {
  size_t attempts = 0;
  double ks_stat = 0.0;
  double ks_pvalue = 1.0;
  double ratio_delta = 0.0;
  bool accepted = false;
};

struct SubsampleReport {
  std::array<SplitSampleReport, 3> per_split;
  size_t total_attempts() const;
  std::string to_key_value_text() const;
};

using LengthFn = std::function<size_t(const LabeledExample&)>;

// Whitespace token count of the normalized text (the default length metric).
size_t default_length(const LabeledExample& ex);

// Draws each split without replacement until the KS gate (token-length
// distribution vs. source) and the label-ratio gate both pass. Output order
// follows the source order. Throws with the best attempt's diagnostics when
// the constraints cannot be met within max_attempts.
Corpus comparable_subsample(const Corpus& corpus,
                            const SamplingConstraints& constraints,
                            const LengthFn& length_fn = default_length,
                            SubsampleReport* report = nullptr);

}  // namespace xlt::corpus

#endif  // XLT_CORPUS_HPP
