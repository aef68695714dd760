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

#ifndef XLT_MATRIX_HPP
#define XLT_MATRIX_HPP

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "xlt/stats.hpp"

namespace xlt::eval {

inline constexpr std::string_view kBaselineCombo = "none";

// One evaluation cell: trained on `source`, tested on `target`.
struct CellKey {
  std::string source;
  std::string target;
  std::string domain;
  std::string combo;

  auto operator<=>(const CellKey&) const = default;
  std::string to_string() const;
};

struct CellScores {
  std::vector<double> per_seed;
  double mean = 0.0;

  static CellScores from_seeds(std::vector<double> seeds);
};

// Macro-F1 indexed by (source, target, domain, task combo), per-seed lists
// plus their means.
class ScoreMatrix {
 public:
  std::string model_id;
  std::vector<uint64_t> seeds;

  void add(const CellKey& key, CellScores scores);
  bool contains(const CellKey& key) const;
  const CellScores& at(const CellKey& key) const;
  const std::map<CellKey, CellScores>& entries() const { return entries_; }
  size_t size() const { return entries_.size(); }

  std::set<std::string> languages() const;
  std::set<std::string> domains() const;
  std::set<std::string> combos() const;

  // Stored mean must equal the arithmetic mean of the seed list (1e-9).
  void validate() const;

  // Union of entries; throws on key collision.
  void merge(const ScoreMatrix& other);

  std::string to_tsv() const;
  static ScoreMatrix from_tsv(const std::string& content);

 private:
  std::map<CellKey, CellScores> entries_;
};

struct MonoCross {
  double mono = 0.0;
  double cross = 0.0;
};

// Per (domain, combo): mono = mean of diagonal cells, cross = mean of the
// off-diagonal cells. Requires a complete language block.
class AggregateView {
 public:
  void set(const std::string& domain, const std::string& combo, MonoCross v);
  const MonoCross& at(const std::string& domain,
                      const std::string& combo) const;
  const std::map<std::pair<std::string, std::string>, MonoCross>& entries()
      const {
    return entries_;
  }

 private:
  std::map<std::pair<std::string, std::string>, MonoCross> entries_;
};

AggregateView aggregate_mono_cross(const ScoreMatrix& matrix);

// Off-diagonal cells whose relative drop vs. the source row's monolingual
// cell exceeds the threshold: (mono - cross) / mono > threshold.
std::set<CellKey> flag_transfer_failures(const ScoreMatrix& matrix,
                                         double threshold = 0.25);

struct DeltaCell {
  double delta = 0.0;                // mean(combo) - mean(baseline)
  std::optional<double> p_value;     // absent when seed lists are too short
  stats::Marker marker = stats::Marker::kNone;
};

// Per-combo deltas against the baseline combo plus mono/cross aggregation of
// the deltas (the aggregated rows of the published delta table).
struct DeltaTable {
  std::string baseline_combo;
  std::map<CellKey, DeltaCell> cells;                // combo != baseline
  std::map<std::pair<std::string, std::string>, MonoCross> aggregate;

  std::string to_tsv() const;
};

DeltaTable build_delta_table(const ScoreMatrix& matrix,
                             const std::string& baseline_combo = std::string(
                                 kBaselineCombo));

}  // namespace xlt::eval

#endif  // XLT_MATRIX_HPP
