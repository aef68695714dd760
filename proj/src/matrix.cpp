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

#include "xlt/matrix.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

#include "xlt/common.hpp"

namespace xlt::eval {

namespace {

std::string full_precision(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

}  // namespace

std::string CellKey::to_string() const {
  return source + "->" + target + "/" + domain + "/" + combo;
}

CellScores CellScores::from_seeds(std::vector<double> seeds) {
  if (seeds.empty()) {
    throw ValidationError("CellScores: empty seed list");
  }
  CellScores cs;
  cs.mean = stats::mean(seeds);
  cs.per_seed = std::move(seeds);
  return cs;
}

void ScoreMatrix::add(const CellKey& key, CellScores scores) {
  if (entries_.count(key)) {
    throw ValidationError("ScoreMatrix: duplicate cell " + key.to_string());
  }
  entries_.emplace(key, std::move(scores));
}

bool ScoreMatrix::contains(const CellKey& key) const {
  return entries_.count(key) > 0;
}

const CellScores& ScoreMatrix::at(const CellKey& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) {
    throw ValidationError("ScoreMatrix: missing cell " + key.to_string());
  }
  return it->second;
}

std::set<std::string> ScoreMatrix::languages() const {
  std::set<std::string> out;
  for (const auto& [key, _] : entries_) {
    out.insert(key.source);
    out.insert(key.target);
  }
  return out;
}

std::set<std::string> ScoreMatrix::domains() const {
  std::set<std::string> out;
  for (const auto& [key, _] : entries_) out.insert(key.domain);
  return out;
}

std::set<std::string> ScoreMatrix::combos() const {
  std::set<std::string> out;
  for (const auto& [key, _] : entries_) out.insert(key.combo);
  return out;
}

void ScoreMatrix::validate() const {
  for (const auto& [key, cs] : entries_) {
    if (cs.per_seed.empty()) {
      throw ValidationError("ScoreMatrix: empty seed list at " +
                            key.to_string());
    }
    if (std::fabs(cs.mean - stats::mean(cs.per_seed)) > 1e-9) {
      throw ValidationError("ScoreMatrix: stored mean deviates at " +
                            key.to_string());
    }
  }
}

void ScoreMatrix::merge(const ScoreMatrix& other) {
  for (const auto& [key, cs] : other.entries_) add(key, cs);
}

std::string ScoreMatrix::to_tsv() const {
  std::ostringstream out;
  out << "source\ttarget\tdomain\tcombo\tmean\tper_seed\n";
  for (const auto& [key, cs] : entries_) {
    out << key.source << '\t' << key.target << '\t' << key.domain << '\t'
        << key.combo << '\t' << full_precision(cs.mean) << '\t';
    for (size_t i = 0; i < cs.per_seed.size(); ++i) {
      if (i) out << ',';
      out << full_precision(cs.per_seed[i]);
    }
    out << '\n';
  }
  return out.str();
}

ScoreMatrix ScoreMatrix::from_tsv(const std::string& content) {
  ScoreMatrix m;
  std::istringstream in(content);
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (lineno == 1 && strings::starts_with(line, "source\t")) continue;
    const auto cols = strings::split(line, '\t');
    if (cols.size() != 6) {
      throw ValidationError("ScoreMatrix TSV line " + std::to_string(lineno) +
                            ": expected 6 columns");
    }
    CellKey key{cols[0], cols[1], cols[2], cols[3]};
    CellScores cs;
    cs.mean = std::stod(cols[4]);
    for (const auto& s : strings::split(cols[5], ',')) {
      cs.per_seed.push_back(std::stod(s));
    }
    m.add(key, std::move(cs));
  }
  m.validate();
  return m;
}

void AggregateView::set(const std::string& domain, const std::string& combo,
                        MonoCross v) {
  entries_[{domain, combo}] = v;
}

const MonoCross& AggregateView::at(const std::string& domain,
                                   const std::string& combo) const {
  const auto it = entries_.find({domain, combo});
  if (it == entries_.end()) {
    throw ValidationError("AggregateView: missing (" + domain + ", " + combo +
                          ")");
  }
  return it->second;
}

namespace {

// Mean of diagonal and off-diagonal cell values for one (domain, combo)
// block; throws with the list of missing cells when incomplete.
MonoCross aggregate_block(
    const std::set<std::string>& languages, const std::string& domain,
    const std::string& combo,
    const std::function<std::optional<double>(const CellKey&)>& lookup) {
  double mono_sum = 0.0;
  double cross_sum = 0.0;
  size_t mono_n = 0;
  size_t cross_n = 0;
  std::vector<std::string> missing;
  for (const auto& src : languages) {
    for (const auto& tgt : languages) {
      const CellKey key{src, tgt, domain, combo};
      const auto v = lookup(key);
      if (!v) {
        missing.push_back(key.to_string());
        continue;
      }
      if (src == tgt) {
        mono_sum += *v;
        ++mono_n;
      } else {
        cross_sum += *v;
        ++cross_n;
      }
    }
  }
  if (!missing.empty()) {
    throw ValidationError("incomplete language block, missing cells: " +
                          strings::join(missing, ", "));
  }
  MonoCross out;
  out.mono = mono_n ? mono_sum / static_cast<double>(mono_n) : 0.0;
  out.cross = cross_n ? cross_sum / static_cast<double>(cross_n) : 0.0;
  return out;
}

}  // namespace

AggregateView aggregate_mono_cross(const ScoreMatrix& matrix) {
  const auto languages = matrix.languages();
  AggregateView view;
  for (const auto& domain : matrix.domains()) {
    for (const auto& combo : matrix.combos()) {
      // A combo may legitimately cover only some domains; skip blocks with
      // no cells at all, fail on partially filled ones.
      bool any = false;
      for (const auto& [key, _] : matrix.entries()) {
        if (key.domain == domain && key.combo == combo) {
          any = true;
          break;
        }
      }
      if (!any) continue;
      const auto mc = aggregate_block(
          languages, domain, combo,
          [&](const CellKey& key) -> std::optional<double> {
            if (!matrix.contains(key)) return std::nullopt;
            return matrix.at(key).mean;
          });
      view.set(domain, combo, mc);
    }
  }
  return view;
}

std::set<CellKey> flag_transfer_failures(const ScoreMatrix& matrix,
                                         double threshold) {
  std::set<CellKey> flagged;
  for (const auto& [key, cs] : matrix.entries()) {
    if (key.source == key.target) continue;
    const CellKey mono_key{key.source, key.source, key.domain, key.combo};
    if (!matrix.contains(mono_key)) {
      throw ValidationError("flag_transfer_failures: missing monolingual cell " +
                            mono_key.to_string());
    }
    const double mono = matrix.at(mono_key).mean;
    if (mono <= 0.0) {
      throw ValidationError(
          "flag_transfer_failures: non-positive monolingual score at " +
          mono_key.to_string());
    }
    if ((mono - cs.mean) / mono > threshold) flagged.insert(key);
  }
  return flagged;
}

DeltaTable build_delta_table(const ScoreMatrix& matrix,
                             const std::string& baseline_combo) {
  const auto combos = matrix.combos();
  if (!combos.count(baseline_combo)) {
    throw ValidationError("build_delta_table: baseline combo '" +
                          baseline_combo + "' absent from matrix");
  }

  // Index-set agreement: every combo must cover exactly the baseline's
  // (source, target, domain) triples, with equal seed counts.
  std::set<std::tuple<std::string, std::string, std::string>> base_index;
  for (const auto& [key, _] : matrix.entries()) {
    if (key.combo == baseline_combo) {
      base_index.insert({key.source, key.target, key.domain});
    }
  }
  for (const auto& combo : combos) {
    std::set<std::tuple<std::string, std::string, std::string>> index;
    for (const auto& [key, cs] : matrix.entries()) {
      if (key.combo != combo) continue;
      index.insert({key.source, key.target, key.domain});
      const CellKey base_key{key.source, key.target, key.domain,
                             baseline_combo};
      if (matrix.contains(base_key) &&
          matrix.at(base_key).per_seed.size() != cs.per_seed.size()) {
        throw ValidationError("build_delta_table: seed count mismatch at " +
                              key.to_string());
      }
    }
    if (index != base_index) {
      throw ValidationError("build_delta_table: combo '" + combo +
                            "' does not share the baseline index set");
    }
  }

  DeltaTable table;
  table.baseline_combo = baseline_combo;
  for (const auto& [key, cs] : matrix.entries()) {
    if (key.combo == baseline_combo) continue;
    const CellKey base_key{key.source, key.target, key.domain, baseline_combo};
    const CellScores& base = matrix.at(base_key);
    DeltaCell cell;
    cell.delta = cs.mean - base.mean;
    if (cs.per_seed.size() >= 2 && base.per_seed.size() >= 2) {
      // One-sided in the observed direction: is combo significantly
      // higher (or lower) than baseline?
      const auto direction = cell.delta >= 0.0
                                 ? stats::TailDirection::kAGreater
                                 : stats::TailDirection::kALess;
      cell.p_value = stats::one_sided_t_test(cs.per_seed, base.per_seed,
                                             direction);
      cell.marker = stats::significance_marker(*cell.p_value);
    }
    table.cells.emplace(key, cell);
  }

  // Aggregated rows: mono/cross means of the deltas.
  const auto languages = matrix.languages();
  for (const auto& domain : matrix.domains()) {
    for (const auto& combo : combos) {
      if (combo == baseline_combo) continue;
      bool any = false;
      for (const auto& [key, _] : table.cells) {
        if (key.domain == domain && key.combo == combo) {
          any = true;
          break;
        }
      }
      if (!any) continue;
      const auto mc = aggregate_block(
          languages, domain, combo,
          [&](const CellKey& key) -> std::optional<double> {
            const auto it = table.cells.find(key);
            if (it == table.cells.end()) return std::nullopt;
            return it->second.delta;
          });
      table.aggregate[{domain, combo}] = mc;
    }
  }
  return table;
}

std::string DeltaTable::to_tsv() const {
  std::ostringstream out;
  out << "source\ttarget\tdomain\tcombo\tdelta\tp_value\tmarker\n";
  for (const auto& [key, cell] : cells) {
    out << key.source << '\t' << key.target << '\t' << key.domain << '\t'
        << key.combo << '\t' << full_precision(cell.delta) << '\t';
    if (cell.p_value) {
      out << full_precision(*cell.p_value);
    } else {
      out << "NA";
    }
    out << '\t' << stats::marker_symbol(cell.marker) << '\n';
  }
  out << "# aggregate\tdomain\tcombo\tmono\tcross\n";
  for (const auto& [dc, mc] : aggregate) {
    out << "aggregate\t" << dc.first << '\t' << dc.second << '\t'
        << full_precision(mc.mono) << '\t' << full_precision(mc.cross) << '\n';
  }
  return out.str();
}

}  // namespace xlt::eval
