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

#include "xlt/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>
#include <tuple>

#include "xlt/common.hpp"
#include "xlt/corpus.hpp"
#include "xlt/metrics.hpp"

namespace xlt::diagnostics {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double mean(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

}  // namespace

ClassMapping default_class_mapping() {
  // Mirrors data/hatecheck_classes.tsv.
  static const std::pair<const char*, const char*> kRows[] = {
      {"derog_neg_emote_h", "derog"},   {"derog_neg_attrib_h", "derog"},
      {"derog_dehum_h", "derog"},       {"derog_impl_h", "derog"},
      {"threat_dir_h", "threat"},       {"threat_norm_h", "threat"},
      {"slur_h", "slur"},               {"slur_homonym_nh", "slur"},
      {"slur_reclaimed_nh", "slur"},    {"profanity_h", "profanity"},
      {"profanity_nh", "profanity"},    {"ref_subs_clause_h", "ref"},
      {"ref_subs_sent_h", "ref"},       {"negate_pos_h", "negate"},
      {"negate_neg_nh", "negate"},      {"phrase_question_h", "phrase"},
      {"phrase_opinion_h", "phrase"},   {"ident_neutral_nh", "ident"},
      {"ident_pos_nh", "ident"},        {"counter_quote_nh", "counter"},
      {"counter_ref_nh", "counter"},    {"target_obj_nh", "target"},
      {"target_indiv_nh", "target"},    {"target_group_nh", "target"},
      {"spell_char_swap_h", "spell"},   {"spell_char_del_h", "spell"},
      {"spell_space_del_h", "spell"},   {"spell_space_add_h", "spell"},
      {"spell_leet_h", "spell"},
  };
  ClassMapping m;
  for (const auto& [functionality, cls] : kRows) m[functionality] = cls;
  return m;
}

ClassMapping load_class_mapping(const std::string& path) {
  ClassMapping m;
  std::istringstream in(read_file(path));
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string trimmed = strings::trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    const auto cols = strings::split(line, '\t');
    if (cols.size() != 2 || strings::trim(cols[0]).empty() ||
        strings::trim(cols[1]).empty()) {
      throw ValidationError(path + ":" + std::to_string(line_no) +
                            ": expected 'functionality<TAB>class'");
    }
    const std::string key = strings::trim(cols[0]);
    if (m.count(key) != 0) {
      throw ValidationError(path + ":" + std::to_string(line_no) +
                            ": duplicate functionality '" + key + "'");
    }
    m[key] = strings::trim(cols[1]);
  }
  if (m.empty()) {
    throw ValidationError(path + ": empty functionality mapping");
  }
  return m;
}

namespace {

// Index of the first matching header name, or npos.
size_t find_column(const std::vector<std::string>& header,
                   const std::vector<std::string>& names) {
  for (const std::string& name : names) {
    for (size_t i = 0; i < header.size(); ++i) {
      if (strings::lower_ascii(strings::trim(header[i])) == name) return i;
    }
  }
  return std::string::npos;
}

size_t require_column(const std::vector<std::string>& header,
                      const std::vector<std::string>& names,
                      const std::string& path) {
  const size_t i = find_column(header, names);
  if (i == std::string::npos) {
    throw ValidationError(path + ": missing required column '" + names[0] +
                          "'");
  }
  return i;
}

}  // namespace

std::vector<FunctionalCase> load_hatecheck(
    const std::string& path,
    const std::map<std::string, std::string>& group_by_domain,
    const ClassMapping& mapping) {
  std::istringstream in(read_file(path));
  std::string line;
  if (!std::getline(in, line)) {
    throw ValidationError(path + ": empty file");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = corpus::parse_csv_line(line);
  const size_t c_func = require_column(header, {"functionality"}, path);
  const size_t c_text = require_column(header, {"text", "test_case"}, path);
  const size_t c_gold = require_column(header, {"gold", "label_gold"}, path);
  const size_t c_id = find_column(header, {"id", "case_id"});
  const size_t c_group = find_column(header, {"group", "target_ident"});
  const size_t c_lang = find_column(header, {"language", "lang"});

  std::set<std::string> kept_groups;
  for (const auto& [domain, group] : group_by_domain) kept_groups.insert(group);

  std::vector<FunctionalCase> cases;
  size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (strings::trim(line).empty()) continue;
    const auto cols = corpus::parse_csv_line(line);
    auto col = [&](size_t i) {
      return i < cols.size() ? strings::trim(cols[i]) : std::string();
    };
    FunctionalCase fc;
    fc.functionality = col(c_func);
    fc.text = col(c_text);
    fc.gold = col(c_gold);
    fc.id = c_id == std::string::npos ? std::to_string(row) : col(c_id);
    fc.protected_group =
        c_group == std::string::npos ? std::string() : col(c_group);
    fc.language = c_lang == std::string::npos ? std::string() : col(c_lang);
    const auto it = mapping.find(fc.functionality);
    if (it == mapping.end()) {
      throw ValidationError(path + ": unknown functionality '" +
                            fc.functionality + "' at row " +
                            std::to_string(row));
    }
    fc.func_class = it->second;
    if (fc.gold != corpus::kHateful && fc.gold != corpus::kNonHateful) {
      throw ValidationError(path + ": gold label '" + fc.gold + "' at row " +
                            std::to_string(row) +
                            " is not hateful/non-hateful");
    }
    if (!kept_groups.empty() && kept_groups.count(fc.protected_group) == 0) {
      continue;
    }
    cases.push_back(std::move(fc));
  }
  return cases;
}

std::vector<FunctionalCase> cases_for_domain(
    const std::vector<FunctionalCase>& cases,
    const std::map<std::string, std::string>& group_by_domain,
    const std::string& domain) {
  const auto it = group_by_domain.find(domain);
  if (it == group_by_domain.end()) {
    throw ValidationError("diagnostics: no protected group mapped for domain '" +
                          domain + "'");
  }
  std::vector<FunctionalCase> kept;
  for (const auto& fc : cases) {
    if (fc.protected_group == it->second) kept.push_back(fc);
  }
  return kept;
}

FunctionalityReport score_by_class(const std::vector<FunctionalCase>& cases,
                                   const std::vector<std::string>& predicted,
                                   const std::string& domain,
                                   const std::string& combo,
                                   const std::string& source,
                                   const std::string& target) {
  if (cases.size() != predicted.size()) {
    throw ValidationError(
        "diagnostics: " + std::to_string(predicted.size()) +
        " predictions for " + std::to_string(cases.size()) + " cases");
  }
  if (cases.empty()) {
    throw ValidationError("diagnostics: no functional cases to score");
  }
  std::map<std::string, std::vector<std::string>> gold_by_class;
  std::map<std::string, std::vector<std::string>> pred_by_class;
  for (size_t i = 0; i < cases.size(); ++i) {
    gold_by_class[cases[i].func_class].push_back(cases[i].gold);
    pred_by_class[cases[i].func_class].push_back(predicted[i]);
  }
  FunctionalityReport report;
  report.domain = domain;
  report.combo = combo;
  report.source = source;
  report.target = target;
  const std::vector<std::string> label_space = {
      std::string(corpus::kHateful), std::string(corpus::kNonHateful)};
  for (const auto& [cls, gold] : gold_by_class) {
    report.class_f1[cls] =
        metrics::macro_f1(gold, pred_by_class.at(cls), label_space);
    report.class_cases[cls] = gold.size();
  }
  return report;
}

namespace {

// (domain, source, target) -> class -> scores; duplicates (seeds) collected
// for averaging.
using CellKey = std::tuple<std::string, std::string, std::string>;
using CellIndex = std::map<CellKey, std::map<std::string, std::vector<double>>>;

CellIndex index_reports(const std::vector<FunctionalityReport>& reports,
                        const std::string& combo) {
  CellIndex index;
  for (const auto& r : reports) {
    if (r.combo != combo) continue;
    auto& cell = index[{r.domain, r.source, r.target}];
    for (const auto& [cls, f1] : r.class_f1) cell[cls].push_back(f1);
  }
  return index;
}

std::set<std::string> languages_of(const CellIndex& index,
                                   const std::string& domain) {
  std::set<std::string> langs;
  for (const auto& [key, cell] : index) {
    if (std::get<0>(key) != domain) continue;
    langs.insert(std::get<1>(key));
    langs.insert(std::get<2>(key));
  }
  return langs;
}

// Verifies the full source x target grid exists for the domain.
void require_all_pairs(const CellIndex& index, const std::string& domain,
                       const std::set<std::string>& langs) {
  if (langs.size() < 2) {
    throw ValidationError("diagnostics: domain '" + domain +
                          "' needs at least two languages for a "
                          "mono-vs-cross comparison");
  }
  for (const auto& s : langs) {
    for (const auto& t : langs) {
      if (index.count({domain, s, t}) == 0) {
        throw ValidationError("diagnostics: missing language pair " + s +
                              "->" + t + " for domain '" + domain + "'");
      }
    }
  }
}

// The identical class key set across every indexed cell.
std::set<std::string> aligned_classes(const CellIndex& index,
                                      const std::string& combo) {
  std::set<std::string> classes;
  bool first = true;
  for (const auto& [key, cell] : index) {
    std::set<std::string> here;
    for (const auto& [cls, scores] : cell) here.insert(cls);
    if (first) {
      classes = here;
      first = false;
    } else if (here != classes) {
      throw ValidationError(
          "diagnostics: class sets differ across reports for combo '" + combo +
          "'");
    }
  }
  if (classes.empty()) {
    throw ValidationError("diagnostics: no reports for combo '" + combo + "'");
  }
  return classes;
}

double cell_score(const CellIndex& index, const CellKey& key,
                  const std::string& cls) {
  return mean(index.at(key).at(cls));
}

}  // namespace

MonoCrossTable mono_vs_cross_by_class(
    const std::vector<FunctionalityReport>& reports,
    const std::string& baseline_combo) {
  const CellIndex index = index_reports(reports, baseline_combo);
  const std::set<std::string> classes = aligned_classes(index, baseline_combo);

  std::set<std::string> domains;
  for (const auto& [key, cell] : index) domains.insert(std::get<0>(key));

  MonoCrossTable table;
  table.domains.assign(domains.begin(), domains.end());
  for (const auto& domain : table.domains) {
    const std::set<std::string> langs = languages_of(index, domain);
    require_all_pairs(index, domain, langs);
    for (const auto& cls : classes) {
      std::vector<double> mono;
      std::vector<double> cross;
      for (const auto& s : langs) {
        for (const auto& t : langs) {
          const double f1 = cell_score(index, {domain, s, t}, cls);
          (s == t ? mono : cross).push_back(f1);
        }
      }
      table.by_domain[domain][cls] = mean(cross) - mean(mono);
    }
  }
  for (const auto& cls : classes) {
    std::vector<double> per_domain;
    for (const auto& domain : table.domains) {
      per_domain.push_back(table.by_domain.at(domain).at(cls));
    }
    table.combined[cls] = mean(per_domain);
  }
  // Rank rows by combined difference, biggest transfer loss first.
  table.classes.assign(classes.begin(), classes.end());
  std::sort(table.classes.begin(), table.classes.end(),
            [&](const std::string& a, const std::string& b) {
              const double da = table.combined.at(a);
              const double db = table.combined.at(b);
              if (da != db) return da < db;
              return a < b;
            });
  return table;
}

AuxEffectTable aux_effect_by_class(
    const std::vector<FunctionalityReport>& baseline,
    const std::vector<FunctionalityReport>& aux, AuxEffectMode mode) {
  if (baseline.empty()) {
    throw ValidationError("diagnostics: no baseline reports");
  }
  const std::string baseline_combo = baseline.front().combo;
  const CellIndex base_index = index_reports(baseline, baseline_combo);
  const std::set<std::string> classes =
      aligned_classes(base_index, baseline_combo);

  std::set<std::string> combos;
  for (const auto& r : aux) {
    if (r.combo == baseline_combo) {
      throw ValidationError("diagnostics: aux reports include the baseline "
                            "combo '" +
                            baseline_combo + "'");
    }
    combos.insert(r.combo);
  }
  if (combos.empty()) {
    throw ValidationError("diagnostics: no aux reports");
  }

  AuxEffectTable table;
  table.tasks.assign(combos.begin(), combos.end());
  table.classes.assign(classes.begin(), classes.end());
  for (const auto& combo : table.tasks) {
    const CellIndex aux_index = index_reports(aux, combo);
    aligned_classes(aux_index, combo);  // uniform class sets within the combo
    std::set<std::string> domains;
    for (const auto& [key, cell] : aux_index) domains.insert(std::get<0>(key));
    for (const auto& cls : classes) {
      std::vector<double> per_domain;
      for (const auto& domain : domains) {
        std::vector<double> mono_rel;
        std::vector<double> cross_rel;
        for (const auto& [key, cell] : aux_index) {
          if (std::get<0>(key) != domain) continue;
          if (cell.count(cls) == 0) {
            throw ValidationError("diagnostics: combo '" + combo +
                                  "' lacks class '" + cls + "'");
          }
          if (base_index.count(key) == 0) {
            throw ValidationError("diagnostics: no baseline cell for domain '" +
                                  domain + "', pair " + std::get<1>(key) +
                                  "->" + std::get<2>(key));
          }
          const double base = cell_score(base_index, key, cls);
          const double score = mean(cell.at(cls));
          if (base == 0.0) {
            std::cerr << "diagnostics: baseline macro-F1 is 0 for class '"
                      << cls << "', pair " << std::get<1>(key) << "->"
                      << std::get<2>(key) << ", domain '" << domain
                      << "'; cell excluded\n";
            ++table.excluded_cells;
            continue;
          }
          const double rel = 100.0 * (score - base) / base;
          (std::get<1>(key) == std::get<2>(key) ? mono_rel : cross_rel)
              .push_back(rel);
        }
        if (cross_rel.empty()) continue;  // nothing usable in this domain
        if (mode == AuxEffectMode::kCrossOnly) {
          per_domain.push_back(mean(cross_rel));
        } else {
          if (mono_rel.empty()) continue;
          per_domain.push_back(mean(cross_rel) - mean(mono_rel));
        }
      }
      table.effect[combo][cls] = per_domain.empty() ? kNaN : mean(per_domain);
    }
  }
  return table;
}

}  // namespace xlt::diagnostics
