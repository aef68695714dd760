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

#ifndef XLT_DIAGNOSTICS_HPP
#define XLT_DIAGNOSTICS_HPP

#include <map>
#include <string>
#include <vector>

namespace xlt::diagnostics {

// One functional test sentence from a HateCheck-style suite.
struct FunctionalCase {
  std::string id;
  std::string text;
  std::string gold;             // "hateful" or "non-hateful"
  std::string functionality;    // fine-grained name, e.g. "slur_h"
  std::string func_class;       // aggregated class, e.g. "slur"
  std::string protected_group;  // target identity the case is aimed at
  std::string language;
};

// functionality -> aggregated class. 29 functionalities over 11 classes.
using ClassMapping = std::map<std::string, std::string>;

// The bundled mapping; mirrors data/hatecheck_classes.tsv.
ClassMapping default_class_mapping();

// Reads "functionality<TAB>class" lines; blank lines and '#' comments are
// skipped. Errors on malformed rows or duplicate functionalities.
ClassMapping load_class_mapping(const std::string& path);

// Loads a HateCheck-style CSV. Recognized header names (first match wins):
//   functionality                (required)
//   text | test_case             (required)
//   gold | label_gold            (required, values hateful/non-hateful)
//   id | case_id                 (optional; defaults to the row number)
//   group | target_ident         (optional)
//   language | lang              (optional)
// `group_by_domain` maps an evaluation domain to the protected group that
// stands in for it (e.g. immigrants -> indigenous for Spanish); only cases
// aimed at a mapped group are retained. An empty mapping retains everything.
// Unknown functionalities are an error naming the offender.
std::vector<FunctionalCase> load_hatecheck(
    const std::string& path,
    const std::map<std::string, std::string>& group_by_domain,
    const ClassMapping& mapping);

// Cases aimed at the group that `group_by_domain` assigns to `domain`.
std::vector<FunctionalCase> cases_for_domain(
    const std::vector<FunctionalCase>& cases,
    const std::map<std::string, std::string>& group_by_domain,
    const std::string& domain);

// Per-class macro-F1 for one (domain, task combo, source->target) setting.
struct FunctionalityReport {
  std::string domain;
  std::string combo;   // task combo label; "none" is the baseline
  std::string source;  // training language
  std::string target;  // language of the test cases
  std::map<std::string, double> class_f1;     // class -> macro-F1, 0-100
  std::map<std::string, size_t> class_cases;  // class -> case count

  bool mono() const { return source == target; }
};

// Scores `predicted` (aligned with `cases`) per functionality class by
// delegating to metrics::macro_f1 over that class's cases.
FunctionalityReport score_by_class(const std::vector<FunctionalCase>& cases,
                                   const std::vector<std::string>& predicted,
                                   const std::string& domain,
                                   const std::string& combo,
                                   const std::string& source,
                                   const std::string& target);

// Per class: mean over cross-lingual pairs minus mean over monolingual
// pairs, by domain, plus a mean-over-domains combined column. Rows are
// ranked by the combined difference, most negative first.
struct MonoCrossTable {
  std::vector<std::string> domains;  // column order, sorted
  std::vector<std::string> classes;  // row order, ranked
  std::map<std::string, std::map<std::string, double>> by_domain;
  std::map<std::string, double> combined;  // class -> mean over domains
};

// Uses only reports whose combo equals `baseline_combo`. Reports sharing a
// (domain, source, target) cell — e.g. seeds — are averaged first. Errors
// when any language pair is missing for a domain.
MonoCrossTable mono_vs_cross_by_class(
    const std::vector<FunctionalityReport>& reports,
    const std::string& baseline_combo);

// How the per-task effect is aggregated.
enum class AuxEffectMode {
  // Cross-setting relative difference net of the mono-setting one; the
  // reading implemented for the headline table.
  kCrossNetOfMono,
  // Cross-setting relative difference alone; kept behind this flag.
  kCrossOnly,
};

// Per class and aux task combo: relative difference in macro-F1 against the
// baseline, 100 * (aux - baseline) / baseline per language pair, aggregated
// per AuxEffectMode and averaged over domains. Cells whose baseline score is
// 0 are excluded from the averages with a warning.
struct AuxEffectTable {
  std::vector<std::string> tasks;    // column order, sorted combo labels
  std::vector<std::string> classes;  // row order, sorted
  // task -> class -> effect; NaN when every contributing cell was excluded.
  std::map<std::string, std::map<std::string, double>> effect;
  size_t excluded_cells = 0;  // zero-baseline cells dropped
};

AuxEffectTable aux_effect_by_class(
    const std::vector<FunctionalityReport>& baseline,
    const std::vector<FunctionalityReport>& aux,
    AuxEffectMode mode = AuxEffectMode::kCrossNetOfMono);

}  // namespace xlt::diagnostics

#endif  // XLT_DIAGNOSTICS_HPP
