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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "xlt/common.hpp"
#include "xlt/corpus.hpp"
#include "xlt/metrics.hpp"

using namespace xlt;
using namespace xlt::diagnostics;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() / ("xlt_diag_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

// A CSV exercising every bundled functionality once, with a second row for
// some, spread over three protected groups.
std::string full_suite_csv() {
  std::string csv =
      "case_id,functionality,test_case,label_gold,target_ident,lang\n";
  size_t id = 0;
  for (const auto& [functionality, cls] : default_class_mapping()) {
    const bool hateful = functionality.ends_with("_h");
    const char* group = id % 3 == 0   ? "women"
                        : id % 3 == 1 ? "indigenous"
                                      : "black people";
    csv += std::to_string(++id) + "," + functionality + ",\"case " +
           std::to_string(id) + ", quoted\"," +
           (hateful ? "hateful" : "non-hateful") + "," + group + ",es\n";
  }
  return csv;
}

FunctionalCase make_case(const std::string& id, const std::string& gold,
                         const std::string& cls, const std::string& group) {
  FunctionalCase fc;
  fc.id = id;
  fc.text = "text " + id;
  fc.gold = gold;
  fc.functionality = cls + "_h";
  fc.func_class = cls;
  fc.protected_group = group;
  fc.language = "es";
  return fc;
}

FunctionalityReport report_for(const std::string& domain,
                               const std::string& combo,
                               const std::string& source,
                               const std::string& target,
                               const std::map<std::string, double>& class_f1) {
  FunctionalityReport r;
  r.domain = domain;
  r.combo = combo;
  r.source = source;
  r.target = target;
  r.class_f1 = class_f1;
  for (const auto& [cls, f1] : class_f1) r.class_cases[cls] = 1;
  return r;
}

const std::vector<std::string> kLangs = {"en", "es", "it"};

// Reports for every language pair in one domain, constant per-class scores
// split by mono/cross.
std::vector<FunctionalityReport> grid(
    const std::string& domain, const std::string& combo,
    const std::map<std::string, double>& mono_f1,
    const std::map<std::string, double>& cross_f1) {
  std::vector<FunctionalityReport> out;
  for (const auto& s : kLangs) {
    for (const auto& t : kLangs) {
      out.push_back(report_for(domain, combo, s, t, s == t ? mono_f1 : cross_f1));
    }
  }
  return out;
}

void append(std::vector<FunctionalityReport>& into,
            const std::vector<FunctionalityReport>& more) {
  into.insert(into.end(), more.begin(), more.end());
}

}  // namespace

TEST_CASE("the bundled mapping covers 29 functionalities and 11 classes") {
  const ClassMapping m = default_class_mapping();
  CHECK(m.size() == 29);
  std::set<std::string> classes;
  for (const auto& [functionality, cls] : m) classes.insert(cls);
  CHECK(classes == std::set<std::string>{"counter", "derog", "ident", "negate",
                                         "phrase", "profanity", "ref", "slur",
                                         "spell", "target", "threat"});
}

TEST_CASE("the mapping data file matches the built-in default") {
  // The editable TSV ships with the repo; locate it relative to this source
  // file so the test is independent of the build directory.
  const fs::path here = fs::path(__FILE__).parent_path();
  const fs::path data = here.parent_path() / "data" / "hatecheck_classes.tsv";
  REQUIRE(fs::exists(data));
  CHECK(load_class_mapping(data.string()) == default_class_mapping());
}

TEST_CASE("load_class_mapping rejects malformed and duplicate rows") {
  const fs::path dir = temp_dir("mapping");
  const std::string good = (dir / "good.tsv").string();
  write_file(good, "# comment\nslur_h\tslur\n\nslur_homonym_nh\tslur\n");
  const ClassMapping m = load_class_mapping(good);
  CHECK(m.size() == 2);
  CHECK(m.at("slur_h") == "slur");

  const std::string bad = (dir / "bad.tsv").string();
  write_file(bad, "slur_h slur\n");
  CHECK_THROWS_AS(load_class_mapping(bad), ValidationError);
  const std::string dup = (dir / "dup.tsv").string();
  write_file(dup, "slur_h\tslur\nslur_h\tslur\n");
  CHECK_THROWS_AS(load_class_mapping(dup), ValidationError);
  const std::string empty = (dir / "empty.tsv").string();
  write_file(empty, "# nothing\n");
  CHECK_THROWS_AS(load_class_mapping(empty), ValidationError);
}

TEST_CASE("every functionality in a full suite maps without residue") {
  const fs::path dir = temp_dir("full");
  const std::string path = (dir / "suite.csv").string();
  write_file(path, full_suite_csv());
  const auto cases = load_hatecheck(path, {}, default_class_mapping());
  REQUIRE(cases.size() == 29);
  std::set<std::string> classes;
  std::set<std::string> functionalities;
  for (const auto& fc : cases) {
    classes.insert(fc.func_class);
    functionalities.insert(fc.functionality);
    CHECK(default_class_mapping().at(fc.functionality) == fc.func_class);
  }
  CHECK(functionalities.size() == 29);
  CHECK(classes.size() == 11);
  // Quoted commas survive the CSV parser.
  CHECK(cases.front().text.find(", quoted") != std::string::npos);
}

TEST_CASE("group mapping retains only the proxied protected group") {
  const fs::path dir = temp_dir("groups");
  const std::string path = (dir / "suite.csv").string();
  write_file(path, full_suite_csv());
  // Spanish immigrants are proxied by the indigenous-people cases.
  const auto cases =
      load_hatecheck(path, {{"immigrants", "indigenous"}},
                     default_class_mapping());
  CHECK(!cases.empty());
  for (const auto& fc : cases) {
    CHECK(fc.protected_group == "indigenous");
  }

  const auto both = load_hatecheck(
      path, {{"immigrants", "indigenous"}, {"women", "women"}},
      default_class_mapping());
  std::set<std::string> groups;
  for (const auto& fc : both) groups.insert(fc.protected_group);
  CHECK(groups == std::set<std::string>{"indigenous", "women"});

  const auto women = cases_for_domain(both, {{"immigrants", "indigenous"},
                                             {"women", "women"}},
                                      "women");
  CHECK(!women.empty());
  for (const auto& fc : women) CHECK(fc.protected_group == "women");
  CHECK_THROWS_AS(cases_for_domain(both, {{"women", "women"}}, "immigrants"),
                  ValidationError);
}

TEST_CASE("unknown functionality errors and names the offender") {
  const fs::path dir = temp_dir("unknown");
  const std::string path = (dir / "suite.csv").string();
  write_file(path,
             "functionality,text,gold\nxyz,some text,hateful\n");
  try {
    load_hatecheck(path, {}, default_class_mapping());
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("'xyz'") != std::string::npos);
  }
}

TEST_CASE("loader validates gold labels and required columns") {
  const fs::path dir = temp_dir("loadcheck");
  const std::string bad_gold = (dir / "gold.csv").string();
  write_file(bad_gold, "functionality,text,gold\nslur_h,text,maybe\n");
  CHECK_THROWS_AS(load_hatecheck(bad_gold, {}, default_class_mapping()),
                  ValidationError);
  const std::string no_func = (dir / "nofunc.csv").string();
  write_file(no_func, "text,gold\nsome text,hateful\n");
  CHECK_THROWS_AS(load_hatecheck(no_func, {}, default_class_mapping()),
                  ValidationError);
  const std::string empty = (dir / "empty.csv").string();
  write_file(empty, "");
  CHECK_THROWS_AS(load_hatecheck(empty, {}, default_class_mapping()),
                  ValidationError);
}

TEST_CASE("class scores equal macro-F1 restricted to the class's cases") {
  std::vector<FunctionalCase> cases;
  std::vector<std::string> predicted;
  const std::string h = std::string(corpus::kHateful);
  const std::string n = std::string(corpus::kNonHateful);
  // slur: 3 cases, one error; threat: 2 cases, perfect.
  cases.push_back(make_case("1", h, "slur", "women"));
  predicted.push_back(h);
  cases.push_back(make_case("2", h, "slur", "women"));
  predicted.push_back(n);
  cases.push_back(make_case("3", n, "slur", "women"));
  predicted.push_back(n);
  cases.push_back(make_case("4", h, "threat", "women"));
  predicted.push_back(h);
  cases.push_back(make_case("5", n, "threat", "women"));
  predicted.push_back(n);

  const FunctionalityReport r =
      score_by_class(cases, predicted, "women", "none", "en", "es");
  CHECK(r.domain == "women");
  CHECK_FALSE(r.mono());
  REQUIRE(r.class_f1.size() == 2);
  const std::vector<std::string> labels = {h, n};
  CHECK(r.class_f1.at("slur") ==
        doctest::Approx(metrics::macro_f1({h, h, n}, {h, n, n}, labels)));
  CHECK(r.class_f1.at("threat") == doctest::Approx(100.0));
  // Every case lands in exactly one class.
  size_t total = 0;
  for (const auto& [cls, count] : r.class_cases) total += count;
  CHECK(total == cases.size());

  CHECK_THROWS_AS(score_by_class(cases, {h}, "women", "none", "en", "es"),
                  ValidationError);
  CHECK_THROWS_AS(score_by_class({}, {}, "women", "none", "en", "es"),
                  ValidationError);
}

TEST_CASE("mono-vs-cross reproduces the published slur losses") {
  // Constructed inputs: immigrants mono mean 80 / cross mean 65.28, women
  // mono mean 80 / cross mean 62.78, with per-pair spread around each mean.
  std::vector<FunctionalityReport> reports;
  auto spread_grid = [&](const std::string& domain, double mono_mean,
                         double cross_mean) {
    size_t mono_i = 0;
    size_t cross_i = 0;
    const double mono_off[] = {-2.0, 0.0, 2.0};
    const double cross_off[] = {-5.0, -3.0, -1.0, 1.0, 3.0, 5.0};
    for (const auto& s : kLangs) {
      for (const auto& t : kLangs) {
        const double f1 = s == t ? mono_mean + mono_off[mono_i++]
                                 : cross_mean + cross_off[cross_i++];
        reports.push_back(report_for(domain, "none", s, t,
                                     {{"slur", f1}, {"phrase", f1 + 20.0}}));
      }
    }
  };
  spread_grid("immigrants", 80.0, 80.0 - 14.72);
  spread_grid("women", 80.0, 80.0 - 17.22);

  const MonoCrossTable table = mono_vs_cross_by_class(reports, "none");
  REQUIRE(table.domains == std::vector<std::string>{"immigrants", "women"});
  CHECK(table.by_domain.at("immigrants").at("slur") ==
        doctest::Approx(-14.72).epsilon(1e-9));
  CHECK(table.by_domain.at("women").at("slur") ==
        doctest::Approx(-17.22).epsilon(1e-9));
  CHECK(table.combined.at("slur") == doctest::Approx(-15.97).epsilon(1e-9));
  // The +20 shift cancels in the difference: phrase matches slur.
  CHECK(table.combined.at("phrase") ==
        doctest::Approx(table.combined.at("slur")));
  // Ranked rows: most negative combined difference first.
  CHECK(table.classes.front() == "phrase");  // tie broken lexicographically
}

TEST_CASE("equal scores everywhere give a zero difference for every class") {
  std::vector<FunctionalityReport> reports =
      grid("immigrants", "none", {{"slur", 70.0}, {"negate", 55.0}},
           {{"slur", 70.0}, {"negate", 55.0}});
  const MonoCrossTable table = mono_vs_cross_by_class(reports, "none");
  for (const auto& cls : table.classes) {
    CHECK(table.combined.at(cls) == doctest::Approx(0.0));
  }
}

TEST_CASE("hand-built two-class grid yields -10 per class") {
  std::vector<FunctionalityReport> reports =
      grid("immigrants", "none", {{"slur", 80.0}, {"negate", 80.0}},
           {{"slur", 70.0}, {"negate", 70.0}});
  append(reports, grid("women", "none", {{"slur", 80.0}, {"negate", 80.0}},
                       {{"slur", 70.0}, {"negate", 70.0}}));
  const MonoCrossTable table = mono_vs_cross_by_class(reports, "none");
  REQUIRE(table.classes.size() == 2);
  for (const auto& cls : table.classes) {
    CHECK(table.by_domain.at("immigrants").at(cls) == doctest::Approx(-10.0));
    CHECK(table.by_domain.at("women").at(cls) == doctest::Approx(-10.0));
    CHECK(table.combined.at(cls) == doctest::Approx(-10.0));
  }
}

TEST_CASE("mono-vs-cross is antisymmetric under swapping the roles") {
  const std::map<std::string, double> a = {{"slur", 82.0}, {"threat", 64.0}};
  const std::map<std::string, double> b = {{"slur", 71.0}, {"threat", 69.0}};
  const MonoCrossTable fwd =
      mono_vs_cross_by_class(grid("immigrants", "none", a, b), "none");
  const MonoCrossTable swapped =
      mono_vs_cross_by_class(grid("immigrants", "none", b, a), "none");
  for (const auto& cls : fwd.classes) {
    CHECK(fwd.combined.at(cls) ==
          doctest::Approx(-swapped.combined.at(cls)));
  }
}

TEST_CASE("seed duplicates average before differencing") {
  std::vector<FunctionalityReport> reports =
      grid("immigrants", "none", {{"slur", 80.0}}, {{"slur", 70.0}});
  // A second seed shifts every pair by +-4 symmetrically; the means are
  // unchanged.
  append(reports,
         grid("immigrants", "none", {{"slur", 80.0 + 4.0}},
              {{"slur", 70.0 + 4.0}}));
  append(reports,
         grid("immigrants", "none", {{"slur", 80.0 - 4.0}},
              {{"slur", 70.0 - 4.0}}));
  const MonoCrossTable table = mono_vs_cross_by_class(reports, "none");
  CHECK(table.combined.at("slur") == doctest::Approx(-10.0));
}

TEST_CASE("a missing language pair is an error") {
  std::vector<FunctionalityReport> reports =
      grid("immigrants", "none", {{"slur", 80.0}}, {{"slur", 70.0}});
  reports.pop_back();  // drop it->it
  CHECK_THROWS_AS(mono_vs_cross_by_class(reports, "none"), ValidationError);

  // A single-language "grid" has no cross pairs.
  std::vector<FunctionalityReport> lonely = {
      report_for("immigrants", "none", "en", "en", {{"slur", 80.0}})};
  CHECK_THROWS_AS(mono_vs_cross_by_class(lonely, "none"), ValidationError);

  // No reports under the requested combo at all.
  CHECK_THROWS_AS(mono_vs_cross_by_class(reports, "ud"), ValidationError);
}

TEST_CASE("aux identical to baseline gives zero effect everywhere") {
  const std::map<std::string, double> scores = {{"slur", 64.0},
                                                {"threat", 52.0}};
  std::vector<FunctionalityReport> base = grid("immigrants", "none", scores,
                                               scores);
  append(base, grid("women", "none", scores, scores));
  std::vector<FunctionalityReport> aux = grid("immigrants", "ud", scores,
                                              scores);
  append(aux, grid("women", "ud", scores, scores));
  const AuxEffectTable table = aux_effect_by_class(base, aux);
  REQUIRE(table.tasks == std::vector<std::string>{"ud"});
  for (const auto& cls : table.classes) {
    CHECK(table.effect.at("ud").at(cls) == doctest::Approx(0.0));
  }
  CHECK(table.excluded_cells == 0);
}

TEST_CASE("uniform +10% cross improvement with flat mono gives +10") {
  std::vector<FunctionalityReport> base =
      grid("immigrants", "none", {{"slur", 50.0}}, {{"slur", 50.0}});
  std::vector<FunctionalityReport> aux =
      grid("immigrants", "sentiment", {{"slur", 50.0}}, {{"slur", 55.0}});
  const AuxEffectTable table = aux_effect_by_class(base, aux);
  CHECK(table.effect.at("sentiment").at("slur") == doctest::Approx(10.0));

  const AuxEffectTable cross_only =
      aux_effect_by_class(base, aux, AuxEffectMode::kCrossOnly);
  CHECK(cross_only.effect.at("sentiment").at("slur") == doctest::Approx(10.0));
}

TEST_CASE("aux effect reproduces the published threat/UD value") {
  // Domain A: mono effect +10%, cross effect +36.81% -> net +26.81.
  // Domain B: mono flat, cross +26.81% -> net +26.81. Mean: +26.81.
  std::vector<FunctionalityReport> base =
      grid("immigrants", "none", {{"threat", 50.0}}, {{"threat", 50.0}});
  append(base, grid("women", "none", {{"threat", 50.0}}, {{"threat", 50.0}}));
  std::vector<FunctionalityReport> aux =
      grid("immigrants", "ud", {{"threat", 55.0}}, {{"threat", 68.405}});
  append(aux, grid("women", "ud", {{"threat", 50.0}}, {{"threat", 63.405}}));
  const AuxEffectTable table = aux_effect_by_class(base, aux);
  CHECK(table.effect.at("ud").at("threat") ==
        doctest::Approx(26.81).epsilon(1e-9));
  // Cross-only reading differs once the mono effect is nonzero.
  const AuxEffectTable cross_only =
      aux_effect_by_class(base, aux, AuxEffectMode::kCrossOnly);
  CHECK(cross_only.effect.at("ud").at("threat") ==
        doctest::Approx((36.81 + 26.81) / 2.0).epsilon(1e-9));
}

TEST_CASE("zero-baseline cells are excluded with a warning") {
  std::vector<FunctionalityReport> base =
      grid("immigrants", "none", {{"slur", 50.0}}, {{"slur", 50.0}});
  // Zero out one cross-pair baseline cell: en->es.
  for (auto& r : base) {
    if (r.source == "en" && r.target == "es") r.class_f1.at("slur") = 0.0;
  }
  std::vector<FunctionalityReport> aux =
      grid("immigrants", "ud", {{"slur", 50.0}}, {{"slur", 60.0}});
  const AuxEffectTable table = aux_effect_by_class(base, aux);
  CHECK(table.excluded_cells == 1);
  // The remaining five cross pairs still average to +20%.
  CHECK(table.effect.at("ud").at("slur") == doctest::Approx(20.0));

  // All-zero baseline leaves the cell undefined (NaN), not fabricated.
  std::vector<FunctionalityReport> zero_base =
      grid("immigrants", "none", {{"slur", 0.0}}, {{"slur", 0.0}});
  const AuxEffectTable undef = aux_effect_by_class(zero_base, aux);
  CHECK(std::isnan(undef.effect.at("ud").at("slur")));
  CHECK(undef.excluded_cells == 9);
}

TEST_CASE("aux effect validates its inputs") {
  std::vector<FunctionalityReport> base =
      grid("immigrants", "none", {{"slur", 50.0}}, {{"slur", 50.0}});
  std::vector<FunctionalityReport> aux =
      grid("immigrants", "ud", {{"slur", 55.0}}, {{"slur", 55.0}});
  CHECK_THROWS_AS(aux_effect_by_class({}, aux), ValidationError);
  CHECK_THROWS_AS(aux_effect_by_class(base, {}), ValidationError);
  // Aux reports may not reuse the baseline combo label.
  std::vector<FunctionalityReport> clash =
      grid("immigrants", "none", {{"slur", 55.0}}, {{"slur", 55.0}});
  CHECK_THROWS_AS(aux_effect_by_class(base, clash), ValidationError);
  // Aux pair without a baseline counterpart.
  std::vector<FunctionalityReport> extra = aux;
  extra.push_back(report_for("women", "ud", "en", "es", {{"slur", 55.0}}));
  CHECK_THROWS_AS(aux_effect_by_class(base, extra), ValidationError);
  // Aux combo lacking a baseline class.
  std::vector<FunctionalityReport> base2 =
      grid("immigrants", "none", {{"slur", 50.0}, {"threat", 50.0}},
           {{"slur", 50.0}, {"threat", 50.0}});
  CHECK_THROWS_AS(aux_effect_by_class(base2, aux), ValidationError);
}
