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

#include "xlt/exp_runner.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <regex>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "xlt/common.hpp"
#include "xlt/corpus.hpp"

using namespace xlt;
using namespace xlt::runner;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() / ("xlt_runner_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

SyntheticSpec tiny_spec() {
  SyntheticSpec spec;
  spec.train_size = 24;
  spec.dev_size = 8;
  spec.test_size = 8;
  spec.tagging_size = 16;
  spec.fillers_per_language = 6;
  spec.triggers_per_language = 2;
  spec.sentence_length = 3;
  return spec;
}

// Generated data plus a manifest tuned for fast unit-test runs.
ExperimentManifest tiny_experiment(const fs::path& dir) {
  generate_synthetic(tiny_spec(), 7, dir.string());
  ExperimentManifest m = load_manifest((dir / "manifest.txt").string());
  m.train.epochs = 2;
  m.seeds = {1};
  return m;
}

std::string manifest_text() {
  return R"(# comment line
language = aa
language = bb
domain = synthetic

combo = none
combo = sentiment+ner
seed = 11
seed = 12
output_dir = out
parallelism = 2
encoder.variant = toy
encoder.layers = 1
encoder.hidden = 16
encoder.attention_heads = 2
encoder.vocab_size = 128
encoder.max_len = 16
encoder.pooling = mean
sampler.alpha = 0.7
sampler.batch_size = 4
train.epochs = 3
train.learning_rate = 0.01
train.warmup_fraction = 0.2
train.aux_epochs = 1
data.hate.synthetic.aa = aa/hate
data.hate.synthetic.bb = bb/hate
data.sentiment.aa = senti/aa
data.sentiment.bb = senti/bb
data.ner.aa = aa/trigger.bio
data.ner.bb = bb/trigger.bio
)";
}

// Every regular file under `root`, keyed by its relative path.
std::map<std::string, std::string> snapshot_tree(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    files[fs::relative(entry.path(), root).string()] =
        read_file(entry.path().string());
  }
  return files;
}

std::multiset<std::string> extract_numbers(const std::string& text) {
  static const std::regex kNumber("[-+]?[0-9]+\\.[0-9]");
  std::multiset<std::string> out;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), kNumber);
       it != std::sregex_iterator(); ++it) {
    out.insert(it->str());
  }
  return out;
}

}  // namespace

TEST_CASE("combo labels expand to their task atoms") {
  CHECK(combo_tasks("none").empty());
  CHECK(combo_tasks("sentiment") == std::vector<std::string>{"sentiment"});
  CHECK(combo_tasks("sentiment+ner") ==
        std::vector<std::string>{"sentiment", "ner"});
  CHECK(combo_tasks("upos-only") == std::vector<std::string>{"upos-only"});
  CHECK_THROWS_AS(combo_tasks("sentiment+xyz"), ValidationError);
  CHECK_THROWS_AS(combo_tasks("ner+ner"), ValidationError);
  CHECK_THROWS_AS(combo_tasks(""), ValidationError);
}

TEST_CASE("manifest parsing fills every field and resolves paths") {
  unsetenv(kDataRootEnv);
  const ExperimentManifest m = parse_manifest(manifest_text(), "/base");
  CHECK(m.languages == std::vector<std::string>{"aa", "bb"});
  CHECK(m.domains == std::vector<std::string>{"synthetic"});
  CHECK(m.combos == std::vector<std::string>{"none", "sentiment+ner"});
  CHECK(m.seeds == std::vector<uint64_t>{11, 12});
  CHECK(m.output_dir == "/base/out");
  CHECK(m.parallelism == 2);
  CHECK(m.encoder.is_toy());
  CHECK(m.encoder.layers == 1);
  CHECK(m.encoder.hidden == 16);
  CHECK(m.encoder.pooling == model::Pooling::kMean);
  CHECK(m.sampler.alpha == doctest::Approx(0.7));
  CHECK(m.sampler.batch_size == 4);
  CHECK(m.train.epochs == 3);
  CHECK(m.train.learning_rate == doctest::Approx(0.01));
  CHECK(m.train.selection_task == "hate");
  CHECK(m.aux_epochs == 1);
  CHECK(m.hate_paths.at("synthetic").at("aa") == "/base/aa/hate");
  CHECK(m.aux_paths.at("sentiment").at("bb") == "/base/senti/bb");
  CHECK(m.aux_paths.at("ner").at("aa") == "/base/aa/trigger.bio");
}

TEST_CASE("data root environment variable overrides the base directory") {
  setenv(kDataRootEnv, "/data_root", 1);
  const ExperimentManifest m = parse_manifest(manifest_text(), "/base");
  unsetenv(kDataRootEnv);
  CHECK(m.hate_paths.at("synthetic").at("aa") == "/data_root/aa/hate");
  // The output directory is not data; it stays manifest-relative.
  CHECK(m.output_dir == "/base/out");
}

TEST_CASE("output_dir and parallelism do not affect the manifest hash") {
  unsetenv(kDataRootEnv);
  const ExperimentManifest a = parse_manifest(manifest_text(), "/base");
  std::string other = manifest_text();
  other = std::regex_replace(other, std::regex("output_dir = out"),
                             "output_dir = elsewhere");
  other = std::regex_replace(other, std::regex("parallelism = 2"),
                             "parallelism = 7");
  const ExperimentManifest b = parse_manifest(other, "/base");
  CHECK(a.hash() == b.hash());
  // Changing a data path does change it.
  std::string moved = std::regex_replace(
      manifest_text(), std::regex("data.ner.aa = aa/trigger.bio"),
      "data.ner.aa = aa/other.bio");
  CHECK(parse_manifest(moved, "/base").hash() != a.hash());
}

TEST_CASE("manifest syntax errors carry line context") {
  CHECK_THROWS_AS(parse_manifest("language aa\n", "."), ValidationError);
  CHECK_THROWS_AS(parse_manifest("unknown_key = 1\n", "."), ValidationError);
  CHECK_THROWS_AS(parse_manifest("seed = twelve\n", "."), ValidationError);
  CHECK_THROWS_AS(parse_manifest("sampler.alpha = high\n", "."),
                  ValidationError);
  CHECK_THROWS_AS(parse_manifest("data.hate.aa = x\n", "."), ValidationError);
  CHECK_THROWS_AS(parse_manifest("data.upos-only.aa = x\n", "."),
                  ValidationError);
  CHECK_THROWS_AS(parse_manifest("encoder.pooling = middle\n", "."),
                  ValidationError);
}

TEST_CASE("manifest validation requires the baseline combo and data paths") {
  const fs::path dir = temp_dir("validate");
  ExperimentManifest m = tiny_experiment(dir);
  CHECK_NOTHROW(m.validate());

  ExperimentManifest no_baseline = m;
  no_baseline.combos = {"ner"};
  CHECK_THROWS_WITH_AS(no_baseline.validate(),
                       doctest::Contains("baseline combo 'none'"),
                       ValidationError);

  ExperimentManifest dup = m;
  dup.languages.push_back("aa");
  CHECK_THROWS_AS(dup.validate(), ValidationError);

  ExperimentManifest no_seed = m;
  no_seed.seeds.clear();
  CHECK_THROWS_AS(no_seed.validate(), ValidationError);

  // A combo whose data key was never declared.
  ExperimentManifest no_data = m;
  no_data.combos.push_back("sentiment");
  CHECK_THROWS_WITH_AS(no_data.validate(),
                       doctest::Contains("data.sentiment"), ValidationError);

  // A declared path that does not exist on disk.
  ExperimentManifest gone = m;
  gone.aux_paths["ner"]["aa"] = (dir / "missing.bio").string();
  CHECK_THROWS_WITH_AS(gone.validate(), doctest::Contains("does not exist"),
                       ValidationError);
}

TEST_CASE("synthetic generation is byte-identical per seed") {
  const fs::path a = temp_dir("synth_a");
  const fs::path b = temp_dir("synth_b");
  const fs::path c = temp_dir("synth_c");
  generate_synthetic(tiny_spec(), 7, a.string());
  generate_synthetic(tiny_spec(), 7, b.string());
  generate_synthetic(tiny_spec(), 8, c.string());
  const auto ta = snapshot_tree(a);
  CHECK(ta == snapshot_tree(b));
  CHECK(ta != snapshot_tree(c));
  // Expected layout per language plus the ready-to-run manifest.
  CHECK(ta.count("manifest.txt") == 1);
  for (const std::string lang : {"aa", "bb"}) {
    CHECK(ta.count(lang + "/hate/train.tsv") == 1);
    CHECK(ta.count(lang + "/hate/dev.tsv") == 1);
    CHECK(ta.count(lang + "/hate/test.tsv") == 1);
    CHECK(ta.count(lang + "/trigger.bio") == 1);
  }
}

TEST_CASE("zero noise plants a trigger in every hateful example") {
  const fs::path dir = temp_dir("synth_trigger");
  const SyntheticSpec spec = tiny_spec();
  generate_synthetic(spec, 3, dir.string());
  for (const std::string lang : {"aa", "bb"}) {
    for (const std::string split : {"train", "dev", "test"}) {
      const auto rows = corpus::read_canonical_tsv(
          (dir / lang / "hate" / (split + ".tsv")).string(), lang,
          "synthetic");
      REQUIRE(!rows.empty());
      for (const auto& ex : rows) {
        const size_t words = strings::split_ws(ex.text).size();
        // The trigger is one extra token on top of the fillers.
        if (ex.label == std::string(corpus::kHateful)) {
          CHECK(words == spec.sentence_length + 1);
        } else {
          CHECK(words == spec.sentence_length);
        }
      }
    }
  }
}

TEST_CASE("the two pseudo-languages share no characters") {
  const fs::path dir = temp_dir("synth_charset");
  generate_synthetic(tiny_spec(), 3, dir.string());
  std::array<std::set<char>, 2> charsets;
  const std::vector<std::string> langs = {"aa", "bb"};
  for (size_t li = 0; li < 2; ++li) {
    for (const std::string split : {"train", "dev", "test"}) {
      const auto rows = corpus::read_canonical_tsv(
          (dir / langs[li] / "hate" / (split + ".tsv")).string(), langs[li],
          "synthetic");
      for (const auto& ex : rows) {
        for (char ch : ex.text) {
          if (ch != ' ') charsets[li].insert(ch);
        }
      }
    }
  }
  CHECK(!charsets[0].empty());
  CHECK(!charsets[1].empty());
  for (char ch : charsets[0]) CHECK(charsets[1].count(ch) == 0);
}

TEST_CASE("trigger tagging files parse as BIO with one trigger per even row") {
  const fs::path dir = temp_dir("synth_bio");
  const SyntheticSpec spec = tiny_spec();
  generate_synthetic(spec, 3, dir.string());
  const auto sentences =
      tasks::load_bio_ner((dir / "aa" / "trigger.bio").string());
  REQUIRE(sentences.size() == spec.tagging_size);
  for (size_t i = 0; i < sentences.size(); ++i) {
    const auto& tags = sentences[i].ner_tags;
    const size_t triggers =
        static_cast<size_t>(std::count(tags.begin(), tags.end(), "B-TRIG"));
    CHECK(triggers == (i % 2 == 0 ? 1 : 0));
  }
}

TEST_CASE("baseline vocabulary never sees target-language bytes") {
  const fs::path dir = temp_dir("vocab");
  const ExperimentManifest m = tiny_experiment(dir);
  const LoadedTasks loaded = load_manifest_data(m);
  const tasks::TaskDataset& hate = loaded.hate_by_domain.at("synthetic");

  const auto has_bb_bytes = [](const model::MultiTaskModel& mod) {
    const auto& pieces = mod.tokenizer().pieces();
    for (size_t i = model::SubwordTokenizer::kNumSpecials; i < pieces.size();
         ++i) {
      for (char ch : pieces[i]) {
        if (ch >= 'n' && ch <= 'z') return true;
      }
    }
    return false;
  };

  model::MultiTaskModel baseline =
      build_run_model(m.encoder, hate, {}, "aa", 5);
  CHECK_FALSE(has_bb_bytes(baseline));

  std::vector<const tasks::TaskDataset*> aux;
  for (const auto& d : loaded.aux_by_atom.at("ner")) aux.push_back(&d);
  model::MultiTaskModel with_aux =
      build_run_model(m.encoder, hate, aux, "aa", 5);
  CHECK(has_bb_bytes(with_aux));
}

TEST_CASE("run_matrix executes the full grid and persists everything") {
  const fs::path dir = temp_dir("matrix");
  const ExperimentManifest m = tiny_experiment(dir);
  const MatrixResult result = run_matrix(m);

  // languages x domains x combos x seeds runs; every cell scored.
  CHECK(result.outcomes.size() ==
        m.languages.size() * m.domains.size() * m.combos.size() *
            m.seeds.size());
  for (const auto& o : result.outcomes) {
    CHECK_FALSE(o.failed);
    CHECK_FALSE(o.from_cache);
    CHECK(fs::exists(dir / "out" / "runs" / o.run_id / "record.json"));
    CHECK(fs::exists(dir / "out" / "runs" / o.run_id / "predictions" /
                     "aa.tsv"));
    CHECK(fs::exists(dir / "out" / "runs" / o.run_id / "predictions" /
                     "bb.tsv"));
  }
  CHECK(result.gaps.empty());
  CHECK(result.matrix.size() ==
        m.combos.size() * m.languages.size() * m.languages.size());
  result.matrix.validate();
  for (const auto& [key, scores] : result.matrix.entries()) {
    CHECK(scores.per_seed.size() == m.seeds.size());
  }

  CHECK(fs::exists(dir / "out" / "runs" / "index.tsv"));
  for (const std::string name : {"none", "ner"}) {
    const fs::path path = dir / "out" / "matrices" / (name + ".tsv");
    REQUIRE(fs::exists(path));
    const eval::ScoreMatrix sub =
        eval::ScoreMatrix::from_tsv(read_file(path.string()));
    CHECK(sub.combos() == std::set<std::string>{name});
    for (const auto& [key, scores] : sub.entries()) {
      CHECK(scores.mean == doctest::Approx(result.matrix.at(key).mean));
    }
  }
}

TEST_CASE("re-running a completed matrix reuses every run") {
  const fs::path dir = temp_dir("resume");
  const ExperimentManifest m = tiny_experiment(dir);
  const MatrixResult first = run_matrix(m);
  const MatrixResult second = run_matrix(m);
  CHECK(second.outcomes.size() == first.outcomes.size());
  for (const auto& o : second.outcomes) {
    CHECK(o.from_cache);
    CHECK_FALSE(o.failed);
  }
  CHECK(second.matrix.to_tsv() == first.matrix.to_tsv());

  // Interrupted matrix: wipe one run directory; only that run re-executes.
  const std::string victim = first.outcomes.front().run_id;
  fs::remove_all(dir / "out" / "runs" / victim);
  const MatrixResult third = run_matrix(m);
  size_t fresh = 0;
  for (const auto& o : third.outcomes) {
    if (!o.from_cache) {
      ++fresh;
      CHECK(o.run_id == victim);
    }
  }
  CHECK(fresh == 1);
  CHECK(third.matrix.to_tsv() == first.matrix.to_tsv());
}

TEST_CASE("matrix outputs are a pure function of manifest and seeds") {
  const fs::path a = temp_dir("pure_a");
  const fs::path b = temp_dir("pure_b");
  ExperimentManifest ma = tiny_experiment(a);
  // Same data bytes generated under another root; different output dir.
  ExperimentManifest mb = tiny_experiment(b);
  const std::string ta = run_matrix(ma).matrix.to_tsv();
  const std::string tb = run_matrix(mb).matrix.to_tsv();
  CHECK(ta == tb);
}

TEST_CASE("parallel execution matches sequential execution") {
  const fs::path a = temp_dir("par_a");
  const fs::path b = temp_dir("par_b");
  ExperimentManifest ma = tiny_experiment(a);
  ExperimentManifest mb = tiny_experiment(b);
  mb.parallelism = 4;
  CHECK(run_matrix(ma).matrix.to_tsv() == run_matrix(mb).matrix.to_tsv());
}

TEST_CASE("a failing run leaves a gap and a diagnostic, not an abort") {
  const fs::path dir = temp_dir("failing");
  const ExperimentManifest m = tiny_experiment(dir);
  // Empty the aa dev split: runs with source aa cannot select an epoch.
  write_file((dir / "aa" / "hate" / "dev.tsv").string(), "id\ttext\tlabel\n");
  const MatrixResult result = run_matrix(m);

  size_t failed = 0;
  for (const auto& o : result.outcomes) {
    if (o.source == "aa") {
      CHECK(o.failed);
      CHECK(!o.diagnostic.empty());
      CHECK(fs::exists(dir / "out" / "runs" / o.run_id / "failed.txt"));
      ++failed;
    } else {
      CHECK_FALSE(o.failed);
    }
  }
  CHECK(failed == m.combos.size() * m.seeds.size());
  // Cells sourced from aa are gaps; bb rows are complete.
  for (const auto& key : result.gaps) {
    CHECK(key.source == "aa");
  }
  CHECK(result.gaps.size() == m.combos.size() * m.languages.size());
  for (const std::string& combo : m.combos) {
    for (const std::string& target : m.languages) {
      CHECK(result.matrix.contains({"bb", target, "synthetic", combo}));
      CHECK_FALSE(result.matrix.contains({"aa", target, "synthetic", combo}));
    }
  }
  // The index records the failure.
  const std::string index =
      read_file((dir / "out" / "runs" / "index.tsv").string());
  CHECK(index.find("failed") != std::string::npos);
}

TEST_CASE("reports render flagged cells and daggers in all three formats") {
  eval::ScoreMatrix matrix;
  matrix.model_id = "toy";
  matrix.seeds = {1, 2};
  const std::vector<std::string> langs = {"en", "es"};
  for (const auto& s : langs) {
    for (const auto& t : langs) {
      const double base = s == t ? 80.0 : 55.0;  // cross drop > 25%
      matrix.add({s, t, "immigrants", "none"},
                 eval::CellScores::from_seeds({base - 1.0, base + 1.0}));
      matrix.add({s, t, "immigrants", "ner"},
                 eval::CellScores::from_seeds({base + 2.0, base + 4.0}));
    }
  }
  const std::set<eval::CellKey> flagged = eval::flag_transfer_failures(matrix);
  REQUIRE(!flagged.empty());
  const eval::DeltaTable deltas = eval::build_delta_table(matrix);

  ReportInputs inputs;
  inputs.matrix = &matrix;
  inputs.flagged = &flagged;
  inputs.deltas = &deltas;

  const std::string md = render_report(inputs, ReportFormat::kMarkdown);
  const std::string tex = render_report(inputs, ReportFormat::kLatex);
  const std::string csv = render_report(inputs, ReportFormat::kCsv);
  CHECK(md.find("**55.0**") != std::string::npos);
  CHECK(tex.find("\\textbf{55.0}") != std::string::npos);
  CHECK(csv.find("55.0*") != std::string::npos);
  CHECK(tex.find("\\toprule") != std::string::npos);
  // The same numeric strings appear in every format.
  const auto nums = extract_numbers(md);
  CHECK(nums == extract_numbers(tex));
  CHECK(nums == extract_numbers(csv));
  // Deltas are +3.0 everywhere with two seeds of zero variance in the
  // difference direction; the t-test fires.
  CHECK(md.find("+3.0") != std::string::npos);
}

TEST_CASE("a delta of -1.04 displays as -1.0") {
  eval::ScoreMatrix matrix;
  matrix.model_id = "toy";
  matrix.seeds = {1, 2};
  for (const std::string s : {"en", "es"}) {
    for (const std::string t : {"en", "es"}) {
      matrix.add({s, t, "immigrants", "none"},
                 eval::CellScores::from_seeds({70.0, 70.0}));
      matrix.add({s, t, "immigrants", "sentiment"},
                 eval::CellScores::from_seeds({70.0 - 1.04, 70.0 - 1.04}));
    }
  }
  const eval::DeltaTable deltas = eval::build_delta_table(matrix);
  ReportInputs inputs;
  inputs.matrix = &matrix;
  inputs.deltas = &deltas;
  for (ReportFormat f : {ReportFormat::kMarkdown, ReportFormat::kLatex,
                         ReportFormat::kCsv}) {
    const std::string text = render_report(inputs, f);
    CHECK(text.find("-1.0") != std::string::npos);
    CHECK(text.find("-1.04") == std::string::npos);
  }
}

TEST_CASE("re-emitting a report from the same inputs is byte-identical") {
  const fs::path dir = temp_dir("report");
  eval::ScoreMatrix matrix;
  matrix.model_id = "toy";
  matrix.seeds = {1};
  for (const std::string s : {"aa", "bb"}) {
    for (const std::string t : {"aa", "bb"}) {
      matrix.add({s, t, "synthetic", "none"},
                 eval::CellScores::from_seeds({s == t ? 90.0 : 50.0}));
    }
  }
  diagnostics::MonoCrossTable mc;
  mc.domains = {"synthetic"};
  mc.classes = {"slur"};
  mc.by_domain["synthetic"]["slur"] = -14.72;
  mc.combined["slur"] = -14.72;
  diagnostics::AuxEffectTable ae;
  ae.tasks = {"ner"};
  ae.classes = {"slur", "threat"};
  ae.effect["ner"]["slur"] = 26.81;
  ae.effect["ner"]["threat"] = std::nan("");
  ReportInputs inputs;
  inputs.matrix = &matrix;
  inputs.mono_cross = &mc;
  inputs.aux_effect = &ae;

  const auto paths1 = emit_report(inputs, dir.string(), "report");
  REQUIRE(paths1.size() == 3);
  std::map<std::string, std::string> bytes;
  for (const auto& p : paths1) bytes[p] = read_file(p);
  const auto paths2 = emit_report(inputs, dir.string(), "report");
  for (const auto& p : paths2) {
    CHECK(read_file(p) == bytes.at(p));
  }
  // Undefined aux cells render as n/a, never as a number.
  CHECK(bytes.at(paths1[0]).find("n/a") != std::string::npos);
  CHECK(bytes.at(paths1[0]).find("-14.7") != std::string::npos);
  CHECK(bytes.at(paths1[0]).find("+26.8") != std::string::npos);
}
