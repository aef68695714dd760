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

#ifndef XLT_EXP_RUNNER_HPP
#define XLT_EXP_RUNNER_HPP

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "xlt/diagnostics.hpp"
#include "xlt/matrix.hpp"
#include "xlt/model.hpp"
#include "xlt/tasks.hpp"
#include "xlt/trainer.hpp"

namespace xlt::runner {

// Relative data paths resolve against this variable when set, else against
// the manifest file's directory.
inline constexpr const char* kDataRootEnv = "XLT_DATA_ROOT";

// The auxiliary tasks a combo token may name. "none" is the baseline combo;
// other combos '+'-join these atoms, e.g. "sentiment+ner".
const std::vector<std::string>& combo_atoms();

// Atoms of a combo label; empty for "none". Errors on unknown atoms and
// duplicates.
std::vector<std::string> combo_tasks(const std::string& combo);

// A declarative experiment: the source x target x combo x seed grid plus
// everything needed to run it. Parsed from a flat key-value file; repeated
// keys build lists. Grammar (one `key = value` per line, '#' comments):
//   language, domain, combo, seed        repeatable
//   output_dir, parallelism              scalars
//   encoder.{variant,layers,hidden,attention_heads,vocab_size,max_len,pooling}
//   sampler.{alpha,batch_size,batches_per_epoch}
//   train.{epochs,learning_rate,warmup_fraction,selection_task,aux_epochs}
//   data.hate.<domain>.<language>        corpus dir with {train,dev,test}.tsv
//   data.sentiment.<language>            corpus dir, 3-way sentiment labels
//   data.ner.<language>                  BIO file (train split)
//   data.ud.<language>                   CoNLL-U file (train split)
//   data.mlm.<language>                  plain text, one sentence per line
struct ExperimentManifest {
  std::vector<std::string> languages;
  std::vector<std::string> domains;
  std::vector<std::string> combos;
  std::vector<uint64_t> seeds;
  model::EncoderSpec encoder;
  trainer::SamplerConfig sampler;
  trainer::TrainConfig train;  // source_language filled in per run
  size_t aux_epochs = 0;       // > 0 switches to intermediate training
  size_t parallelism = 1;
  std::string output_dir;
  // domain -> language -> corpus dir.
  std::map<std::string, std::map<std::string, std::string>> hate_paths;
  // aux atom -> language -> path.
  std::map<std::string, std::map<std::string, std::string>> aux_paths;
  // Canonical text the run-directory hash is derived from.
  std::string canonical;

  uint64_t hash() const;
  // Baseline combo present, grid fields non-empty, every data path needed by
  // some combo resolves, no duplicate grid entries.
  void validate() const;
};

ExperimentManifest parse_manifest(const std::string& text,
                                  const std::string& base_dir);
ExperimentManifest load_manifest(const std::string& path);

// Everything the manifest's data keys point at, loaded once up front.
struct LoadedTasks {
  std::map<std::string, tasks::TaskDataset> hate_by_domain;
  // aux atom -> datasets it contributes (the UD bundle contributes four).
  std::map<std::string, std::vector<tasks::TaskDataset>> aux_by_atom;
};

LoadedTasks load_manifest_data(const ExperimentManifest& manifest);

// Fresh model for one run: vocabulary induced from the source language's
// selection train split plus every aux train split, tasks attached.
model::MultiTaskModel build_run_model(
    const model::EncoderSpec& encoder, const tasks::TaskDataset& selection,
    const std::vector<const tasks::TaskDataset*>& aux,
    const std::string& source, uint64_t seed);

// One grid entry's fate. Failed runs carry their diagnostic and leave gaps
// in the matrix instead of aborting the remaining runs.
struct RunOutcome {
  std::string run_id;  // runs/<run_id> under the output dir
  std::string domain;
  std::string combo;
  std::string source;
  uint64_t seed = 0;
  bool from_cache = false;
  bool failed = false;
  std::string diagnostic;
};

struct MatrixResult {
  eval::ScoreMatrix matrix;
  std::vector<RunOutcome> outcomes;
  // Cells missing at least one seed's score because a run failed.
  std::set<eval::CellKey> gaps;
};

// Executes the full grid: per (domain, combo, source, seed) one training run
// with selection data from the source language only and aux data from every
// manifest language. Completed runs (record.json plus prediction TSVs under
// runs/<run_id>/) are reused on re-entry. Writes runs/index.tsv and
// matrices/<combo>.tsv under the output dir.
MatrixResult run_matrix(const ExperimentManifest& manifest);

// Desk-scale validation data: two pseudo-languages with disjoint surface
// vocabularies over disjoint character sets, a planted trigger lexicon
// marking the hateful class, and a BIO tagging task labelling triggers in
// both languages (the cross-lingual bridge).
struct SyntheticSpec {
  std::vector<std::string> languages = {"aa", "bb"};  // exactly two
  size_t train_size = 64;  // hate examples per language
  size_t dev_size = 16;
  size_t test_size = 16;
  size_t tagging_size = 48;  // trigger-tagging sentences per language
  double noise_rate = 0.0;   // hateful examples left without a trigger
  size_t fillers_per_language = 10;
  size_t triggers_per_language = 3;
  size_t sentence_length = 4;  // filler tokens per sentence
  std::string domain = "synthetic";

  void validate() const;
};

// Writes, per language L:
//   <dir>/<L>/hate/{train,dev,test}.tsv   canonical corpus files
//   <dir>/<L>/trigger.bio                 BIO trigger-tagging train data
// plus <dir>/manifest.txt, a ready-to-run experiment over the two languages
// with combos none and ner. Deterministic: same spec and seed give
// byte-identical files.
void generate_synthetic(const SyntheticSpec& spec, uint64_t seed,
                        const std::string& dir);

enum class ReportFormat { kMarkdown, kLatex, kCsv };
ReportFormat report_format_from_name(const std::string& name);
const char* report_format_extension(ReportFormat f);

// What one report renders; null sections are skipped.
struct ReportInputs {
  const eval::ScoreMatrix* matrix = nullptr;
  const std::set<eval::CellKey>* flagged = nullptr;  // transfer failures
  const eval::DeltaTable* deltas = nullptr;
  const diagnostics::MonoCrossTable* mono_cross = nullptr;
  const diagnostics::AuxEffectTable* aux_effect = nullptr;
};

// Deterministic rendering with one-decimal display rounding. The same
// numeric strings appear in every format; flagged cells are bold in
// markdown/LaTeX and carry a trailing '*' in CSV, significance uses
// dagger/double-dagger symbols.
std::string render_report(const ReportInputs& inputs, ReportFormat format);

// Renders all three formats as <stem>.{md,tex,csv} under `dir`.
std::vector<std::string> emit_report(const ReportInputs& inputs,
                                     const std::string& dir,
                                     const std::string& stem);

}  // namespace xlt::runner

#endif  // XLT_EXP_RUNNER_HPP
