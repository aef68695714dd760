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

// Command-line surface: convert, sample, train, evaluate, diagnose, report,
// synth. Exit codes: 0 success, 1 validation error, 2 runtime failure.

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "xlt/common.hpp"
#include "xlt/corpus.hpp"
#include "xlt/diagnostics.hpp"
#include "xlt/exp_runner.hpp"
#include "xlt/matrix.hpp"
#include "xlt/model.hpp"
#include "xlt/text.hpp"

namespace fs = std::filesystem;
using namespace xlt;

namespace {

struct ConvertArgs {
  std::string format;
  std::string input;
  std::string output;
  std::string language;
  std::string domain;
  bool normalize = true;
};

int run_convert(const ConvertArgs& a) {
  std::vector<corpus::LabeledExample> rows;
  if (a.format == "hateval") {
    rows = corpus::convert_hateval_csv(a.input, a.language, a.domain);
  } else if (a.format == "ami") {
    rows = corpus::convert_ami_tsv(a.input, a.language, a.domain);
  } else {
    rows = corpus::convert_haspeede_tsv(a.input, a.language, a.domain);
  }
  if (a.normalize) {
    for (auto& ex : rows) ex.text = text::normalize_tweet(ex.text);
  }
  corpus::write_canonical_tsv(a.output, rows);
  std::cout << "wrote " << rows.size() << " examples to " << a.output << "\n";
  return 0;
}

struct SampleArgs {
  std::string input;
  std::string output;
  std::string language;
  std::string domain;
  std::string name;
  std::string report_path;
  size_t train = 0;
  size_t dev = 0;
  size_t test = 0;
  bool resplit = false;
  double ks_threshold = 0.05;
  double ratio_tolerance = 0.02;
  size_t max_attempts = 1000;
  uint64_t seed = 0;
};

int run_sample(const SampleArgs& a) {
  const std::string name =
      a.name.empty() ? a.language + "-" + a.domain : a.name;
  const corpus::Corpus source =
      corpus::read_corpus_dir(a.input, name, a.language, a.domain);
  const corpus::SplitSizes sizes{a.train, a.dev, a.test};
  if (a.resplit) {
    const corpus::Corpus out = corpus::merge_and_resplit(source, sizes, a.seed);
    corpus::write_corpus_dir(a.output, out);
    std::cout << "resplit " << sizes.total() << " examples into " << a.output
              << "\n";
    return 0;
  }
  corpus::SamplingConstraints constraints;
  constraints.target_sizes = sizes;
  constraints.ks_threshold = a.ks_threshold;
  constraints.label_ratio_tolerance = a.ratio_tolerance;
  constraints.max_attempts = a.max_attempts;
  constraints.rng_seed = a.seed;
  corpus::SubsampleReport report;
  const corpus::Corpus out = corpus::comparable_subsample(
      source, constraints, corpus::default_length, &report);
  corpus::write_corpus_dir(a.output, out);
  const std::string report_path =
      a.report_path.empty()
          ? (fs::path(a.output) / "sampling_report.txt").string()
          : a.report_path;
  write_file(report_path, report.to_key_value_text());
  std::cout << "sampled " << sizes.total() << " examples into " << a.output
            << " after " << report.total_attempts() << " attempts\n"
            << "report: " << report_path << "\n";
  return 0;
}

struct MatrixArgs {
  std::string manifest;
  std::string output;
  size_t parallelism = 0;  // 0 keeps the manifest's value
};

runner::ExperimentManifest load_with_overrides(const MatrixArgs& a) {
  runner::ExperimentManifest m = runner::load_manifest(a.manifest);
  if (!a.output.empty()) {
    m.output_dir = fs::absolute(a.output).lexically_normal().string();
  }
  if (a.parallelism > 0) m.parallelism = a.parallelism;
  m.validate();
  return m;
}

size_t print_outcomes(const runner::MatrixResult& result) {
  size_t executed = 0;
  size_t cached = 0;
  size_t failed = 0;
  for (const auto& o : result.outcomes) {
    std::cout << o.run_id << "  " << o.domain << "  " << o.combo
              << "  source=" << o.source << "  seed=" << o.seed << "  "
              << (o.failed ? "failed" : o.from_cache ? "cached" : "ok")
              << "\n";
    if (o.failed) {
      std::cout << "    " << o.diagnostic << "\n";
      ++failed;
    } else if (o.from_cache) {
      ++cached;
    } else {
      ++executed;
    }
  }
  std::cout << "runs: " << executed << " executed, " << cached << " cached, "
            << failed << " failed\n";
  return failed;
}

int run_train(const MatrixArgs& a) {
  const runner::ExperimentManifest m = load_with_overrides(a);
  const runner::MatrixResult result = runner::run_matrix(m);
  const size_t failed = print_outcomes(result);
  if (failed > 0) {
    throw RuntimeFailure(std::to_string(failed) + " of " +
                         std::to_string(result.outcomes.size()) +
                         " runs failed");
  }
  return 0;
}

int run_evaluate(const MatrixArgs& a) {
  const runner::ExperimentManifest m = load_with_overrides(a);
  const runner::MatrixResult result = runner::run_matrix(m);
  print_outcomes(result);
  const fs::path out(m.output_dir);
  fs::create_directories(out / "matrices");
  const std::string matrix_path = (out / "matrices" / "all.tsv").string();
  write_file(matrix_path, result.matrix.to_tsv());
  std::cout << "wrote " << matrix_path << "\n";
  if (!result.gaps.empty()) {
    for (const auto& key : result.gaps) {
      std::cout << "gap: " << key.to_string() << "\n";
    }
    throw RuntimeFailure(std::to_string(result.gaps.size()) +
                         " matrix cells are missing scores");
  }

  std::cout << "aggregates (mono / cross macro-F1):\n";
  try {
    const eval::AggregateView agg = eval::aggregate_mono_cross(result.matrix);
    for (const auto& [key, mc] : agg.entries()) {
      std::cout << "  " << key.first << "  " << key.second << "  "
                << format_one_decimal(mc.mono) << " / "
                << format_one_decimal(mc.cross) << "\n";
    }
  } catch (const ValidationError& e) {
    std::cout << "  unavailable: " << e.what() << "\n";
  }
  const std::set<eval::CellKey> flagged =
      eval::flag_transfer_failures(result.matrix);
  for (const auto& key : flagged) {
    std::cout << "transfer failure: " << key.to_string() << "\n";
  }
  const std::set<std::string> combos = result.matrix.combos();
  if (combos.size() >= 2 &&
      combos.count(std::string(eval::kBaselineCombo)) > 0) {
    const eval::DeltaTable deltas = eval::build_delta_table(result.matrix);
    const std::string delta_path = (out / "deltas.tsv").string();
    write_file(delta_path, deltas.to_tsv());
    std::cout << "wrote " << delta_path << "\n";
  }
  return 0;
}

struct DiagnoseArgs {
  std::string suite;
  std::string model_dir;
  std::string task = "hate";
  std::string classes_path;
  std::string domain;
  std::string combo = "none";
  std::string source;
  std::string target;
  std::string output;
  std::string format = "csv";
  std::vector<std::string> group_specs;  // domain=group
};

int run_diagnose(const DiagnoseArgs& a) {
  const diagnostics::ClassMapping mapping =
      a.classes_path.empty() ? diagnostics::default_class_mapping()
                             : diagnostics::load_class_mapping(a.classes_path);
  std::map<std::string, std::string> group_by_domain;
  for (const std::string& spec : a.group_specs) {
    const size_t eq = spec.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
      throw ValidationError("bad --group '" + spec +
                            "'; expected domain=group");
    }
    group_by_domain[spec.substr(0, eq)] = spec.substr(eq + 1);
  }
  std::vector<diagnostics::FunctionalCase> cases =
      diagnostics::load_hatecheck(a.suite, group_by_domain, mapping);
  if (!a.domain.empty()) {
    if (group_by_domain.empty()) {
      throw ValidationError(
          "--domain needs at least one --group domain=group mapping");
    }
    cases = diagnostics::cases_for_domain(cases, group_by_domain, a.domain);
  }
  if (cases.empty()) {
    throw ValidationError("no functional cases retained from " + a.suite);
  }

  const model::MultiTaskModel m = model::MultiTaskModel::load(a.model_dir);
  std::vector<std::string> texts;
  texts.reserve(cases.size());
  for (const auto& c : cases) texts.push_back(c.text);
  const std::vector<std::string> predicted =
      m.predict_sequence_labels(a.task, texts);
  const diagnostics::FunctionalityReport report = diagnostics::score_by_class(
      cases, predicted, a.domain, a.combo, a.source, a.target);

  std::ostringstream os;
  if (a.format == "md") {
    os << "| class | macro-F1 | cases |\n| --- | ---: | ---: |\n";
    for (const auto& [cls, f1] : report.class_f1) {
      os << "| " << cls << " | " << format_one_decimal(f1) << " | "
         << report.class_cases.at(cls) << " |\n";
    }
  } else {
    os << "class,macro_f1,cases\n";
    for (const auto& [cls, f1] : report.class_f1) {
      os << cls << "," << format_one_decimal(f1) << ","
         << report.class_cases.at(cls) << "\n";
    }
  }
  if (a.output.empty()) {
    std::cout << os.str();
  } else {
    write_file(a.output, os.str());
    std::cout << "wrote " << a.output << "\n";
  }
  return 0;
}

struct ReportArgs {
  std::string matrices;
  std::string output;
  std::string stem = "report";
  std::string format = "all";
};

eval::ScoreMatrix load_matrices(const std::string& path) {
  const fs::path p(path);
  if (fs::is_regular_file(p)) {
    return eval::ScoreMatrix::from_tsv(read_file(path));
  }
  if (!fs::is_directory(p)) {
    throw ValidationError("no matrix file or directory at " + path);
  }
  // A full matrix wins; otherwise union the per-combo files.
  if (fs::exists(p / "all.tsv")) {
    return eval::ScoreMatrix::from_tsv(read_file((p / "all.tsv").string()));
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(p)) {
    if (entry.path().extension() == ".tsv") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    throw ValidationError("no .tsv matrices under " + path);
  }
  eval::ScoreMatrix merged =
      eval::ScoreMatrix::from_tsv(read_file(files.front().string()));
  for (size_t i = 1; i < files.size(); ++i) {
    merged.merge(eval::ScoreMatrix::from_tsv(read_file(files[i].string())));
  }
  return merged;
}

int run_report(const ReportArgs& a) {
  const eval::ScoreMatrix matrix = load_matrices(a.matrices);
  matrix.validate();
  const std::set<eval::CellKey> flagged = eval::flag_transfer_failures(matrix);
  std::optional<eval::DeltaTable> deltas;
  const std::set<std::string> combos = matrix.combos();
  if (combos.size() >= 2 &&
      combos.count(std::string(eval::kBaselineCombo)) > 0) {
    deltas = eval::build_delta_table(matrix);
  }
  runner::ReportInputs inputs;
  inputs.matrix = &matrix;
  inputs.flagged = &flagged;
  if (deltas.has_value()) inputs.deltas = &deltas.value();

  fs::path out;
  if (!a.output.empty()) {
    out = a.output;
  } else if (fs::is_directory(a.matrices)) {
    out = fs::path(a.matrices).parent_path() / "reports";
  } else {
    out = fs::path(a.matrices).parent_path().parent_path() / "reports";
  }
  if (a.format == "all") {
    for (const std::string& path :
         runner::emit_report(inputs, out.string(), a.stem)) {
      std::cout << "wrote " << path << "\n";
    }
  } else {
    const runner::ReportFormat f = runner::report_format_from_name(a.format);
    fs::create_directories(out);
    const std::string path =
        (out / (a.stem + "." + runner::report_format_extension(f))).string();
    write_file(path, runner::render_report(inputs, f));
    std::cout << "wrote " << path << "\n";
  }
  return 0;
}

struct SynthArgs {
  std::string output;
  std::string languages = "aa,bb";
  uint64_t seed = 1;
  runner::SyntheticSpec spec;
};

int run_synth(const SynthArgs& a) {
  runner::SyntheticSpec spec = a.spec;
  spec.languages = strings::split(a.languages, ',');
  runner::generate_synthetic(spec, a.seed, a.output);
  std::cout << "wrote synthetic corpora for " << a.languages << " under "
            << a.output << "\n"
            << "manifest: " << (fs::path(a.output) / "manifest.txt").string()
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zero-shot cross-lingual hate speech transfer experiments"};
  app.require_subcommand(1);

  ConvertArgs cargs;
  CLI::App* convert =
      app.add_subcommand("convert", "Convert a shared-task file to canonical TSV");
  convert->add_option("--format", cargs.format, "Source layout")
      ->required()
      ->check(CLI::IsMember({"hateval", "ami", "haspeede"}));
  convert->add_option("--input", cargs.input, "Source file")
      ->required()
      ->check(CLI::ExistingFile);
  convert->add_option("--output", cargs.output, "Canonical TSV to write")
      ->required();
  convert->add_option("--language", cargs.language, "ISO 639-1 code")
      ->required();
  convert->add_option("--domain", cargs.domain, "Domain tag")->required();
  convert->add_flag("--normalize,!--no-normalize", cargs.normalize,
                    "Tweet normalization (default on)");

  SampleArgs sargs;
  CLI::App* sample =
      app.add_subcommand("sample", "Build a comparable corpus by subsampling");
  sample->add_option("--input", sargs.input, "Corpus dir with {train,dev,test}.tsv")
      ->required()
      ->check(CLI::ExistingDirectory);
  sample->add_option("--output", sargs.output, "Corpus dir to write")
      ->required();
  sample->add_option("--language", sargs.language, "ISO 639-1 code")
      ->required();
  sample->add_option("--domain", sargs.domain, "Domain tag")->required();
  sample->add_option("--name", sargs.name, "Corpus name (default language-domain)");
  sample->add_option("--train", sargs.train, "Target train size")->required();
  sample->add_option("--dev", sargs.dev, "Target dev size")->required();
  sample->add_option("--test", sargs.test, "Target test size")->required();
  sample->add_flag("--resplit", sargs.resplit,
                   "Merge all splits and re-split to the target sizes "
                   "instead of gated subsampling");
  sample->add_option("--ks-threshold", sargs.ks_threshold,
                     "Minimum KS p-value per split");
  sample->add_option("--ratio-tolerance", sargs.ratio_tolerance,
                     "Maximum |hate-ratio delta| per split");
  sample->add_option("--max-attempts", sargs.max_attempts,
                     "Attempts before giving up");
  sample->add_option("--seed", sargs.seed, "RNG seed");
  sample->add_option("--report", sargs.report_path,
                     "Report path (default <output>/sampling_report.txt)");

  MatrixArgs targs;
  CLI::App* train =
      app.add_subcommand("train", "Execute every training run of a manifest");
  train->add_option("--manifest", targs.manifest, "Experiment manifest")
      ->required()
      ->check(CLI::ExistingFile);
  train->add_option("--output", targs.output, "Override the output dir");
  train->add_option("--parallelism", targs.parallelism,
                    "Override concurrent runs (0 keeps the manifest)");

  MatrixArgs eargs;
  CLI::App* evaluate = app.add_subcommand(
      "evaluate", "Assemble the score matrix (reuses completed runs)");
  evaluate->add_option("--manifest", eargs.manifest, "Experiment manifest")
      ->required()
      ->check(CLI::ExistingFile);
  evaluate->add_option("--output", eargs.output, "Override the output dir");
  evaluate->add_option("--parallelism", eargs.parallelism,
                       "Override concurrent runs (0 keeps the manifest)");

  DiagnoseArgs dargs;
  CLI::App* diagnose = app.add_subcommand(
      "diagnose", "Score a trained run on a functional test suite");
  diagnose->add_option("--suite", dargs.suite, "HateCheck-style CSV")
      ->required()
      ->check(CLI::ExistingFile);
  diagnose->add_option("--model", dargs.model_dir,
                       "Saved model dir (runs/<id>/model)")
      ->required()
      ->check(CLI::ExistingDirectory);
  diagnose->add_option("--task", dargs.task, "Sequence task to query");
  diagnose->add_option("--classes", dargs.classes_path,
                       "functionality->class TSV (default: built-in)")
      ->check(CLI::ExistingFile);
  diagnose->add_option("--group", dargs.group_specs,
                       "domain=protected-group mapping (repeatable)");
  diagnose->add_option("--domain", dargs.domain,
                       "Keep only cases aimed at this domain's group");
  diagnose->add_option("--combo", dargs.combo, "Task combo label to record");
  diagnose->add_option("--source", dargs.source, "Training language to record");
  diagnose->add_option("--target", dargs.target, "Case language to record");
  diagnose->add_option("--output", dargs.output, "Report path (default stdout)");
  diagnose->add_option("--report-format", dargs.format, "csv or md")
      ->check(CLI::IsMember({"csv", "md"}));

  ReportArgs rargs;
  CLI::App* report =
      app.add_subcommand("report", "Render score tables from matrix TSVs");
  report->add_option("--matrices", rargs.matrices,
                     "Matrix TSV file or directory of them")
      ->required()
      ->check(CLI::ExistingPath);
  report->add_option("--output", rargs.output,
                     "Report dir (default <matrices>/../reports)");
  report->add_option("--stem", rargs.stem, "Output file stem");
  report->add_option("--report-format", rargs.format, "md, tex, csv or all")
      ->check(CLI::IsMember({"md", "tex", "csv", "all"}));

  SynthArgs yargs;
  CLI::App* synth = app.add_subcommand(
      "synth", "Generate the two-pseudo-language validation corpus");
  synth->add_option("--output", yargs.output, "Directory to populate")
      ->required();
  synth->add_option("--seed", yargs.seed, "RNG seed");
  synth->add_option("--languages", yargs.languages,
                    "Two comma-separated language codes");
  synth->add_option("--train", yargs.spec.train_size, "Hate train size");
  synth->add_option("--dev", yargs.spec.dev_size, "Hate dev size");
  synth->add_option("--test", yargs.spec.test_size, "Hate test size");
  synth->add_option("--tagging", yargs.spec.tagging_size,
                    "Trigger-tagging sentences");
  synth->add_option("--noise", yargs.spec.noise_rate,
                    "Fraction of hateful examples without a trigger");
  synth->add_option("--fillers", yargs.spec.fillers_per_language,
                    "Filler lexemes per language");
  synth->add_option("--triggers", yargs.spec.triggers_per_language,
                    "Trigger lexemes per language");
  synth->add_option("--length", yargs.spec.sentence_length,
                    "Filler tokens per sentence");
  synth->add_option("--domain", yargs.spec.domain, "Domain tag");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the message
    return 1;
  }

  try {
    if (convert->parsed()) return run_convert(cargs);
    if (sample->parsed()) return run_sample(sargs);
    if (train->parsed()) return run_train(targs);
    if (evaluate->parsed()) return run_evaluate(eargs);
    if (diagnose->parsed()) return run_diagnose(dargs);
    if (report->parsed()) return run_report(rargs);
    if (synth->parsed()) return run_synth(yargs);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const RuntimeFailure& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
