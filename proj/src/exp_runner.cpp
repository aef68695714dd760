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
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>
#include <tuple>

#include "json.hpp"
#include "xlt/common.hpp"
#include "xlt/metrics.hpp"

namespace xlt::runner {

namespace fs = std::filesystem;
using nlohmann::json;

// Combos -------------------------------------------------------------------

const std::vector<std::string>& combo_atoms() {
  static const std::vector<std::string> kAtoms = {"sentiment", "ner", "ud",
                                                  "upos-only", "mlm"};
  return kAtoms;
}

std::vector<std::string> combo_tasks(const std::string& combo) {
  if (combo == std::string(eval::kBaselineCombo)) return {};
  if (strings::trim(combo).empty()) {
    throw ValidationError("manifest: empty task combo");
  }
  const std::vector<std::string> atoms = strings::split(combo, '+');
  std::set<std::string> seen;
  for (const std::string& atom : atoms) {
    const auto& known = combo_atoms();
    if (std::find(known.begin(), known.end(), atom) == known.end()) {
      throw ValidationError("manifest: unknown auxiliary task '" + atom +
                            "' in combo '" + combo + "'");
    }
    if (!seen.insert(atom).second) {
      throw ValidationError("manifest: duplicate task '" + atom +
                            "' in combo '" + combo + "'");
    }
  }
  return atoms;
}

namespace {

// The manifest data key an atom's datasets load from.
std::string data_key_for_atom(const std::string& atom) {
  return atom == "upos-only" ? "ud" : atom;
}

std::string fail(const std::string& context, size_t line_no,
                 const std::string& msg) {
  return "manifest:" + context + ":" + std::to_string(line_no) + ": " + msg;
}

size_t parse_size(const std::string& v, const std::string& key,
                  size_t line_no) {
  try {
    size_t pos = 0;
    const unsigned long long n = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return static_cast<size_t>(n);
  } catch (const std::exception&) {
    throw ValidationError(fail(key, line_no, "expected an integer, got '" + v +
                                                 "'"));
  }
}

double parse_double(const std::string& v, const std::string& key,
                    size_t line_no) {
  try {
    size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ValidationError(fail(key, line_no, "expected a number, got '" + v +
                                                 "'"));
  }
}

// Relative paths resolve against $XLT_DATA_ROOT when set, else `base_dir`.
std::string resolve_data_path(const std::string& value,
                              const std::string& base_dir) {
  fs::path p(value);
  if (p.is_absolute()) return p.lexically_normal().string();
  const char* root = std::getenv(kDataRootEnv);
  const fs::path base =
      (root != nullptr && *root != '\0') ? fs::path(root) : fs::path(base_dir);
  return (base / p).lexically_normal().string();
}

template <typename T>
void require_unique(const std::vector<T>& values, const std::string& what) {
  std::set<T> seen(values.begin(), values.end());
  if (seen.size() != values.size()) {
    throw ValidationError("manifest: duplicate " + what);
  }
}

}  // namespace

// Manifest -----------------------------------------------------------------

uint64_t ExperimentManifest::hash() const { return stable_hash(canonical); }

ExperimentManifest parse_manifest(const std::string& text,
                                  const std::string& base_dir) {
  ExperimentManifest m;
  m.train.selection_task = "hate";
  std::vector<std::string> canon;
  std::istringstream in(text);
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string trimmed = strings::trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    const size_t eq = trimmed.find('=');
    if (eq == std::string::npos) {
      throw ValidationError(fail("line", line_no, "expected 'key = value'"));
    }
    const std::string key = strings::trim(trimmed.substr(0, eq));
    const std::string value = strings::trim(trimmed.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ValidationError(fail("line", line_no, "expected 'key = value'"));
    }
    std::string canon_value = value;
    if (key == "language") {
      m.languages.push_back(value);
    } else if (key == "domain") {
      m.domains.push_back(value);
    } else if (key == "combo") {
      m.combos.push_back(value);
    } else if (key == "seed") {
      m.seeds.push_back(parse_size(value, key, line_no));
    } else if (key == "output_dir") {
      fs::path p(value);
      m.output_dir = p.is_absolute()
                         ? p.lexically_normal().string()
                         : (fs::path(base_dir) / p).lexically_normal().string();
    } else if (key == "parallelism") {
      m.parallelism = parse_size(value, key, line_no);
    } else if (key == "encoder.variant") {
      m.encoder.pretrained = value == "toy" ? std::string() : value;
    } else if (key == "encoder.layers") {
      m.encoder.layers = parse_size(value, key, line_no);
    } else if (key == "encoder.hidden") {
      m.encoder.hidden = parse_size(value, key, line_no);
    } else if (key == "encoder.attention_heads") {
      m.encoder.attention_heads = parse_size(value, key, line_no);
    } else if (key == "encoder.vocab_size") {
      m.encoder.vocab_size = parse_size(value, key, line_no);
    } else if (key == "encoder.max_len") {
      m.encoder.max_len = parse_size(value, key, line_no);
    } else if (key == "encoder.pooling") {
      m.encoder.pooling = model::pooling_from_name(value);
    } else if (key == "sampler.alpha") {
      m.sampler.alpha = parse_double(value, key, line_no);
    } else if (key == "sampler.batch_size") {
      m.sampler.batch_size = parse_size(value, key, line_no);
    } else if (key == "sampler.batches_per_epoch") {
      m.sampler.batches_per_epoch = parse_size(value, key, line_no);
    } else if (key == "train.epochs") {
      m.train.epochs = parse_size(value, key, line_no);
    } else if (key == "train.learning_rate") {
      m.train.learning_rate = parse_double(value, key, line_no);
    } else if (key == "train.warmup_fraction") {
      m.train.warmup_fraction = parse_double(value, key, line_no);
    } else if (key == "train.selection_task") {
      m.train.selection_task = value;
    } else if (key == "train.aux_epochs") {
      m.aux_epochs = parse_size(value, key, line_no);
    } else if (strings::starts_with(key, "data.")) {
      const auto parts = strings::split(key.substr(5), '.');
      canon_value = resolve_data_path(value, base_dir);
      if (parts.size() == 3 && parts[0] == "hate") {
        m.hate_paths[parts[1]][parts[2]] = canon_value;
      } else if (parts.size() == 2 && parts[0] != "hate") {
        static const std::set<std::string> kDataAtoms = {"sentiment", "ner",
                                                         "ud", "mlm"};
        if (kDataAtoms.count(parts[0]) == 0) {
          throw ValidationError(
              fail(key, line_no, "unknown data task '" + parts[0] + "'"));
        }
        m.aux_paths[parts[0]][parts[1]] = canon_value;
      } else {
        throw ValidationError(fail(
            key, line_no,
            "expected data.hate.<domain>.<language> or data.<task>.<language>"));
      }
    } else {
      throw ValidationError(fail("line", line_no, "unknown key '" + key + "'"));
    }
    // output_dir and parallelism do not affect results; leave them out of
    // the canonical form so run hashes survive relocation and re-tuning.
    if (key != "output_dir" && key != "parallelism") {
      canon.push_back(key + " = " + canon_value);
    }
  }
  m.canonical = strings::join(canon, "\n");
  return m;
}

ExperimentManifest load_manifest(const std::string& path) {
  return parse_manifest(read_file(path),
                        fs::path(path).parent_path().string());
}

void ExperimentManifest::validate() const {
  if (languages.empty()) throw ValidationError("manifest: no languages");
  if (domains.empty()) throw ValidationError("manifest: no domains");
  if (combos.empty()) throw ValidationError("manifest: no task combos");
  if (seeds.empty()) throw ValidationError("manifest: no seeds");
  require_unique(languages, "language");
  require_unique(domains, "domain");
  require_unique(combos, "combo");
  require_unique(seeds, "seed");
  if (std::find(combos.begin(), combos.end(),
                std::string(eval::kBaselineCombo)) == combos.end()) {
    throw ValidationError(
        "manifest: the baseline combo 'none' is required for deltas");
  }
  std::set<std::string> atoms;
  for (const std::string& combo : combos) {
    for (const std::string& atom : combo_tasks(combo)) atoms.insert(atom);
  }
  if (output_dir.empty()) throw ValidationError("manifest: no output_dir");
  if (parallelism == 0) {
    throw ValidationError("manifest: parallelism must be >= 1");
  }
  encoder.validate();
  sampler.validate();
  trainer::TrainConfig probe = train;
  probe.source_language = languages.front();
  probe.validate();

  // Every referenced data path must resolve before any run starts.
  for (const std::string& domain : domains) {
    const auto it = hate_paths.find(domain);
    for (const std::string& lang : languages) {
      if (it == hate_paths.end() || it->second.count(lang) == 0) {
        throw ValidationError("manifest: no data.hate." + domain + "." + lang);
      }
      const std::string& path = it->second.at(lang);
      if (!fs::exists(path)) {
        throw ValidationError("manifest: data path does not exist: " + path);
      }
    }
  }
  for (const std::string& atom : atoms) {
    const std::string key = data_key_for_atom(atom);
    const auto it = aux_paths.find(key);
    for (const std::string& lang : languages) {
      if (it == aux_paths.end() || it->second.count(lang) == 0) {
        throw ValidationError("manifest: no data." + key + "." + lang +
                              " (needed by combo task '" + atom + "')");
      }
      const std::string& path = it->second.at(lang);
      if (!fs::exists(path)) {
        throw ValidationError("manifest: data path does not exist: " + path);
      }
    }
  }
}

// Data loading -------------------------------------------------------------

namespace {

std::vector<tasks::TokenizedSentence> load_text_sentences(
    const std::string& path) {
  std::vector<tasks::TokenizedSentence> sentences;
  std::istringstream in(read_file(path));
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    tasks::TokenizedSentence s;
    s.tokens = strings::split_ws(line);
    if (!s.tokens.empty()) sentences.push_back(std::move(s));
  }
  if (sentences.empty()) {
    throw ValidationError("mlm: no sentences in " + path);
  }
  return sentences;
}

std::vector<tasks::TaskDataset> load_aux_atom(const ExperimentManifest& m,
                                              const std::string& atom) {
  const auto& paths = m.aux_paths.at(data_key_for_atom(atom));
  if (atom == "sentiment") {
    std::optional<tasks::TaskDataset> merged;
    for (const std::string& lang : m.languages) {
      tasks::TaskDataset d = tasks::load_sentiment(paths.at(lang), lang);
      if (merged) {
        merged->merge_language(d);
      } else {
        merged = std::move(d);
      }
    }
    return {std::move(*merged)};
  }
  std::map<std::string, std::array<std::vector<tasks::TokenizedSentence>, 3>>
      by_language;
  for (const std::string& lang : m.languages) {
    const std::string& path = paths.at(lang);
    if (atom == "ner") {
      by_language[lang][0] = tasks::load_bio_ner(path);
    } else if (atom == "mlm") {
      by_language[lang][0] = load_text_sentences(path);
    } else {  // ud, upos-only
      by_language[lang][0] = tasks::load_conllu(path);
    }
  }
  if (atom == "ner") {
    return {tasks::make_tagging_task("ner", "ner", by_language)};
  }
  if (atom == "mlm") {
    return {tasks::make_mlm_task("mlm", by_language)};
  }
  if (atom == "upos-only") {
    return {tasks::make_tagging_task("upos", "upos", by_language)};
  }
  return tasks::build_ud_bundle("ud", by_language);
}

}  // namespace

LoadedTasks load_manifest_data(const ExperimentManifest& manifest) {
  LoadedTasks out;
  for (const std::string& domain : manifest.domains) {
    std::vector<corpus::Corpus> corpora;
    for (const std::string& lang : manifest.languages) {
      corpora.push_back(corpus::read_corpus_dir(
          manifest.hate_paths.at(domain).at(lang), "hate-" + domain, lang,
          domain));
    }
    out.hate_by_domain.emplace(domain, tasks::make_hate_task(corpora));
  }
  std::set<std::string> atoms;
  for (const std::string& combo : manifest.combos) {
    for (const std::string& atom : combo_tasks(combo)) atoms.insert(atom);
  }
  for (const std::string& atom : atoms) {
    out.aux_by_atom.emplace(atom, load_aux_atom(manifest, atom));
  }
  return out;
}

// Model construction -------------------------------------------------------

model::MultiTaskModel build_run_model(
    const model::EncoderSpec& encoder, const tasks::TaskDataset& selection,
    const std::vector<const tasks::TaskDataset*>& aux,
    const std::string& source, uint64_t seed) {
  model::MultiTaskModel m(encoder, seed);
  // Vocabulary: the source language's selection train split plus every aux
  // train split. A baseline run therefore never sees target-language text.
  std::vector<std::string> texts;
  for (const auto& e :
       selection.split(source, corpus::Split::kTrain).sequences) {
    texts.push_back(e.text);
  }
  for (const tasks::TaskDataset* d : aux) {
    for (const std::string& lang : d->languages()) {
      for (const auto& s : d->split(lang, corpus::Split::kTrain).sentences) {
        texts.push_back(strings::join(s.tokens, " "));
      }
      for (const auto& e : d->split(lang, corpus::Split::kTrain).sequences) {
        texts.push_back(e.text);
      }
    }
  }
  m.induce_vocabulary(texts);
  m.attach_task(selection);
  for (const tasks::TaskDataset* d : aux) m.attach_task(*d);
  return m;
}

// Matrix execution ---------------------------------------------------------

namespace {

struct RunSpec {
  std::string domain;
  std::string combo;
  std::string source;
  uint64_t seed = 0;
  std::string run_id;
  fs::path run_dir;
};

struct RunResult {
  RunOutcome outcome;
  // target language -> macro-F1 over its test predictions.
  std::map<std::string, double> scores;
};

std::string run_hash(const ExperimentManifest& m, const RunSpec& spec) {
  const std::string key = m.canonical + "|" + spec.domain + "|" + spec.combo +
                          "|" + spec.source + "|" + std::to_string(spec.seed);
  return hash_hex(stable_hash(key));
}

bool run_is_complete(const RunSpec& spec,
                     const std::vector<std::string>& languages) {
  if (!fs::exists(spec.run_dir / "record.json")) return false;
  for (const std::string& lang : languages) {
    if (!fs::exists(spec.run_dir / "predictions" / (lang + ".tsv"))) {
      return false;
    }
  }
  return true;
}

// Gold/predicted pairs from a stored predictions TSV.
std::pair<std::vector<std::string>, std::vector<std::string>> read_predictions(
    const fs::path& path) {
  std::istringstream in(read_file(path.string()));
  std::string line;
  if (!std::getline(in, line) || !strings::starts_with(line, "id\t")) {
    throw RuntimeFailure("malformed predictions file: " + path.string());
  }
  std::vector<std::string> gold;
  std::vector<std::string> pred;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cols = strings::split(line, '\t');
    if (cols.size() != 3) {
      throw RuntimeFailure("malformed predictions file: " + path.string());
    }
    gold.push_back(cols[1]);
    pred.push_back(cols[2]);
  }
  return {std::move(gold), std::move(pred)};
}

RunResult execute_run(const ExperimentManifest& manifest,
                      const LoadedTasks& loaded, const RunSpec& spec) {
  RunResult result;
  result.outcome.run_id = spec.run_id;
  result.outcome.domain = spec.domain;
  result.outcome.combo = spec.combo;
  result.outcome.source = spec.source;
  result.outcome.seed = spec.seed;

  const tasks::TaskDataset& hate = loaded.hate_by_domain.at(spec.domain);
  const std::vector<std::string> label_space = hate.label_space;
  try {
    if (run_is_complete(spec, manifest.languages)) {
      result.outcome.from_cache = true;
      for (const std::string& lang : manifest.languages) {
        const auto [gold, pred] = read_predictions(
            spec.run_dir / "predictions" / (lang + ".tsv"));
        result.scores[lang] = metrics::macro_f1(gold, pred, label_space);
      }
      return result;
    }

    std::vector<const tasks::TaskDataset*> aux;
    for (const std::string& atom : combo_tasks(spec.combo)) {
      for (const tasks::TaskDataset& d : loaded.aux_by_atom.at(atom)) {
        aux.push_back(&d);
      }
    }
    model::MultiTaskModel m = build_run_model(manifest.encoder, hate, aux,
                                              spec.source, spec.seed);
    trainer::TrainInputs data;
    data.selection = &hate;
    data.aux = aux;
    trainer::TrainConfig config = manifest.train;
    config.source_language = spec.source;
    trainer::RunRecord record =
        manifest.aux_epochs > 0
            ? trainer::train_intermediate(m, data, manifest.aux_epochs, config,
                                          manifest.sampler, spec.seed)
            : trainer::train_joint(m, data, config, manifest.sampler,
                                   spec.seed);

    // Audit trail: which (task, language) train pools this run sampled from.
    record.config["domain"] = spec.domain;
    record.config["combo"] = spec.combo;
    record.config["matrix_run_id"] = spec.run_id;
    record.config["data_access.hate.train"] = spec.source;
    for (const tasks::TaskDataset* d : aux) {
      std::set<std::string> langs = d->languages();
      record.config["data_access." + d->name + ".train"] =
          strings::join({langs.begin(), langs.end()}, ",");
    }

    fs::create_directories(spec.run_dir);
    m.save((spec.run_dir / "model").string());
    trainer::write_predictions(spec.run_dir.string(), record);
    // record.json last: its presence marks the run complete. Plain write,
    // so a rerun after a partial failure leaves a single record.
    write_file((spec.run_dir / "record.json").string(),
               record.to_json_line() + "\n");
    for (const auto& [lang, rows] : record.predictions) {
      std::vector<std::string> gold;
      std::vector<std::string> pred;
      for (const auto& row : rows) {
        gold.push_back(row[1]);
        pred.push_back(row[2]);
      }
      result.scores[lang] = metrics::macro_f1(gold, pred, label_space);
    }
  } catch (const std::exception& e) {
    result.outcome.failed = true;
    result.outcome.diagnostic = e.what();
    result.scores.clear();
    fs::create_directories(spec.run_dir);
    write_file((spec.run_dir / "failed.txt").string(),
               std::string(e.what()) + "\n");
  }
  return result;
}

std::string sanitize_component(const std::string& name) {
  std::string out = name;
  for (char& c : out) {
    if (c == '+' ) c = '-';
  }
  return out;
}

void write_run_index(const fs::path& dir,
                     const std::vector<RunOutcome>& outcomes) {
  std::ostringstream out;
  out << "run_id\tdomain\tcombo\tsource\tseed\tstatus\tdiagnostic\n";
  for (const RunOutcome& o : outcomes) {
    std::string diag = o.diagnostic;
    for (char& c : diag) {
      if (c == '\t' || c == '\n') c = ' ';
    }
    out << o.run_id << '\t' << o.domain << '\t' << o.combo << '\t' << o.source
        << '\t' << o.seed << '\t'
        << (o.failed ? "failed" : (o.from_cache ? "cached" : "ok")) << '\t'
        << diag << '\n';
  }
  write_file((dir / "index.tsv").string(), out.str());
}

}  // namespace

MatrixResult run_matrix(const ExperimentManifest& manifest) {
  manifest.validate();
  const LoadedTasks loaded = load_manifest_data(manifest);

  std::vector<RunSpec> specs;
  for (const std::string& domain : manifest.domains) {
    for (const std::string& combo : manifest.combos) {
      for (const std::string& source : manifest.languages) {
        for (uint64_t seed : manifest.seeds) {
          RunSpec spec;
          spec.domain = domain;
          spec.combo = combo;
          spec.source = source;
          spec.seed = seed;
          spec.run_id = run_hash(manifest, spec);
          spec.run_dir = fs::path(manifest.output_dir) / "runs" / spec.run_id;
          specs.push_back(std::move(spec));
        }
      }
    }
  }

  std::vector<std::optional<RunResult>> results(specs.size());
  const size_t workers = std::min(manifest.parallelism, specs.size());
  if (workers <= 1) {
    for (size_t i = 0; i < specs.size(); ++i) {
      results[i] = execute_run(manifest, loaded, specs[i]);
    }
  } else {
    std::atomic<size_t> next{0};
    auto worker = [&]() {
      for (size_t i = next.fetch_add(1); i < specs.size();
           i = next.fetch_add(1)) {
        results[i] = execute_run(manifest, loaded, specs[i]);
      }
    };
    std::vector<std::thread> pool;
    for (size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  MatrixResult out;
  out.matrix.model_id =
      manifest.encoder.is_toy() ? "toy" : manifest.encoder.pretrained;
  out.matrix.seeds = manifest.seeds;
  // (domain, combo, source, target) -> per-seed scores in manifest order.
  std::map<std::tuple<std::string, std::string, std::string, std::string>,
           std::vector<double>>
      per_cell;
  for (size_t i = 0; i < specs.size(); ++i) {
    const RunSpec& spec = specs[i];
    const RunResult& r = *results[i];
    out.outcomes.push_back(r.outcome);
    for (const auto& [target, f1] : r.scores) {
      per_cell[{spec.domain, spec.combo, spec.source, target}].push_back(f1);
    }
  }
  for (const RunSpec& spec : specs) {
    for (const std::string& target : manifest.languages) {
      eval::CellKey key{spec.source, target, spec.domain, spec.combo};
      if (out.matrix.contains(key)) continue;
      const auto it = per_cell.find(
          std::tuple{spec.domain, spec.combo, spec.source, target});
      if (it == per_cell.end()) {
        out.gaps.insert(key);
        continue;
      }
      if (it->second.size() != manifest.seeds.size()) out.gaps.insert(key);
      out.matrix.add(key, eval::CellScores::from_seeds(it->second));
    }
  }

  const fs::path out_dir(manifest.output_dir);
  fs::create_directories(out_dir / "runs");
  write_run_index(out_dir / "runs", out.outcomes);
  fs::create_directories(out_dir / "matrices");
  for (const std::string& combo : manifest.combos) {
    eval::ScoreMatrix sub;
    sub.model_id = out.matrix.model_id;
    sub.seeds = out.matrix.seeds;
    for (const auto& [key, scores] : out.matrix.entries()) {
      if (key.combo == combo) sub.add(key, scores);
    }
    write_file(
        (out_dir / "matrices" / (sanitize_component(combo) + ".tsv")).string(),
        sub.to_tsv());
  }
  return out;
}

// Synthetic data -----------------------------------------------------------

void SyntheticSpec::validate() const {
  if (languages.size() != 2 || languages[0] == languages[1] ||
      languages[0].empty() || languages[1].empty()) {
    throw ValidationError("synthetic: exactly two distinct languages");
  }
  if (train_size < 2 || dev_size < 2 || test_size < 2) {
    throw ValidationError("synthetic: each split needs at least 2 examples");
  }
  if (tagging_size < 1) {
    throw ValidationError("synthetic: tagging_size must be >= 1");
  }
  if (noise_rate < 0.0 || noise_rate >= 1.0) {
    throw ValidationError("synthetic: noise rate must be in [0, 1)");
  }
  if (fillers_per_language < 2 || fillers_per_language > 100) {
    throw ValidationError("synthetic: fillers_per_language must be in [2, 100]");
  }
  if (triggers_per_language < 1 || triggers_per_language > 50) {
    throw ValidationError("synthetic: triggers_per_language must be in [1, 50]");
  }
  if (sentence_length < 1) {
    throw ValidationError("synthetic: sentence_length must be >= 1");
  }
  if (domain.empty()) {
    throw ValidationError("synthetic: domain must be named");
  }
}

namespace {

// Words over disjoint 13-letter alphabets: language 0 draws from a-m,
// language 1 from n-z, so the languages share no bytes at all.
std::string lexeme(size_t lang_index, size_t i) {
  const char base = lang_index == 0 ? 'a' : 'n';
  std::string w(3, base);
  for (size_t p = 0; p < 3; ++p) {
    w[2 - p] = static_cast<char>(base + i % 13);
    i /= 13;
  }
  return w;
}

std::vector<std::string> filler_lexicon(size_t lang_index, size_t count) {
  std::vector<std::string> out;
  for (size_t i = 0; i < count; ++i) out.push_back(lexeme(lang_index, i));
  return out;
}

std::vector<std::string> trigger_lexicon(size_t lang_index, size_t count) {
  std::vector<std::string> out;
  // Offset far past any filler index so the lexicons never collide.
  for (size_t i = 0; i < count; ++i) {
    out.push_back(lexeme(lang_index, 1000 + i));
  }
  return out;
}

std::vector<corpus::LabeledExample> synth_hate_split(
    const SyntheticSpec& spec, size_t lang_index, const std::string& split,
    size_t n, Rng rng) {
  const std::string& lang = spec.languages[lang_index];
  const auto fillers = filler_lexicon(lang_index, spec.fillers_per_language);
  const auto triggers = trigger_lexicon(lang_index, spec.triggers_per_language);
  std::vector<corpus::LabeledExample> out;
  for (size_t i = 0; i < n; ++i) {
    const bool hateful = i % 2 == 0;
    std::vector<std::string> tokens;
    for (size_t t = 0; t < spec.sentence_length; ++t) {
      tokens.push_back(fillers[rng.below(fillers.size())]);
    }
    if (hateful && !(spec.noise_rate > 0.0 && rng.uniform() < spec.noise_rate)) {
      const std::string trigger = triggers[rng.below(triggers.size())];
      tokens.insert(tokens.begin() + static_cast<long>(
                                        rng.below(tokens.size() + 1)),
                    trigger);
    }
    corpus::LabeledExample ex;
    ex.id = lang + "-" + split + "-" + std::to_string(i);
    ex.text = strings::join(tokens, " ");
    ex.label = std::string(hateful ? corpus::kHateful : corpus::kNonHateful);
    ex.language = lang;
    ex.domain = spec.domain;
    out.push_back(std::move(ex));
  }
  return out;
}

std::string synth_trigger_bio(const SyntheticSpec& spec, size_t lang_index,
                              Rng rng) {
  const auto fillers = filler_lexicon(lang_index, spec.fillers_per_language);
  const auto triggers = trigger_lexicon(lang_index, spec.triggers_per_language);
  std::ostringstream out;
  for (size_t i = 0; i < spec.tagging_size; ++i) {
    std::vector<std::pair<std::string, std::string>> rows;
    for (size_t t = 0; t < spec.sentence_length; ++t) {
      rows.push_back({fillers[rng.below(fillers.size())], "O"});
    }
    if (i % 2 == 0) {  // half the sentences carry a trigger to tag
      const std::string trigger = triggers[rng.below(triggers.size())];
      rows.insert(rows.begin() + static_cast<long>(
                                     rng.below(rows.size() + 1)),
                  {trigger, "B-TRIG"});
    }
    for (const auto& [token, tag] : rows) {
      out << token << '\t' << tag << '\n';
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace

void generate_synthetic(const SyntheticSpec& spec, uint64_t seed,
                        const std::string& dir) {
  spec.validate();
  const Rng master(seed);
  const char* split_names[3] = {"train", "dev", "test"};
  const size_t sizes[3] = {spec.train_size, spec.dev_size, spec.test_size};
  for (size_t li = 0; li < 2; ++li) {
    const std::string& lang = spec.languages[li];
    const fs::path hate_dir = fs::path(dir) / lang / "hate";
    fs::create_directories(hate_dir);
    for (size_t s = 0; s < 3; ++s) {
      const auto examples =
          synth_hate_split(spec, li, split_names[s], sizes[s],
                           master.fork("hate/" + lang + "/" + split_names[s]));
      corpus::write_canonical_tsv((hate_dir / (std::string(split_names[s]) +
                                               ".tsv")).string(),
                                  examples);
    }
    write_file((fs::path(dir) / lang / "trigger.bio").string(),
               synth_trigger_bio(spec, li, master.fork("trigger/" + lang)));
  }

  // A ready-to-run experiment over the generated files.
  std::ostringstream mf;
  mf << "# synthetic zero-shot transfer experiment\n";
  for (const auto& lang : spec.languages) mf << "language = " << lang << "\n";
  mf << "domain = " << spec.domain << "\n";
  mf << "combo = none\n";
  mf << "combo = ner\n";
  mf << "seed = 1\nseed = 2\nseed = 3\n";
  mf << "output_dir = out\n";
  mf << "encoder.variant = toy\n";
  mf << "encoder.layers = 1\n";
  mf << "encoder.hidden = 16\n";
  mf << "encoder.attention_heads = 2\n";
  mf << "encoder.vocab_size = 256\n";
  mf << "encoder.max_len = 24\n";
  mf << "encoder.pooling = first-token\n";
  mf << "sampler.alpha = 0.5\n";
  mf << "sampler.batch_size = 8\n";
  mf << "train.epochs = 20\n";
  mf << "train.learning_rate = 0.02\n";
  mf << "train.warmup_fraction = 0.1\n";
  for (const auto& lang : spec.languages) {
    mf << "data.hate." << spec.domain << "." << lang << " = " << lang
       << "/hate\n";
    mf << "data.ner." << lang << " = " << lang << "/trigger.bio\n";
  }
  write_file((fs::path(dir) / "manifest.txt").string(), mf.str());
}

// Reports ------------------------------------------------------------------

ReportFormat report_format_from_name(const std::string& name) {
  if (name == "md" || name == "markdown") return ReportFormat::kMarkdown;
  if (name == "tex" || name == "latex") return ReportFormat::kLatex;
  if (name == "csv") return ReportFormat::kCsv;
  throw ValidationError("unknown report format '" + name +
                        "' (expected md, tex or csv)");
}

const char* report_format_extension(ReportFormat f) {
  switch (f) {
    case ReportFormat::kMarkdown:
      return "md";
    case ReportFormat::kLatex:
      return "tex";
    default:
      return "csv";
  }
}

namespace {

struct Cell {
  std::string text;
  bool bold = false;
  stats::Marker marker = stats::Marker::kNone;
};

struct Table {
  std::string title;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string latex_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '&' || c == '%' || c == '#' || c == '_') out += '\\';
    out += c;
  }
  return out;
}

std::string render_cell(const Cell& cell, ReportFormat f) {
  std::string text = f == ReportFormat::kLatex ? latex_escape(cell.text)
                                               : cell.text;
  if (cell.bold) {
    switch (f) {
      case ReportFormat::kMarkdown:
        text = "**" + text + "**";
        break;
      case ReportFormat::kLatex:
        text = "\\textbf{" + text + "}";
        break;
      case ReportFormat::kCsv:
        text += "*";
        break;
    }
  }
  switch (cell.marker) {
    case stats::Marker::kNone:
      break;
    case stats::Marker::kDagger:
      text += f == ReportFormat::kLatex ? "$\\dagger$" : "\u2020";
      break;
    case stats::Marker::kDoubleDagger:
      text += f == ReportFormat::kLatex ? "$\\ddagger$" : "\u2021";
      break;
  }
  return text;
}

void render_table(std::ostringstream& out, const Table& t, ReportFormat f) {
  switch (f) {
    case ReportFormat::kMarkdown: {
      out << "## " << t.title << "\n\n|";
      for (const auto& c : t.columns) out << " " << c << " |";
      out << "\n|";
      for (size_t i = 0; i < t.columns.size(); ++i) out << " --- |";
      out << "\n";
      for (const auto& row : t.rows) {
        out << "|";
        for (const Cell& cell : row) out << " " << render_cell(cell, f) << " |";
        out << "\n";
      }
      out << "\n";
      break;
    }
    case ReportFormat::kLatex: {
      out << "% " << t.title << "\n\\begin{tabular}{l";
      for (size_t i = 1; i < t.columns.size(); ++i) out << "r";
      out << "}\n\\toprule\n";
      for (size_t i = 0; i < t.columns.size(); ++i) {
        if (i > 0) out << " & ";
        out << latex_escape(t.columns[i]);
      }
      out << " \\\\\n\\midrule\n";
      for (const auto& row : t.rows) {
        for (size_t i = 0; i < row.size(); ++i) {
          if (i > 0) out << " & ";
          out << render_cell(row[i], f);
        }
        out << " \\\\\n";
      }
      out << "\\bottomrule\n\\end{tabular}\n\n";
      break;
    }
    case ReportFormat::kCsv: {
      out << "# " << t.title << "\n";
      out << strings::join(t.columns, ",") << "\n";
      for (const auto& row : t.rows) {
        for (size_t i = 0; i < row.size(); ++i) {
          if (i > 0) out << ",";
          out << render_cell(row[i], f);
        }
        out << "\n";
      }
      out << "\n";
      break;
    }
  }
}

std::string signed_one_decimal(double v) {
  const std::string s = format_one_decimal(v);
  return s.front() == '-' ? s : "+" + s;
}

// All (domain, combo) blocks present in a matrix, sorted.
std::vector<std::pair<std::string, std::string>> matrix_blocks(
    const eval::ScoreMatrix& matrix) {
  std::set<std::pair<std::string, std::string>> blocks;
  for (const auto& [key, scores] : matrix.entries()) {
    blocks.insert({key.domain, key.combo});
  }
  return {blocks.begin(), blocks.end()};
}

Table score_block_table(const eval::ScoreMatrix& matrix,
                        const std::set<eval::CellKey>* flagged,
                        const std::string& domain, const std::string& combo) {
  const std::set<std::string> langs = matrix.languages();
  Table t;
  t.title = "Macro-F1, domain " + domain + ", tasks " + combo;
  t.columns.push_back("source");
  for (const auto& lang : langs) t.columns.push_back(lang);
  for (const auto& source : langs) {
    std::vector<Cell> row;
    row.push_back({source});
    for (const auto& target : langs) {
      const eval::CellKey key{source, target, domain, combo};
      Cell cell;
      if (matrix.contains(key)) {
        cell.text = format_one_decimal(matrix.at(key).mean);
        cell.bold = flagged != nullptr && flagged->count(key) > 0;
      } else {
        cell.text = "-";
      }
      row.push_back(cell);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table delta_block_table(const eval::DeltaTable& deltas,
                        const std::set<std::string>& langs,
                        const std::string& domain, const std::string& combo) {
  Table t;
  t.title = "Delta vs " + deltas.baseline_combo + ", domain " + domain +
            ", tasks " + combo;
  t.columns.push_back("source");
  for (const auto& lang : langs) t.columns.push_back(lang);
  for (const auto& source : langs) {
    std::vector<Cell> row;
    row.push_back({source});
    for (const auto& target : langs) {
      const eval::CellKey key{source, target, domain, combo};
      Cell cell;
      const auto it = deltas.cells.find(key);
      if (it != deltas.cells.end()) {
        cell.text = signed_one_decimal(it->second.delta);
        cell.marker = it->second.marker;
      } else {
        cell.text = "-";
      }
      row.push_back(cell);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace

std::string render_report(const ReportInputs& inputs, ReportFormat format) {
  std::ostringstream out;
  const std::string title = "Cross-lingual transfer report";
  switch (format) {
    case ReportFormat::kMarkdown:
      out << "# " << title << "\n\n";
      break;
    case ReportFormat::kLatex:
      out << "% " << title << "\n\n";
      break;
    case ReportFormat::kCsv:
      out << "# " << title << "\n\n";
      break;
  }

  if (inputs.matrix != nullptr) {
    for (const auto& [domain, combo] : matrix_blocks(*inputs.matrix)) {
      render_table(out,
                   score_block_table(*inputs.matrix, inputs.flagged, domain,
                                     combo),
                   format);
    }
    // Aggregates need every block complete; skip them quietly otherwise.
    try {
      const eval::AggregateView agg = aggregate_mono_cross(*inputs.matrix);
      Table t;
      t.title = "Aggregated macro-F1";
      t.columns = {"domain", "tasks", "mono", "cross"};
      for (const auto& [key, mc] : agg.entries()) {
        t.rows.push_back({{key.first},
                          {key.second},
                          {format_one_decimal(mc.mono)},
                          {format_one_decimal(mc.cross)}});
      }
      render_table(out, t, format);
    } catch (const std::exception&) {
    }
  }

  if (inputs.deltas != nullptr && inputs.matrix != nullptr) {
    std::set<std::pair<std::string, std::string>> blocks;
    for (const auto& [key, cell] : inputs.deltas->cells) {
      blocks.insert({key.domain, key.combo});
    }
    for (const auto& [domain, combo] : blocks) {
      render_table(out,
                   delta_block_table(*inputs.deltas,
                                     inputs.matrix->languages(), domain,
                                     combo),
                   format);
    }
    Table t;
    t.title = "Aggregated deltas vs " + inputs.deltas->baseline_combo;
    t.columns = {"domain", "tasks", "mono", "cross"};
    for (const auto& [key, mc] : inputs.deltas->aggregate) {
      t.rows.push_back({{key.first},
                        {key.second},
                        {signed_one_decimal(mc.mono)},
                        {signed_one_decimal(mc.cross)}});
    }
    render_table(out, t, format);
  }

  if (inputs.mono_cross != nullptr) {
    const auto& mc = *inputs.mono_cross;
    Table t;
    t.title = "Functionality classes, cross minus mono";
    t.columns.push_back("class");
    for (const auto& domain : mc.domains) t.columns.push_back(domain);
    t.columns.push_back("combined");
    for (const auto& cls : mc.classes) {
      std::vector<Cell> row;
      row.push_back({cls});
      for (const auto& domain : mc.domains) {
        row.push_back({signed_one_decimal(mc.by_domain.at(domain).at(cls))});
      }
      row.push_back({signed_one_decimal(mc.combined.at(cls))});
      t.rows.push_back(std::move(row));
    }
    render_table(out, t, format);
  }

  if (inputs.aux_effect != nullptr) {
    const auto& ae = *inputs.aux_effect;
    Table t;
    t.title = "Relative aux effect by functionality class";
    t.columns.push_back("class");
    for (const auto& task : ae.tasks) t.columns.push_back(task);
    for (const auto& cls : ae.classes) {
      std::vector<Cell> row;
      row.push_back({cls});
      for (const auto& task : ae.tasks) {
        const double v = ae.effect.at(task).at(cls);
        row.push_back({std::isnan(v) ? std::string("n/a")
                                     : signed_one_decimal(v)});
      }
      t.rows.push_back(std::move(row));
    }
    render_table(out, t, format);
  }

  return out.str();
}

std::vector<std::string> emit_report(const ReportInputs& inputs,
                                     const std::string& dir,
                                     const std::string& stem) {
  fs::create_directories(dir);
  std::vector<std::string> paths;
  for (ReportFormat f : {ReportFormat::kMarkdown, ReportFormat::kLatex,
                         ReportFormat::kCsv}) {
    const std::string path =
        (fs::path(dir) / (stem + "." + report_format_extension(f))).string();
    write_file(path, render_report(inputs, f));
    paths.push_back(path);
  }
  return paths;
}

}  // namespace xlt::runner
