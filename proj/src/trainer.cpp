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

#include "xlt/trainer.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "xlt/metrics.hpp"
#include "xlt/nn.hpp"

namespace xlt::trainer {

namespace fs = std::filesystem;
using nlohmann::json;

void SamplerConfig::validate() const {
  if (!(alpha > 0.0) || alpha > 1.0) {
    throw ValidationError("sampler: alpha must be in (0, 1], got " +
                          std::to_string(alpha));
  }
  if (batch_size < 1) {
    throw ValidationError("sampler: batch size must be >= 1");
  }
}

void TrainConfig::validate() const {
  if (epochs == 0) {
    throw ValidationError("train: epochs must be >= 1");
  }
  if (selection_task.empty()) {
    throw ValidationError("train: selection task must be named");
  }
  if (source_language.empty()) {
    throw ValidationError("train: source language must be set");
  }
  if (!(learning_rate > 0.0)) {
    throw ValidationError("train: learning rate must be positive");
  }
  if (warmup_fraction < 0.0 || warmup_fraction > 1.0) {
    throw ValidationError("train: warmup fraction must be in [0, 1]");
  }
}

std::vector<double> smooth_sample_weights(const std::vector<size_t>& sizes,
                                          double alpha) {
  if (sizes.empty()) {
    throw ValidationError("smooth_sample_weights: no dataset sizes");
  }
  if (!(alpha > 0.0) || alpha > 1.0) {
    throw ValidationError("smooth_sample_weights: alpha must be in (0, 1]");
  }
  std::vector<double> weights(sizes.size());
  double total = 0.0;
  for (size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] == 0) {
      throw ValidationError("smooth_sample_weights: dataset " +
                            std::to_string(i) + " is empty");
    }
    weights[i] = std::pow(static_cast<double>(sizes[i]), alpha);
    total += weights[i];
  }
  for (double& w : weights) {
    w /= total;
  }
  return weights;
}

BatchSampler::BatchSampler(const std::vector<size_t>& sizes,
                           const SamplerConfig& config)
    : BatchSampler(sizes, smooth_sample_weights(sizes, config.alpha), config) {}

BatchSampler::BatchSampler(const std::vector<size_t>& sizes,
                           std::vector<double> weights,
                           const SamplerConfig& config)
    : weights_(std::move(weights)),
      batch_size_(config.batch_size),
      rng_(config.seed) {
  config.validate();
  if (weights_.size() != sizes.size()) {
    throw ValidationError("sampler: weight count does not match dataset count");
  }
  cursors_.resize(sizes.size());
  for (size_t d = 0; d < sizes.size(); ++d) {
    cursors_[d].order.resize(sizes[d]);
    for (size_t i = 0; i < sizes[d]; ++i) {
      cursors_[d].order[i] = i;
    }
    rng_.shuffle(cursors_[d].order);
  }
}

BatchSampler::Draw BatchSampler::next() {
  Draw draw;
  draw.dataset = rng_.multinomial(weights_);
  Cursor& cur = cursors_[draw.dataset];
  draw.indices.reserve(batch_size_);
  for (size_t k = 0; k < batch_size_; ++k) {
    if (cur.at == cur.order.size()) {
      rng_.shuffle(cur.order);
      cur.at = 0;
    }
    draw.indices.push_back(cur.order[cur.at++]);
  }
  return draw;
}

std::vector<std::vector<PoolEntry>> build_training_pools(
    const TrainInputs& data, const std::string& source_language) {
  if (data.selection == nullptr) {
    throw ValidationError("train: no selection dataset");
  }
  if (data.selection->kind != tasks::TaskKind::kSequenceClassification) {
    throw ValidationError("train: selection task '" + data.selection->name +
                          "' must be sequence classification");
  }
  if (!data.selection->by_language.count(source_language)) {
    throw ValidationError(
        "train: selection task '" + data.selection->name +
        "' has no data for source language '" + source_language + "'");
  }
  std::vector<std::vector<PoolEntry>> pools;
  {
    std::vector<PoolEntry> pool;
    const auto& split =
        data.selection->split(source_language, corpus::Split::kTrain);
    for (const auto& e : split.sequences) {
      PoolEntry entry;
      entry.language = source_language;
      entry.ref.sequence = &e;
      pool.push_back(entry);
    }
    pools.push_back(std::move(pool));
  }
  for (const tasks::TaskDataset* aux : data.aux) {
    std::vector<PoolEntry> pool;
    for (const std::string& lang : aux->languages()) {
      const auto& split = aux->split(lang, corpus::Split::kTrain);
      if (aux->kind == tasks::TaskKind::kSequenceClassification) {
        for (const auto& e : split.sequences) {
          PoolEntry entry;
          entry.language = lang;
          entry.ref.sequence = &e;
          pool.push_back(entry);
        }
      } else {
        for (const auto& s : split.sentences) {
          PoolEntry entry;
          entry.language = lang;
          entry.ref.sentence = &s;
          pool.push_back(entry);
        }
      }
    }
    pools.push_back(std::move(pool));
  }
  return pools;
}

namespace {

double dev_macro_f1(const model::MultiTaskModel& m,
                    const tasks::TaskDataset& selection,
                    const std::string& language, corpus::Split split) {
  const auto& examples = selection.split(language, split).sequences;
  if (examples.empty()) {
    throw ValidationError("train: selection task '" + selection.name +
                          "' has an empty " +
                          std::string(corpus::split_name(split)) +
                          " split for '" + language + "'");
  }
  std::vector<std::string> gold;
  std::vector<std::string> pred;
  for (const auto& e : examples) {
    gold.push_back(e.label);
    pred.push_back(m.predict_sequence_label(selection.name, e.text));
  }
  return metrics::macro_f1(gold, pred, selection.label_space);
}

// Runs `epochs` of mixed-batch steps over the given pools. Appends per-epoch
// metrics to the record; when `selection` is non-null, evaluates its dev
// macro-F1 after each epoch and tracks the best state.
struct PhaseResult {
  size_t best_epoch = 0;
  double best_metric = 0.0;
  std::map<std::string, nn::Matrix> best_state;
};

PhaseResult run_phase(model::MultiTaskModel& m, const std::string& phase,
                      const std::vector<std::vector<PoolEntry>>& pools,
                      const std::vector<std::string>& names, size_t epochs,
                      const TrainConfig& config, const SamplerConfig& sampler,
                      uint64_t seed, const tasks::TaskDataset* selection,
                      RunRecord& record) {
  std::vector<size_t> sizes;
  size_t total_instances = 0;
  for (size_t d = 0; d < pools.size(); ++d) {
    if (pools[d].empty()) {
      throw ValidationError("train: dataset '" + names[d] +
                            "' has no training instances");
    }
    sizes.push_back(pools[d].size());
    total_instances += pools[d].size();
  }
  SamplerConfig local = sampler;
  local.validate();
  local.seed = seed ^ stable_hash("sampler/" + phase);
  if (local.batches_per_epoch == 0) {
    local.batches_per_epoch =
        (total_instances + local.batch_size - 1) / local.batch_size;
  }
  BatchSampler batches(sizes, local);
  Rng mlm_rng(seed ^ stable_hash("mlm/" + phase));
  nn::AdamConfig adam_config;
  adam_config.lr = config.learning_rate;
  nn::Adam adam(adam_config);
  auto params = m.parameters();
  const size_t total_steps = epochs * local.batches_per_epoch;
  const size_t warmup = static_cast<size_t>(
      std::llround(config.warmup_fraction * static_cast<double>(total_steps)));
  size_t global_step = 0;

  PhaseResult result;
  result.best_metric = -1.0;
  for (size_t epoch = 1; epoch <= epochs; ++epoch) {
    double loss_sum = 0.0;
    for (size_t b = 1; b <= local.batches_per_epoch; ++b) {
      BatchSampler::Draw draw = batches.next();
      std::vector<model::InstanceRef> batch;
      batch.reserve(draw.indices.size());
      for (size_t idx : draw.indices) {
        batch.push_back(pools[draw.dataset][idx].ref);
      }
      nn::Graph g;
      nn::Node* loss = m.batch_loss(g, names[draw.dataset], batch, &mlm_rng);
      const double value = loss->value(0, 0);
      if (!std::isfinite(value)) {
        throw RuntimeFailure("train: non-finite loss at epoch " +
                             std::to_string(epoch) + ", task '" +
                             names[draw.dataset] + "', batch " +
                             std::to_string(b));
      }
      g.backward(loss);
      adam.step(params, nn::warmup_decay_scale(global_step, warmup,
                                               total_steps));
      ++global_step;
      loss_sum += value;
    }
    EpochMetric metric;
    metric.phase = phase;
    metric.epoch = epoch;
    metric.mean_train_loss =
        loss_sum / static_cast<double>(local.batches_per_epoch);
    if (selection != nullptr) {
      metric.dev_macro_f1 = dev_macro_f1(m, *selection, config.source_language,
                                         corpus::Split::kDev);
      if (metric.dev_macro_f1 > result.best_metric) {
        result.best_metric = metric.dev_macro_f1;
        result.best_epoch = epoch;
        result.best_state = m.state();
      }
    } else {
      metric.dev_macro_f1 = std::nan("");
    }
    record.epochs.push_back(metric);
  }
  record.config["batches_per_epoch." + phase] =
      std::to_string(local.batches_per_epoch);
  return result;
}

void snapshot_config(RunRecord& record, const TrainInputs& data,
                     const TrainConfig& config, const SamplerConfig& sampler,
                     uint64_t seed) {
  record.config["selection_task"] = config.selection_task;
  record.config["source_language"] = config.source_language;
  record.config["epochs"] = std::to_string(config.epochs);
  record.config["alpha"] = std::to_string(sampler.alpha);
  record.config["batch_size"] = std::to_string(sampler.batch_size);
  record.config["seed"] = std::to_string(seed);
  record.config["learning_rate"] = std::to_string(config.learning_rate);
  record.config["warmup_fraction"] = std::to_string(config.warmup_fraction);
  // Not taken from the paper; it names only the toolkit defaults.
  record.config["optimizer"] =
      "adam with linear warmup-decay (non-paper default)";
  std::vector<std::string> names = {data.selection->name};
  for (const auto* aux : data.aux) {
    names.push_back(aux->name);
  }
  record.config["tasks"] = strings::join(names, ",");
}

void predict_test_splits(model::MultiTaskModel& m, const TrainInputs& data,
                         RunRecord& record) {
  for (const std::string& lang : data.selection->languages()) {
    const auto& split = data.selection->split(lang, corpus::Split::kTest);
    std::vector<std::array<std::string, 3>> rows;
    rows.reserve(split.sequences.size());
    for (const auto& e : split.sequences) {
      rows.push_back({e.id, e.label,
                      m.predict_sequence_label(data.selection->name, e.text)});
    }
    record.predictions[lang] = std::move(rows);
  }
}

}  // namespace

RunRecord train_joint(model::MultiTaskModel& m, const TrainInputs& data,
                      const TrainConfig& config, const SamplerConfig& sampler,
                      uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  config.validate();
  if (data.selection == nullptr ||
      data.selection->name != config.selection_task) {
    throw ValidationError("train: selection dataset must match task '" +
                          config.selection_task + "'");
  }
  if (!m.has_task(config.selection_task)) {
    throw ValidationError("train: model lacks selection task '" +
                          config.selection_task + "'");
  }
  for (const auto* aux : data.aux) {
    if (!m.has_task(aux->name)) {
      throw ValidationError("train: model lacks aux task '" + aux->name + "'");
    }
  }
  auto pools = build_training_pools(data, config.source_language);
  std::vector<std::string> names = {data.selection->name};
  for (const auto* aux : data.aux) {
    names.push_back(aux->name);
  }

  RunRecord record;
  record.run_id = config.selection_task + "-" + config.source_language +
                  "-s" + std::to_string(seed);
  snapshot_config(record, data, config, sampler, seed);

  PhaseResult main = run_phase(m, "main", pools, names, config.epochs, config,
                               sampler, seed, data.selection, record);
  if (main.best_epoch == 0) {
    throw RuntimeFailure("train: no epoch produced a dev metric");
  }
  m.set_state(main.best_state);
  record.selected_epoch = main.best_epoch;
  record.selected_dev_metric = main.best_metric;
  predict_test_splits(m, data, record);
  record.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return record;
}

RunRecord train_intermediate(model::MultiTaskModel& m, const TrainInputs& data,
                             size_t aux_epochs, const TrainConfig& config,
                             const SamplerConfig& sampler, uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  config.validate();
  if (data.selection == nullptr ||
      data.selection->name != config.selection_task) {
    throw ValidationError("train: selection dataset must match task '" +
                          config.selection_task + "'");
  }
  RunRecord record;
  record.run_id = config.selection_task + "-" + config.source_language +
                  "-int-s" + std::to_string(seed);
  snapshot_config(record, data, config, sampler, seed);
  record.config["aux_epochs"] = std::to_string(aux_epochs);
  record.config["phases"] = "aux,main";

  if (aux_epochs > 0 && !data.aux.empty()) {
    auto pools = build_training_pools(data, config.source_language);
    pools.erase(pools.begin());  // drop the selection pool for the aux phase
    std::vector<std::string> names;
    for (const auto* aux : data.aux) {
      names.push_back(aux->name);
    }
    run_phase(m, "aux", pools, names, aux_epochs, config, sampler, seed,
              nullptr, record);
  }

  TrainInputs main_only;
  main_only.selection = data.selection;
  auto pools = build_training_pools(main_only, config.source_language);
  std::vector<std::string> names = {data.selection->name};
  PhaseResult main = run_phase(m, "main", pools, names, config.epochs, config,
                               sampler, seed, data.selection, record);
  if (main.best_epoch == 0) {
    throw RuntimeFailure("train: no epoch produced a dev metric");
  }
  m.set_state(main.best_state);
  record.selected_epoch = main.best_epoch;
  record.selected_dev_metric = main.best_metric;
  predict_test_splits(m, data, record);
  record.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return record;
}

std::string RunRecord::to_json_line() const {
  json j;
  j["run_id"] = run_id;
  j["config"] = config;
  j["epochs"] = json::array();
  for (const EpochMetric& e : epochs) {
    json je;
    je["phase"] = e.phase;
    je["epoch"] = e.epoch;
    if (std::isfinite(e.dev_macro_f1)) {
      je["dev_macro_f1"] = e.dev_macro_f1;
    } else {
      je["dev_macro_f1"] = nullptr;
    }
    je["mean_train_loss"] = e.mean_train_loss;
    j["epochs"].push_back(je);
  }
  j["selected_epoch"] = selected_epoch;
  j["selected_dev_metric"] = selected_dev_metric;
  json counts;
  for (const auto& [lang, rows] : predictions) {
    counts[lang] = rows.size();
  }
  j["prediction_counts"] = counts;
  j["wall_seconds"] = wall_seconds;
  return j.dump();
}

void append_run_record(const std::string& path, const RunRecord& record) {
  fs::create_directories(fs::path(path).parent_path());
  std::ofstream out(path, std::ios::app);
  if (!out) {
    throw RuntimeFailure("cannot open run record file: " + path);
  }
  out << record.to_json_line() << "\n";
}

void write_predictions(const std::string& run_dir, const RunRecord& record) {
  const fs::path dir = fs::path(run_dir) / "predictions";
  fs::create_directories(dir);
  for (const auto& [lang, rows] : record.predictions) {
    std::ostringstream out;
    out << "id\tgold\tpredicted\n";
    for (const auto& row : rows) {
      out << row[0] << '\t' << row[1] << '\t' << row[2] << '\n';
    }
    write_file((dir / (lang + ".tsv")).string(), out.str());
  }
}

}  // namespace xlt::trainer
