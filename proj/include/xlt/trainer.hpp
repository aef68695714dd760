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
//
// Joint multi-task fine-tuning: smoothed multinomial dataset sampling,
// per-epoch dev selection on the target task, seed-controlled streams.

#ifndef XLT_TRAINER_HPP
#define XLT_TRAINER_HPP

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "xlt/model.hpp"
#include "xlt/tasks.hpp"

namespace xlt::trainer {

struct SamplerConfig {
  double alpha = 0.5;           // smoothing exponent in (0, 1]
  size_t batch_size = 16;
  size_t batches_per_epoch = 0;  // 0 -> ceil(total instances / batch size)
  uint64_t seed = 0;

  void validate() const;
};

// w_i = N_i^alpha / sum_j N_j^alpha.
std::vector<double> smooth_sample_weights(const std::vector<size_t>& sizes,
                                          double alpha);

// Multinomial dataset pick plus an epoch-local without-replacement cursor per
// dataset, reshuffled on exhaustion.
class BatchSampler {
 public:
  BatchSampler(const std::vector<size_t>& sizes, const SamplerConfig& config);
  // Explicit weights (must sum to 1); the smoothed variant delegates here.
  BatchSampler(const std::vector<size_t>& sizes, std::vector<double> weights,
               const SamplerConfig& config);

  struct Draw {
    size_t dataset = 0;
    std::vector<size_t> indices;
  };
  Draw next();

  const std::vector<double>& weights() const { return weights_; }

 private:
  struct Cursor {
    std::vector<size_t> order;
    size_t at = 0;
  };
  std::vector<double> weights_;
  std::vector<Cursor> cursors_;
  size_t batch_size_;
  Rng rng_;
};

struct TrainConfig {
  size_t epochs = 20;
  std::string selection_task;     // dev macro-F1 of this task picks the epoch
  std::string source_language;    // the only language the selection task
                                  // trains on
  double learning_rate = 2e-3;    // non-paper defaults, recorded per run
  double warmup_fraction = 0.1;

  void validate() const;
};

struct EpochMetric {
  std::string phase;         // "main" or "aux"
  size_t epoch = 0;          // 1-based within the phase
  double dev_macro_f1 = 0.0; // NaN when the phase has no selection dev set
  double mean_train_loss = 0.0;
};

struct RunRecord {
  std::string run_id;
  std::map<std::string, std::string> config;
  std::vector<EpochMetric> epochs;
  size_t selected_epoch = 0;        // 1-based, in the "main" phase
  double selected_dev_metric = 0.0;
  // target language -> rows of (id, gold, predicted) over that test split
  std::map<std::string, std::vector<std::array<std::string, 3>>> predictions;
  double wall_seconds = 0.0;

  std::string to_json_line() const;
};

// The datasets one run trains on. The selection dataset may hold several
// languages; only the source language's train/dev splits are ever used for
// training and selection, while every language's test split is predicted.
struct TrainInputs {
  const tasks::TaskDataset* selection = nullptr;
  std::vector<const tasks::TaskDataset*> aux;
};

// One (language, instance) pool entry; pools are what the sampler indexes.
struct PoolEntry {
  std::string language;
  model::InstanceRef ref;
};

// Flattened training pools, selection first then aux in input order. The
// selection pool is restricted to the source language; aux pools span all
// their languages (sorted).
std::vector<std::vector<PoolEntry>> build_training_pools(
    const TrainInputs& data, const std::string& source_language);

// Joint fine-tuning of an already-attached model. Restores the best epoch by
// selection-task dev macro-F1 (ties -> earliest) before predicting test
// splits. Aborts with (epoch, task, batch) context on non-finite loss.
RunRecord train_joint(model::MultiTaskModel& m, const TrainInputs& data,
                      const TrainConfig& config, const SamplerConfig& sampler,
                      uint64_t seed);

// Two-phase variant: aux tasks first (no selection, final state kept), then
// the selection task alone. Both phases appear in the record.
RunRecord train_intermediate(model::MultiTaskModel& m, const TrainInputs& data,
                             size_t aux_epochs, const TrainConfig& config,
                             const SamplerConfig& sampler, uint64_t seed);

// Serialization: records as JSON lines; predictions as one TSV per target
// language under <dir>/predictions/.
void append_run_record(const std::string& path, const RunRecord& record);
void write_predictions(const std::string& run_dir, const RunRecord& record);

}  // namespace xlt::trainer

#endif  // XLT_TRAINER_HPP
