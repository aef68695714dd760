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

#include "xlt/metrics.hpp"

#include <unordered_map>

#include "xlt/common.hpp"

namespace xlt::metrics {

std::vector<ClassScore> per_class_scores(
    const std::vector<std::string>& gold,
    const std::vector<std::string>& predicted,
    const std::vector<std::string>& label_space) {
  if (gold.size() != predicted.size()) {
    throw ValidationError("per_class_scores: gold/predicted length mismatch (" +
                          std::to_string(gold.size()) + " vs " +
                          std::to_string(predicted.size()) + ")");
  }
  if (gold.empty()) throw ValidationError("per_class_scores: empty input");
  if (label_space.empty()) {
    throw ValidationError("per_class_scores: empty label space");
  }

  std::unordered_map<std::string, size_t> tp, fp, fn;
  for (size_t i = 0; i < gold.size(); ++i) {
    if (gold[i] == predicted[i]) {
      ++tp[gold[i]];
    } else {
      ++fn[gold[i]];
      ++fp[predicted[i]];
    }
  }

  std::vector<ClassScore> out;
  out.reserve(label_space.size());
  for (const auto& label : label_space) {
    ClassScore cs;
    cs.label = label;
    const double t = static_cast<double>(tp[label]);
    const double p_denom = t + static_cast<double>(fp[label]);
    const double r_denom = t + static_cast<double>(fn[label]);
    cs.predicted_count = static_cast<size_t>(p_denom);
    cs.gold_count = static_cast<size_t>(r_denom);
    cs.precision = p_denom > 0.0 ? t / p_denom : 0.0;
    cs.recall = r_denom > 0.0 ? t / r_denom : 0.0;
    cs.f1 = (cs.precision + cs.recall) > 0.0
                ? 2.0 * cs.precision * cs.recall / (cs.precision + cs.recall)
                : 0.0;
    out.push_back(std::move(cs));
  }
  return out;
}

double macro_f1(const std::vector<std::string>& gold,
                const std::vector<std::string>& predicted,
                const std::vector<std::string>& label_space) {
  const auto scores = per_class_scores(gold, predicted, label_space);
  double sum = 0.0;
  for (const auto& cs : scores) sum += cs.f1;
  return 100.0 * sum / static_cast<double>(scores.size());
}

double accuracy(const std::vector<std::string>& gold,
                const std::vector<std::string>& predicted) {
  if (gold.size() != predicted.size()) {
    throw ValidationError("accuracy: gold/predicted length mismatch");
  }
  if (gold.empty()) throw ValidationError("accuracy: empty input");
  size_t hits = 0;
  for (size_t i = 0; i < gold.size(); ++i) {
    if (gold[i] == predicted[i]) ++hits;
  }
  return 100.0 * static_cast<double>(hits) / static_cast<double>(gold.size());
}

}  // namespace xlt::metrics
