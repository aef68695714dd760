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

#ifndef XLT_METRICS_HPP
#define XLT_METRICS_HPP

#include <string>
#include <vector>

namespace xlt::metrics {

struct ClassScore {
  std::string label;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  size_t gold_count = 0;
  size_t predicted_count = 0;
};

// Unweighted mean of per-class F1 over the label space, on a 0-100 scale.
// A class with neither gold nor predicted instances contributes F1 = 0.
double macro_f1(const std::vector<std::string>& gold,
                const std::vector<std::string>& predicted,
                const std::vector<std::string>& label_space);

std::vector<ClassScore> per_class_scores(
    const std::vector<std::string>& gold,
    const std::vector<std::string>& predicted,
    const std::vector<std::string>& label_space);

// Fraction of exact matches, 0-100.
double accuracy(const std::vector<std::string>& gold,
                const std::vector<std::string>& predicted);

}  // namespace xlt::metrics

#endif  // XLT_METRICS_HPP
