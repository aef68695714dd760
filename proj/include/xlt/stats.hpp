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

#ifndef XLT_STATS_HPP
#define XLT_STATS_HPP

#include <string>
#include <vector>

namespace xlt::stats {

double mean(const std::vector<double>& xs);
double sample_variance(const std::vector<double>& xs);  // n-1 denominator

// Two-sample Kolmogorov-Smirnov statistic: sup |ECDF_a - ECDF_b|.
double ks_statistic(const std::vector<double>& sample_a,
                    const std::vector<double>& sample_b);

// Asymptotic two-sided p-value: Kolmogorov tail at d*sqrt(na*nb/(na+nb)).
double ks_two_sample_pvalue(double statistic, size_t n_a, size_t n_b);

// Tail of the limiting Kolmogorov distribution, Q(lambda) in [0,1].
double kolmogorov_tail(double lambda);

// Regularized incomplete beta I_x(a, b); continued-fraction evaluation.
double regularized_incomplete_beta(double a, double b, double x);

// CDF of Student's t with nu degrees of freedom.
double student_t_cdf(double t, double nu);

enum class TailDirection {
  kALess,    // alternative: mean(a) < mean(b)
  kAGreater  // alternative: mean(a) > mean(b)
};

// Two-sample pooled-variance (Student) t-test, one-sided.
// Degenerate variance: equal means -> 0.5, otherwise 0 or 1 by direction.
double one_sided_t_test(const std::vector<double>& scores_a,
                        const std::vector<double>& scores_b,
                        TailDirection direction);

enum class Marker { kNone, kDagger, kDoubleDagger };

// p < 0.01 -> double dagger, p < 0.05 -> dagger, else none.
Marker significance_marker(double p);

std::string marker_symbol(Marker m);  // "", "†", "‡"

}  // namespace xlt::stats

#endif  // XLT_STATS_HPP
