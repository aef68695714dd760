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

#include "xlt/stats.hpp"

#include <algorithm>
#include <cmath>

#include "xlt/common.hpp"

namespace xlt::stats {

double mean(const std::vector<double>& xs) {
  if (xs.empty()) throw ValidationError("mean of empty sample");
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double sample_variance(const std::vector<double>& xs) {
  if (xs.size() < 2) throw ValidationError("variance needs >= 2 values");
  const double m = mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return s / static_cast<double>(xs.size() - 1);
}

double ks_statistic(const std::vector<double>& sample_a,
                    const std::vector<double>& sample_b) {
  if (sample_a.empty() || sample_b.empty()) {
    throw ValidationError("ks_statistic: empty sample");
  }
  std::vector<double> a = sample_a;
  std::vector<double> b = sample_b;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  size_t i = 0;
  size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na -
                              static_cast<double>(j) / nb));
  }
  return d;
}

double kolmogorov_tail(double lambda) {
  if (lambda <= 0.0) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 101; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += sign * term;
    if (term < 1e-16) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

double ks_two_sample_pvalue(double statistic, size_t n_a, size_t n_b) {
  if (statistic < 0.0 || statistic > 1.0) {
    throw ValidationError("ks_two_sample_pvalue: statistic outside [0,1]");
  }
  if (n_a < 1 || n_b < 1) {
    throw ValidationError("ks_two_sample_pvalue: sample sizes must be >= 1");
  }
  const double na = static_cast<double>(n_a);
  const double nb = static_cast<double>(n_b);
  const double effective = std::sqrt(na * nb / (na + nb));
  return kolmogorov_tail(statistic * effective);
}

namespace {

// Continued fraction for the incomplete beta (Lentz's method).
double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 3e-16;
  constexpr double kFpMin = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (x < 0.0 || x > 1.0) {
    throw ValidationError("incomplete beta: x outside [0,1]");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) -
                          std::lgamma(b) + a * std::log(x) +
                          b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * betacf(a, b, x) / a;
  }
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double nu) {
  if (nu <= 0.0) throw ValidationError("student_t_cdf: nu must be positive");
  if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
  const double x = nu / (nu + t * t);
  const double tail = 0.5 * regularized_incomplete_beta(nu / 2.0, 0.5, x);
  return t >= 0.0 ? 1.0 - tail : tail;
}

double one_sided_t_test(const std::vector<double>& scores_a,
                        const std::vector<double>& scores_b,
                        TailDirection direction) {
  if (scores_a.size() < 2 || scores_b.size() < 2) {
    throw ValidationError("one_sided_t_test: need >= 2 scores per side");
  }
  const double na = static_cast<double>(scores_a.size());
  const double nb = static_cast<double>(scores_b.size());
  const double ma = mean(scores_a);
  const double mb = mean(scores_b);
  const double va = sample_variance(scores_a);
  const double vb = sample_variance(scores_b);
  const double df = na + nb - 2.0;
  const double pooled = ((na - 1.0) * va + (nb - 1.0) * vb) / df;

  if (pooled <= 0.0) {
    if (ma == mb) return 0.5;
    const bool favorable =
        (direction == TailDirection::kALess) ? (ma < mb) : (ma > mb);
    return favorable ? 0.0 : 1.0;
  }

  const double t = (ma - mb) / std::sqrt(pooled * (1.0 / na + 1.0 / nb));
  if (direction == TailDirection::kALess) return student_t_cdf(t, df);
  return 1.0 - student_t_cdf(t, df);
}

Marker significance_marker(double p) {
  if (p < 0.0 || p > 1.0) {
    throw ValidationError("significance_marker: p outside [0,1]");
  }
  if (p < 0.01) return Marker::kDoubleDagger;
  if (p < 0.05) return Marker::kDagger;
  return Marker::kNone;
}

std::string marker_symbol(Marker m) {
  switch (m) {
    case Marker::kNone: return "";
    case Marker::kDagger: return "†";
    case Marker::kDoubleDagger: return "‡";
  }
  return "";
}

}  // namespace xlt::stats
