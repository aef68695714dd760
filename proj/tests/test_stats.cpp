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

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "xlt/common.hpp"
#include "xlt/stats.hpp"

using namespace xlt::stats;

TEST_CASE("ks_statistic: spec anchor cases") {
  CHECK(ks_statistic({1, 2, 3}, {1, 2, 3}) == doctest::Approx(0.0));
  CHECK(ks_statistic({1, 2}, {3, 4}) == doctest::Approx(1.0));
  CHECK(ks_statistic({1, 2, 3, 4}, {2, 3}) == doctest::Approx(0.25));
}

TEST_CASE("ks_statistic: empty sample is an error") {
  CHECK_THROWS_AS(ks_statistic({}, {1.0}), xlt::ValidationError);
  CHECK_THROWS_AS(ks_statistic({1.0}, {}), xlt::ValidationError);
}

TEST_CASE("ks_statistic equals the brute-force ECDF oracle, with ties") {
  std::mt19937_64 gen(4242);
  for (int trial = 0; trial < 400; ++trial) {
    const size_t na = 1 + gen() % 40;
    const size_t nb = 1 + gen() % 40;
    std::vector<double> a(na), b(nb);
    // Integer-valued draws force heavy tie structure across the samples.
    for (auto& v : a) v = static_cast<double>(gen() % 12);
    for (auto& v : b) v = static_cast<double>(gen() % 12);
    const double got = ks_statistic(a, b);
    const double want = xlt::oracles::ks_statistic_bruteforce(a, b);
    CHECK(got == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("ks_statistic: symmetry and monotone invariance") {
  std::mt19937_64 gen(99);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> a(5 + gen() % 20), b(5 + gen() % 20);
    for (auto& v : a) v = static_cast<double>(gen() % 30);
    for (auto& v : b) v = static_cast<double>(gen() % 30);
    const double d = ks_statistic(a, b);
    CHECK(ks_statistic(b, a) == doctest::Approx(d));
    auto mono = [](std::vector<double> xs) {
      for (auto& v : xs) v = std::exp(0.3 * v) + 2.0 * v;
      return xs;
    };
    CHECK(ks_statistic(mono(a), mono(b)) == doctest::Approx(d));
  }
}

TEST_CASE("kolmogorov_tail matches the theta-series form") {
  for (double lambda = 0.3; lambda <= 3.0; lambda += 0.05) {
    CHECK(kolmogorov_tail(lambda) ==
          doctest::Approx(xlt::oracles::kolmogorov_tail_theta(lambda))
              .epsilon(1e-10));
  }
  CHECK(kolmogorov_tail(0.0) == doctest::Approx(1.0));
  CHECK(kolmogorov_tail(10.0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("ks_two_sample_pvalue: limits") {
  CHECK(ks_two_sample_pvalue(0.0, 10, 10) == doctest::Approx(1.0));
  CHECK(ks_two_sample_pvalue(1.0, 100, 100) < 1e-6);
}

TEST_CASE("ks_two_sample_pvalue tracks a 100k permutation oracle") {
  // Continuous 50-vs-50 samples built so the ECDF gap is exactly 14/50; a
  // statistic of 0.25 itself is off the 1/50 lattice for equal sizes.
  std::vector<double> a, b;
  for (int i = 1; i <= 50; ++i) a.push_back(static_cast<double>(i));
  for (int j = 1; j <= 18; ++j) b.push_back(j + 0.5);
  for (int k = 1; k <= 32; ++k) b.push_back(31.71 + 0.55 * k);
  const double d = ks_statistic(a, b);
  CHECK(d == doctest::Approx(0.28).epsilon(1e-12));
  const double asymptotic = ks_two_sample_pvalue(d, a.size(), b.size());
  const double permutation =
      xlt::oracles::ks_pvalue_permutation(a, b, 100000, 7);
  CAPTURE(asymptotic);
  CAPTURE(permutation);
  CHECK(std::fabs(asymptotic - permutation) <= 0.02);
}

TEST_CASE("one_sided_t_test: spec anchor cases") {
  const std::vector<double> a = {1, 2, 3, 4, 5};
  const std::vector<double> b = {2, 3, 4, 5, 6};
  CHECK(one_sided_t_test(a, a, TailDirection::kALess) ==
        doctest::Approx(0.5));
  CHECK(one_sided_t_test(a, b, TailDirection::kALess) ==
        doctest::Approx(0.1733).epsilon(5e-4));
  std::vector<double> far = a;
  for (auto& v : far) v += 100.0 * 4.0;  // +100 spreads
  CHECK(one_sided_t_test(far, b, TailDirection::kAGreater) < 1e-6);
  CHECK(one_sided_t_test(far, b, TailDirection::kALess) > 1.0 - 1e-6);
}

TEST_CASE("one_sided_t_test: degenerate variance") {
  const std::vector<double> c1 = {2, 2, 2};
  const std::vector<double> c2 = {3, 3, 3};
  CHECK(one_sided_t_test(c1, c1, TailDirection::kALess) ==
        doctest::Approx(0.5));
  CHECK(one_sided_t_test(c1, c2, TailDirection::kALess) ==
        doctest::Approx(0.0));
  CHECK(one_sided_t_test(c1, c2, TailDirection::kAGreater) ==
        doctest::Approx(1.0));
  CHECK_THROWS_AS(one_sided_t_test({1.0}, c1, TailDirection::kALess),
                  xlt::ValidationError);
}

TEST_CASE("one_sided_t_test: directions are complementary") {
  std::mt19937_64 gen(31337);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> a(2 + gen() % 6), b(2 + gen() % 6);
    for (auto& v : a) v = static_cast<double>(gen() % 1000) / 10.0;
    for (auto& v : b) v = static_cast<double>(gen() % 1000) / 10.0;
    const double less = one_sided_t_test(a, b, TailDirection::kALess);
    const double greater = one_sided_t_test(a, b, TailDirection::kAGreater);
    CHECK(less + greater == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("student_t_cdf matches adaptive-Simpson quadrature of the density") {
  for (double nu : {2.0, 4.0, 8.0, 13.0, 30.0}) {
    for (double t : {-3.0, -1.0, -0.2, 0.0, 0.5, 1.0, 2.5, 6.0}) {
      const double got = student_t_cdf(t, nu);
      const double want =
          1.0 - xlt::oracles::student_t_upper_tail_quadrature(t, nu);
      CHECK(got == doctest::Approx(want).epsilon(1e-9));
    }
  }
  CHECK(student_t_cdf(0.0, 8.0) == doctest::Approx(0.5));
}

TEST_CASE("significance_marker thresholds") {
  CHECK(significance_marker(0.049) == Marker::kDagger);
  CHECK(significance_marker(0.009) == Marker::kDoubleDagger);
  CHECK(significance_marker(0.05) == Marker::kNone);
  CHECK(significance_marker(0.01) == Marker::kDagger);
  CHECK(significance_marker(0.5) == Marker::kNone);
  CHECK(marker_symbol(Marker::kDagger) == "†");
  CHECK(marker_symbol(Marker::kDoubleDagger) == "‡");
  CHECK(marker_symbol(Marker::kNone) == "");
}

TEST_CASE("mean and sample_variance") {
  CHECK(mean({1, 2, 3, 4, 5}) == doctest::Approx(3.0));
  CHECK(sample_variance({1, 2, 3, 4, 5}) == doctest::Approx(2.5));
}
