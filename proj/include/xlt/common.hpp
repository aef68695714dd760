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

#ifndef XLT_COMMON_HPP
#define XLT_COMMON_HPP

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace xlt {

// Invalid inputs, unsatisfiable configs (CLI exit code 1).
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Failures while executing otherwise valid work (CLI exit code 2).
class RuntimeFailure : public std::runtime_error {
 public:
  explicit RuntimeFailure(const std::string& msg) : std::runtime_error(msg) {}
};

// Deterministic RNG with explicitly implemented bounded draws, so streams do
// not depend on the standard library's distribution internals.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  // Uniform integer in [0, n), n >= 1. Rejection sampling, no modulo bias.
  uint64_t below(uint64_t n) {
    if (n == 0) throw ValidationError("Rng::below: n must be >= 1");
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t v = engine_();
    while (v >= limit) v = engine_();
    return v % n;
  }

  // Uniform double in [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double normal() {
    // Box-Muller with a cached spare.
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      const size_t j = static_cast<size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  // Draws an index from a normalized probability vector.
  size_t multinomial(const std::vector<double>& probs) {
    const double u = uniform();
    double acc = 0.0;
    for (size_t i = 0; i < probs.size(); ++i) {
      acc += probs[i];
      if (u < acc) return i;
    }
    return probs.size() - 1;
  }

  // Derives an independent stream for a named sub-component.
  Rng fork(std::string_view tag) const {
    uint64_t h = 1469598103934665603ull;
    for (char c : tag) {
      h ^= static_cast<unsigned char>(c);
      h *= 1099511628211ull;
    }
    return Rng(seed_mix(h));
  }

  explicit Rng(std::mt19937_64 engine) : engine_(engine) {}

 private:
  uint64_t seed_mix(uint64_t h) const {
    std::mt19937_64 probe = engine_;
    return probe() ^ h;
  }

  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

namespace strings {

std::vector<std::string> split(std::string_view s, char delim);
std::vector<std::string> split_ws(std::string_view s);
std::string trim(std::string_view s);
std::string lower_ascii(std::string_view s);
bool starts_with(std::string_view s, std::string_view prefix);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace strings

// FNV-1a over bytes, used for stable run-directory names.
uint64_t stable_hash(std::string_view data);
std::string hash_hex(uint64_t h);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

// Fixed-point display rounding: one decimal, half away from zero.
std::string format_one_decimal(double v);

}  // namespace xlt

#endif  // XLT_COMMON_HPP
