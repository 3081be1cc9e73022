// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace mada {

// Deterministic random source. std::mt19937_64 itself is pinned by the
// standard, but the <random> distributions are not (uniform_real_distribution
// and normal_distribution may differ across standard libraries), so the
// mappings from raw 64-bit draws to doubles live here. Two builds on
// different platforms must produce bit-identical streams.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1): top 53 bits of a draw scaled by 2^-53.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller; caches the second value of each pair.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // u1 in (0, 1] so the log is finite.
    double u1 = 1.0 - uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 6.283185307179586476925286766559 * u2;  // 2*pi
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  // Integer in [0, n). Modulo bias is ~n/2^64, irrelevant at our sizes,
  // and the mapping is identical everywhere.
  uint64_t below(uint64_t n) { return gen_() % n; }

  // Fisher-Yates; together with below() this makes shuffles reproducible
  // across platforms, unlike std::shuffle whose draw pattern is unspecified.
  template <typename T>
  void shuffle(std::vector<T>& xs) {
    for (size_t i = xs.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(below(i));
      std::swap(xs[i - 1], xs[j]);
    }
  }

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace mada
