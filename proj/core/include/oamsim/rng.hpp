// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <random>

namespace oamsim {

/// SplitMix64 finalizer. Bijective on 64-bit words, good avalanche.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Splittable seed derivation: folds a tuple of stream identifiers into a
/// master seed so that parallel and serial runs agree bitwise.
/// Typical usage: derive_seed(master, {strength_index, mask_index, side_tag}).
constexpr std::uint64_t derive_seed(std::uint64_t master,
                                    std::initializer_list<std::uint64_t> words) {
  std::uint64_t s = mix64(master);
  for (std::uint64_t w : words) s = mix64(s ^ mix64(w));
  return s;
}

/// Deterministic Gaussian stream: mt19937_64 + Box-Muller. Avoids the
/// implementation-defined draw pattern of std::normal_distribution.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : rng_(seed) {}

  /// Uniform in (0, 1), never exactly 0 or 1.
  double uniform() { return (static_cast<double>(rng_() >> 11) + 0.5) * 0x1p-53; }

  /// Standard normal deviate.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace oamsim
