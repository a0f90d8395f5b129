#pragma once

#include <cstdint>
#include <random>

#include "quicci/vec3.hpp"

namespace quicci {

/// splitmix64 step; used to derive independent sub-seeds from a master seed.
constexpr uint64_t derive_seed(uint64_t seed, uint64_t stream) {
  uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Deterministic random source. All mappings from raw engine output to
/// values are implemented here rather than with std::*_distribution, so a
/// given 64-bit seed yields the same stream on every platform and stdlib.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }

  /// Uniform index in [0, n); n must be > 0. Multiply-shift (no modulo bias
  /// beyond 2^-64, which is irrelevant for reproducibility).
  size_t uniform_index(size_t n) {
    return static_cast<size_t>((static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  bool bernoulli(double p) { return uniform() < p; }

  /// Uniform random rotation from a uniformly distributed unit quaternion.
  Mat3 uniform_rotation() {
    const double u1 = uniform(), u2 = uniform(), u3 = uniform();
    const double two_pi = 6.283185307179586476925286766559;
    const double a = std::sqrt(1.0 - u1), b = std::sqrt(u1);
    const double x = a * std::sin(two_pi * u2);
    const double y = a * std::cos(two_pi * u2);
    const double z = b * std::sin(two_pi * u3);
    const double w = b * std::cos(two_pi * u3);
    return Mat3::from_quaternion(w, x, y, z);
  }

  Vec3 unit_vector() {
    // Marsaglia rejection on the unit sphere.
    while (true) {
      const double a = uniform(-1.0, 1.0), b = uniform(-1.0, 1.0);
      const double s = a * a + b * b;
      if (s >= 1.0) continue;
      const double r = 2.0 * std::sqrt(1.0 - s);
      return {a * r, b * r, 1.0 - 2.0 * s};
    }
  }

  /// Partial Fisher-Yates: first k entries of a shuffled [0, n) range.
  template <typename IndexVector>
  void sample_indices(size_t n, size_t k, IndexVector& out) {
    out.resize(n);
    for (size_t i = 0; i < n; ++i) out[i] = static_cast<typename IndexVector::value_type>(i);
    for (size_t i = 0; i < k && i + 1 < n; ++i) {
      const size_t j = i + uniform_index(n - i);
      std::swap(out[i], out[j]);
    }
    out.resize(k < n ? k : n);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace quicci
