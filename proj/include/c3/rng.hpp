#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace c3 {

// SplitMix64 (Steele, Lea, Flood): a counter-based 64-bit generator. Every
// stochastic routine in this library owns exactly one stream and consumes it
// in a documented order, so a run is bit-reproducible regardless of platform
// or thread count.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1). One draw.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform index in [0, n). One draw.
  std::size_t uniform_index(std::size_t n) {
    return static_cast<std::size_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }

  /// Fair coin. One draw.
  bool coin() { return (next() >> 63) != 0; }

  /// Standard normal via Box-Muller. Consumes exactly two draws.
  double normal() {
    double u1 = static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;  // (0,1]
    double u2 = static_cast<double>(next() >> 11) * 0x1.0p-53;        // [0,1)
    constexpr double kTwoPi = 6.283185307179586476925286766559;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
  }

  /// Uniform direction on the unit sphere in R^d: d normals, normalized.
  /// Consumes exactly 2*d draws.
  std::vector<double> unit_vector(std::size_t d) {
    std::vector<double> v(d);
    double nrm2 = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      v[k] = normal();
      nrm2 += v[k] * v[k];
    }
    double nrm = std::sqrt(nrm2);
    if (nrm == 0.0) {  // probability-zero guard
      v.assign(d, 0.0);
      v[0] = 1.0;
      return v;
    }
    for (std::size_t k = 0; k < d; ++k) v[k] /= nrm;
    return v;
  }

 private:
  std::uint64_t state_;
};

/// Derives an independent stream seed for a labeled sub-task of a base seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  SplitMix64 g(seed ^ (salt * 0xD6E8FEB86659FD93ULL));
  return g.next();
}

}  // namespace c3
