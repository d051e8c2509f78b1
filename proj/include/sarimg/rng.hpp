#pragma once

#include <cstdint>
#include <random>

#include "sarimg/types.hpp"

namespace sarimg {

/// splitmix64 finalizer, used to derive independent stream seeds from a
/// master seed without correlation between nearby tags.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed for a named substream of a master seed (tag = purpose, index = e.g.
/// sub-aperture). Distinct (tag, index) pairs give uncorrelated streams, so
/// results do not depend on the order streams are consumed in.
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t tag,
                                    std::uint64_t index) {
  return mix64(mix64(master ^ tag) + index);
}

/// Deterministic generator. mt19937_64 is fully specified by the standard and
/// the uniform/gaussian transforms below are hand-rolled, so sequences are
/// bit-identical across platforms and standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1), 53-bit resolution.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n), rejection sampled (no modulo bias).
  std::uint64_t uniform_index(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v = engine_();
    while (v >= limit) v = engine_();
    return v % n;
  }

  /// Standard normal via Box-Muller; pairs are cached.
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1], keeps log() finite
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  /// Circularly symmetric complex Gaussian, sigma per real/imag component.
  cplx circular_gaussian(double sigma) {
    const double re = gaussian();
    const double im = gaussian();
    return {sigma * re, sigma * im};
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace sarimg
