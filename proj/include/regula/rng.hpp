#pragma once

#include <cstdint>
#include <random>

#include "regula/vec.hpp"

namespace regula {

/// Deterministic random source. All derived draws (uniforms, gaussians,
/// points in balls) are computed directly from the mt19937_64 output
/// stream, so identical seeds reproduce identical samples independent of
/// the standard library's distribution internals.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform in (0,1], 53-bit resolution.
  double uniform01() {
    return static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Standard normal via Box-Muller; pairs are cached.
  double gaussian();

  /// Uniform in the closed ball of the given center and radius.
  Vec in_ball(const Vec& center, double radius);

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace regula
