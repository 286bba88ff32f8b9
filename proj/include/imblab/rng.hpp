#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace imblab {

/// Deterministic random source. Wraps std::mt19937_64 (whose raw output
/// sequence is fully specified by the standard) and derives bounded draws
/// with explicit arithmetic, so seeded results are identical across
/// compilers and platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform integer in [0, bound). bound must be > 0.
  std::size_t uniform_index(std::size_t bound) {
    // rejection sampling on the top range to avoid modulo bias
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t draw = next_u64();
    while (draw >= limit) draw = next_u64();
    return static_cast<std::size_t>(draw % bound);
  }

  /// Uniform double in [0, 1) with 53 bits of entropy.
  double uniform_real() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Standard normal deviate via Box-Muller (two uniforms per pair).
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform_real();
    double u2 = uniform_real();
    while (u1 <= 0.0) u1 = uniform_real();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.14159265358979323846 * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

  /// Fisher-Yates shuffle using uniform_index draws.
  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::swap(values[i - 1], values[uniform_index(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace imblab
