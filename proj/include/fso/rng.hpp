#pragma once

#include <cmath>
#include <cstdint>

namespace fso::rng {

inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Counter-based stream: the value sequence is a pure function of (key, counter),
// so draws can be partitioned across workers in any way without changing the
// numbers a given logical index produces.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  // key derivation for nested streams (seed -> draw -> substream ...)
  static CounterRng substream(std::uint64_t seed, std::uint64_t index) {
    return CounterRng(mix64(seed ^ mix64(index + 0x5851F42D4C957F2Dull)));
  }

  std::uint64_t next_u64() { return mix64(key_ + 0xA0761D6478BD642Full * ++ctr_); }

  // uniform on (0, 1), endpoints excluded
  double next_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double next_normal() {
    // Box-Muller; one value per call keeps the stream layout trivial.
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  // Marsaglia-Tsang gamma variate, shape alpha > 0, unit scale.
  double next_gamma(double alpha) {
    if (alpha < 1.0) {
      const double u = next_uniform();
      return next_gamma(alpha + 1.0) * std::pow(u, 1.0 / alpha);
    }
    const double d = alpha - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = next_normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = next_uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

 private:
  std::uint64_t key_;
  std::uint64_t ctr_ = 0;
};

}  // namespace fso::rng
