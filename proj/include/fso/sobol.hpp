#pragma once

#include <cstdint>
#include <vector>

namespace fso::rng {

// Gray-code Sobol sequence, 32-bit, up to 18 dimensions (degree <= 6
// primitive polynomials with Joe-Kuo D6 initial direction numbers).
class SobolSequence {
 public:
  explicit SobolSequence(int dims);

  int dims() const { return static_cast<int>(state_.size()); }

  // next point into out[0..dims), values in [0,1)
  void next(double* out);

  // raw 32-bit state words (for digital-shift randomization)
  void next_raw(std::uint32_t* out);

  static constexpr int kMaxDims = 18;

 private:
  std::vector<std::vector<std::uint32_t>> v_;  // per-dim direction numbers
  std::vector<std::uint32_t> state_;
  std::uint64_t count_ = 0;
};

}  // namespace fso::rng
