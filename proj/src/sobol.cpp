#include "fso/sobol.hpp"

#include <bit>
#include <stdexcept>

namespace fso::rng {

namespace {

constexpr int kBits = 32;

struct DimInit {
  int degree;
  std::uint32_t poly;  // interior coefficient bits
  std::uint32_t m[6];
};

// Joe-Kuo D6 initial direction numbers, dimensions 2..18; dimension 1 is the
// van der Corput sequence in base 2.
constexpr DimInit kInit[17] = {
    {1, 0, {1}},
    {2, 1, {1, 3}},
    {3, 1, {1, 3, 1}},
    {3, 2, {1, 1, 1}},
    {4, 1, {1, 1, 3, 3}},
    {4, 4, {1, 3, 5, 13}},
    {5, 2, {1, 1, 5, 5, 17}},
    {5, 4, {1, 1, 5, 5, 5}},
    {5, 7, {1, 1, 7, 11, 19}},
    {5, 11, {1, 1, 5, 1, 1}},
    {5, 13, {1, 1, 1, 3, 11}},
    {5, 14, {1, 3, 5, 5, 31}},
    {6, 1, {1, 3, 3, 9, 7, 49}},
    {6, 13, {1, 1, 1, 15, 21, 21}},
    {6, 16, {1, 3, 1, 13, 27, 49}},
    {6, 19, {1, 1, 1, 15, 7, 5}},
    {6, 22, {1, 3, 1, 15, 13, 25}},
};

}  // namespace

SobolSequence::SobolSequence(int dims) {
  if (dims < 1 || dims > kMaxDims)
    throw std::invalid_argument("SobolSequence: dims must be in [1, 18]");
  v_.resize(dims);
  state_.assign(dims, 0);
  for (int d = 0; d < dims; ++d) {
    auto& v = v_[d];
    v.resize(kBits + 1);
    if (d == 0) {
      for (int i = 1; i <= kBits; ++i) v[i] = 1u << (kBits - i);
      continue;
    }
    const DimInit& di = kInit[d - 1];
    const int s = di.degree;
    for (int i = 1; i <= s; ++i) v[i] = di.m[i - 1] << (kBits - i);
    for (int i = s + 1; i <= kBits; ++i) {
      v[i] = v[i - s] ^ (v[i - s] >> s);
      for (int k = 1; k < s; ++k)
        if ((di.poly >> (s - 1 - k)) & 1u) v[i] ^= v[i - k];
    }
  }
}

void SobolSequence::next_raw(std::uint32_t* out) {
  // Gray-code update: flip the direction number of the lowest zero bit of count
  const int c = std::countr_one(count_) + 1;
  ++count_;
  for (size_t d = 0; d < state_.size(); ++d) {
    state_[d] ^= v_[d][c];
    out[d] = state_[d];
  }
}

void SobolSequence::next(double* out) {
  std::vector<std::uint32_t> raw(state_.size());
  next_raw(raw.data());
  for (size_t d = 0; d < state_.size(); ++d)
    out[d] = (static_cast<double>(raw[d]) + 0.5) * 0x1.0p-32;
}

}  // namespace fso::rng
