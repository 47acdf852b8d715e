#pragma once

#include <cstdint>
#include <optional>

#include "fso/ber_numeric.hpp"

namespace fso::montecarlo {

struct McSettings {
  std::int64_t draws = 10'000'000;
  std::uint64_t seed = 1;
  int streams = 1;  // worker parallelism; never affects the estimate
  std::optional<double> target_rel_ci;  // stop early when ci/ber drops below
  bool bit_level = false;  // simulate noisy bits instead of averaging the BEP
};

struct McResult {
  double ber = 0.0;
  double ci_halfwidth = 0.0;  // 99% normal-approximation half width
  std::int64_t draws_used = 0;
};

// Semi-analytic Monte Carlo: average the exact conditional bit error
// probability over fading draws. Deterministic for fixed (seed, draws):
// per-draw substreams and fixed-size block reduction make the estimate
// independent of the worker count.
McResult ber_mc(const ber_numeric::LinkConfig& cfg, double snr, const McSettings& settings);

// SNR gap between two curves at a target BER, by linear interpolation of
// log10(BER) against dB. Positive when `candidate` reaches the target at a
// lower SNR than `reference`.
double gain_at_target(const ber_numeric::BerCurve& reference,
                      const ber_numeric::BerCurve& candidate, double target_ber);

}  // namespace fso::montecarlo
