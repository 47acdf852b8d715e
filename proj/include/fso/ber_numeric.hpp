#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fso/channel.hpp"

namespace fso::ber_numeric {

enum class Combiner { OC, EGC, SC };

Combiner combiner_from_string(const std::string& s);
std::string to_string(Combiner c);

// An M x N link. channels are stored row-major by receive aperture:
// channels[n * m_tx + m] is the path from transmit aperture m to receiver n.
struct LinkConfig {
  int m_tx = 1;
  int n_rx = 1;
  std::vector<channel::DoubleGGParams> channels;
  Combiner combiner = Combiner::OC;
  std::vector<double> snr_grid_db;

  void validate() const;  // throws std::invalid_argument
};

struct BerPoint {
  double snr_db = 0.0;
  double ber = 0.0;
  std::optional<double> ci_halfwidth;
};

// Values below this are quadrature noise; points are flagged, not clamped.
inline constexpr double kBerFloor = 1e-14;

struct BerCurve {
  std::vector<BerPoint> points;
  std::string method;  // "closed" | "quadrature" | "montecarlo"
  std::string config_id;
  std::uint64_t seed = 0;
  long nodes = 0;       // per-dim quadrature nodes, or MC draws
  double tolerance = 0.0;

  bool underflow(std::size_t i) const { return points[i].ber < kBerFloor; }
};

// Per-dimension composite rule used for a given tensor dimensionality.
struct QuadSpec {
  int levels_lo;
  int levels_hi;
  int order;
};
QuadSpec default_rule(int dims);

// Average BER of the exact conditional error probability over the fading
// distribution(s), by tensor quadrature in quantile space (dims <= 4) or by
// randomized QMC beyond.
double ber_siso(const channel::DoubleGGParams& ch, double snr);
double ber_simo_oc(std::span<const channel::DoubleGGParams> chs, double snr);
double ber_simo_egc(std::span<const channel::DoubleGGParams> chs, double snr);
double ber_miso(std::span<const channel::DoubleGGParams> chs, double snr);
double ber_simo_sc(std::span<const channel::DoubleGGParams> chs, double snr);
double ber_mimo(const LinkConfig& cfg, double snr);

// Conditional-BEP dispatch shared with the Monte Carlo estimator.
// irradiance laid out as in LinkConfig::channels.
double conditional_bep(const LinkConfig& cfg, std::span<const double> irradiance, double snr);

// Integral of pdf * exp(-snr I^2 / (upsilon N)) by adaptive quadrature.
double lambda_oracle(const channel::DoubleGGParams& ch, int upsilon, int n_apertures, double snr);

// Quadrature self-check: relative change of a BER value under node doubling.
double oc_refinement_delta(std::span<const channel::DoubleGGParams> chs, double snr);

// Cached quantiles of a channel at the nodes of the rule for `dims`.
const std::vector<double>& quantile_nodes(const channel::DoubleGGParams& ch, int dims);

}  // namespace fso::ber_numeric
