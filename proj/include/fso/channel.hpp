#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>

#include "fso/specfun.hpp"

namespace fso::channel {

// One generalized-Gamma factor: X^gamma ~ Gamma(shape beta, scale omega/beta).
// With omega from omega_from() the factor has unit mean.
struct GenGammaParams {
  GenGammaParams(double gamma_, double beta_, double omega_);
  double gamma;
  double beta;
  double omega;
};

struct RationalApprox {
  long num = 1;
  long den = 1;
  double target = 1.0;
  double rel_error = 0.0;
};

// Best num/den with den <= max_den (ties resolved toward the smaller den).
RationalApprox best_rational(double target, long max_den);

// Scale making the generalized-Gamma factor unit mean.
double omega_from(double beta, double gamma);

// Normalized variance of a unit-mean factor.
double gengamma_variance(double beta, double gamma);

// Shape solving gengamma_variance(beta, gamma) = sigma2; throws
// evaluation_error when no beta >= 0.5 fits.
double beta_from_variance(double sigma2, double gamma);

// Product channel I = X * Y of two independent generalized-Gamma factors,
// with the integer pair (p, q) tracking gamma1/gamma2 ~ p/q.
struct DoubleGGParams {
  DoubleGGParams(GenGammaParams gg1_, GenGammaParams gg2_, int p_, int q_,
                 double max_ratio_error = 1e-2);

  GenGammaParams gg1;
  GenGammaParams gg2;
  int p;
  int q;
  RationalApprox ratio;  // p/q vs gamma1/gamma2, with recorded error

  bool operator==(const DoubleGGParams& o) const {
    return gg1.gamma == o.gg1.gamma && gg1.beta == o.gg1.beta && gg1.omega == o.gg1.omega &&
           gg2.gamma == o.gg2.gamma && gg2.beta == o.gg2.beta && gg2.omega == o.gg2.omega &&
           p == o.p && q == o.q;
  }
};

// The four turbulence presets, by name 'a'..'d'.
DoubleGGParams preset(char name);

DoubleGGParams gamma_gamma(double alpha, double beta);
DoubleGGParams k_channel(double beta2);
DoubleGGParams double_weibull(double gamma1, double gamma2, double omega1, double omega2,
                              long max_den = 64);
DoubleGGParams negative_exponential();

enum class SpecialKind { gamma_gamma, k_channel, double_weibull, negative_exponential };

double pdf(const DoubleGGParams& ch, double irradiance);
double cdf(const DoubleGGParams& ch, double irradiance);

// Inverse cdf by bracketed root search; u in (0,1).
double quantile(const DoubleGGParams& ch, double u);

// Product-construction sampler: X, Y drawn independently per index from the
// counter-based stream, so any partitioning of [0, count) over workers
// reproduces the same sequence.
Eigen::ArrayXd sample(const DoubleGGParams& ch, std::uint64_t seed, std::int64_t count);
double sample_one(const DoubleGGParams& ch, std::uint64_t seed, std::int64_t index);

// (1 + sigma_x^2)(1 + sigma_y^2) - 1
double scintillation_index(const DoubleGGParams& ch);

// Eq-form Meijer G builders (exact when p/q equals gamma1/gamma2):
// pdf(I) = exp(pdf_kernel_log_prefactor(ch, I)) * G[spec](pdf kernels' argument).
specfun::MeijerGSpec pdf_meijer_spec(const DoubleGGParams& ch);
specfun::MeijerGSpec cdf_meijer_spec(const DoubleGGParams& ch);
double meijer_log_argument(const DoubleGGParams& ch, double irradiance);
double pdf_meijer_log_prefactor(const DoubleGGParams& ch, double irradiance);
double cdf_meijer_log_prefactor(const DoubleGGParams& ch);

// Arithmetic sequence x/j, (x+1)/j, ..., (x+j-1)/j.
std::vector<double> delta_sequence(int j, double x);

}  // namespace fso::channel
