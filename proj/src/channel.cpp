#include "fso/channel.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "fso/errors.hpp"
#include "fso/gamma.hpp"
#include "fso/rng.hpp"

namespace fso::channel {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

// Two-factor Mellin kernel of the product density; exact for any gamma ratio.
// pdf(I) = I^{-1} / (G(b1) G(b2)) * (1/2pi i) Int G(b1 - s/g1) G(b2 - s/g2) (I A)^s ds
// with A = (b1/O1)^{1/g1} (b2/O2)^{1/g2}.
specfun::MellinKernel product_kernel(const DoubleGGParams& ch) {
  return specfun::MellinKernel({{ch.gg1.beta, -1.0 / ch.gg1.gamma, +1},
                                {ch.gg2.beta, -1.0 / ch.gg2.gamma, +1}});
}

specfun::MellinKernel product_cdf_kernel(const DoubleGGParams& ch) {
  // extra Gamma(s)/Gamma(1+s) = 1/s from integrating I^{s-1} over (0, I)
  return specfun::MellinKernel({{ch.gg1.beta, -1.0 / ch.gg1.gamma, +1},
                                {ch.gg2.beta, -1.0 / ch.gg2.gamma, +1},
                                {0.0, 1.0, +1},
                                {1.0, 1.0, -1}});
}

double log_scale_a(const DoubleGGParams& ch) {
  return std::log(ch.gg1.beta / ch.gg1.omega) / ch.gg1.gamma +
         std::log(ch.gg2.beta / ch.gg2.omega) / ch.gg2.gamma;
}

}  // namespace

GenGammaParams::GenGammaParams(double gamma_, double beta_, double omega_)
    : gamma(gamma_), beta(beta_), omega(omega_) {
  require(gamma > 0.0, "GenGammaParams: gamma must be > 0");
  require(beta >= 0.5, "GenGammaParams: beta must be >= 0.5");
  require(omega > 0.0, "GenGammaParams: omega must be > 0");
}

RationalApprox best_rational(double target, long max_den) {
  require(target > 0.0, "best_rational: target must be > 0");
  require(max_den >= 1, "best_rational: max_den must be >= 1");
  RationalApprox best;
  best.target = target;
  double best_err = std::numeric_limits<double>::infinity();
  for (long den = 1; den <= max_den; ++den) {
    long num = std::lround(target * static_cast<double>(den));
    if (num < 1) num = 1;
    const double err = std::abs(static_cast<double>(num) / den - target);
    if (err < best_err * (1.0 - 1e-15)) {
      best_err = err;
      best.num = num;
      best.den = den;
    }
  }
  best.rel_error = best_err / target;
  return best;
}

double omega_from(double beta, double gamma) {
  require(beta >= 0.5, "omega_from: beta must be >= 0.5");
  require(gamma > 0.0, "omega_from: gamma must be > 0");
  return std::exp(gamma * (log_gamma(beta) - log_gamma(beta + 1.0 / gamma))) * beta;
}

double gengamma_variance(double beta, double gamma) {
  return std::exp(log_gamma(beta + 2.0 / gamma) + log_gamma(beta) -
                  2.0 * log_gamma(beta + 1.0 / gamma)) -
         1.0;
}

double beta_from_variance(double sigma2, double gamma) {
  require(sigma2 > 0.0, "beta_from_variance: sigma2 must be > 0");
  require(gamma > 0.0, "beta_from_variance: gamma must be > 0");
  // gengamma_variance is strictly decreasing in beta
  const double at_half = gengamma_variance(0.5, gamma);
  if (sigma2 > at_half) {
    std::ostringstream os;
    os << "beta_from_variance: sigma2 " << sigma2 << " infeasible for gamma " << gamma
       << " (max " << at_half << " at beta = 0.5)";
    throw evaluation_error(os.str());
  }
  double lo = 0.5, hi = 1.0;
  while (gengamma_variance(hi, gamma) > sigma2) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) throw evaluation_error("beta_from_variance: no finite bracket");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (gengamma_variance(mid, gamma) > sigma2 ? lo : hi) = mid;
    if (hi - lo < 1e-14 * hi) break;
  }
  return 0.5 * (lo + hi);
}

DoubleGGParams::DoubleGGParams(GenGammaParams gg1_, GenGammaParams gg2_, int p_, int q_,
                               double max_ratio_error)
    : gg1(gg1_), gg2(gg2_), p(p_), q(q_) {
  require(p >= 1 && q >= 1, "DoubleGGParams: p, q must be positive integers");
  ratio.num = p;
  ratio.den = q;
  ratio.target = gg1.gamma / gg2.gamma;
  ratio.rel_error = std::abs(static_cast<double>(p) / q - ratio.target) / ratio.target;
  if (ratio.rel_error > max_ratio_error) {
    std::ostringstream os;
    os << "DoubleGGParams: p/q = " << p << "/" << q << " misses gamma1/gamma2 = " << ratio.target
       << " by " << ratio.rel_error << " (bound " << max_ratio_error << ")";
    throw std::invalid_argument(os.str());
  }
}

DoubleGGParams preset(char name) {
  // §-style tuples: exponents/shapes as published, scales from the unit-mean
  // identity so that E[X] = E[Y] = 1 holds exactly.
  auto make = [](double g1, double b1, double g2, double b2, int p, int q) {
    return DoubleGGParams(GenGammaParams(g1, b1, omega_from(b1, g1)),
                          GenGammaParams(g2, b2, omega_from(b2, g2)), p, q);
  };
  switch (name) {
    case 'a':
      return make(2.1690, 0.55, 0.8530, 2.35, 28, 11);
    case 'b':
      return make(1.8621, 0.50, 0.7638, 1.80, 17, 7);
    case 'c':
      return make(0.9135, 2.65, 1.4385, 0.85, 7, 11);
    case 'd':
      return make(0.4205, 3.20, 0.6643, 2.80, 7, 11);
    default:
      throw std::invalid_argument(std::string("preset: unknown channel '") + name + "'");
  }
}

DoubleGGParams gamma_gamma(double alpha, double beta) {
  return DoubleGGParams(GenGammaParams(1.0, alpha, 1.0), GenGammaParams(1.0, beta, 1.0), 1, 1);
}

DoubleGGParams k_channel(double beta2) { return gamma_gamma(1.0, beta2); }

DoubleGGParams double_weibull(double gamma1, double gamma2, double omega1, double omega2,
                              long max_den) {
  const RationalApprox r = best_rational(gamma1 / gamma2, max_den);
  return DoubleGGParams(GenGammaParams(gamma1, 1.0, omega1), GenGammaParams(gamma2, 1.0, omega2),
                        static_cast<int>(r.num), static_cast<int>(r.den));
}

DoubleGGParams negative_exponential() { return gamma_gamma(1.0, 1.0); }

double pdf(const DoubleGGParams& ch, double irradiance) {
  require(irradiance > 0.0, "pdf: irradiance must be > 0");
  const double log_i = std::log(irradiance);
  const double log_pref = -log_i - log_gamma(ch.gg1.beta) - log_gamma(ch.gg2.beta);
  const auto r = product_kernel(ch).evaluate(log_i + log_scale_a(ch), log_pref, 1e-10);
  return std::max(r.value, 0.0);
}

double cdf(const DoubleGGParams& ch, double irradiance) {
  require(irradiance > 0.0, "cdf: irradiance must be > 0");
  const double log_pref = -log_gamma(ch.gg1.beta) - log_gamma(ch.gg2.beta);
  const auto r =
      product_cdf_kernel(ch).evaluate(std::log(irradiance) + log_scale_a(ch), log_pref, 1e-10);
  return std::min(std::max(r.value, 0.0), 1.0);
}

double quantile(const DoubleGGParams& ch, double u) {
  if (!(u > 0.0 && u < 1.0)) throw std::domain_error("quantile: u must lie in (0,1)");
  double lo = 1.0, hi = 1.0;
  if (cdf(ch, 1.0) < u) {
    while (cdf(ch, hi) < u) {
      lo = hi;
      hi *= 4.0;
      if (hi > 1e200) throw evaluation_error("quantile: bracket expansion failed (upper)");
    }
  } else {
    while (cdf(ch, lo) > u) {
      hi = lo;
      lo *= 0.25;
      if (lo < 1e-200) throw evaluation_error("quantile: bracket expansion failed (lower)");
    }
  }
  // bisection on log I; cdf is monotone
  double la = std::log(lo), lb = std::log(hi);
  for (int it = 0; it < 120; ++it) {
    const double lm = 0.5 * (la + lb);
    (cdf(ch, std::exp(lm)) < u ? la : lb) = lm;
    if (lb - la < 1e-14) break;
  }
  return std::exp(0.5 * (la + lb));
}

double sample_one(const DoubleGGParams& ch, std::uint64_t seed, std::int64_t index) {
  auto rng = rng::CounterRng::substream(seed, static_cast<std::uint64_t>(index));
  const double gx = rng.next_gamma(ch.gg1.beta);
  const double gy = rng.next_gamma(ch.gg2.beta);
  const double x = std::pow(gx * ch.gg1.omega / ch.gg1.beta, 1.0 / ch.gg1.gamma);
  const double y = std::pow(gy * ch.gg2.omega / ch.gg2.beta, 1.0 / ch.gg2.gamma);
  return x * y;
}

Eigen::ArrayXd sample(const DoubleGGParams& ch, std::uint64_t seed, std::int64_t count) {
  require(count >= 1, "sample: count must be >= 1");
  Eigen::ArrayXd out(count);
  for (std::int64_t i = 0; i < count; ++i) out[i] = sample_one(ch, seed, i);
  return out;
}

double scintillation_index(const DoubleGGParams& ch) {
  return (1.0 + gengamma_variance(ch.gg1.beta, ch.gg1.gamma)) *
             (1.0 + gengamma_variance(ch.gg2.beta, ch.gg2.gamma)) -
         1.0;
}

std::vector<double> delta_sequence(int j, double x) {
  require(j >= 1, "delta_sequence: j must be >= 1");
  std::vector<double> out(j);
  for (int i = 0; i < j; ++i) out[i] = (x + i) / j;
  return out;
}

specfun::MeijerGSpec pdf_meijer_spec(const DoubleGGParams& ch) {
  // reflected form of the published pdf kernel: all poles on the right
  std::vector<double> b = delta_sequence(ch.q, ch.gg1.beta);
  const std::vector<double> b2 = delta_sequence(ch.p, ch.gg2.beta);
  b.insert(b.end(), b2.begin(), b2.end());
  return specfun::MeijerGSpec(static_cast<int>(b.size()), 0, {}, std::move(b));
}

specfun::MeijerGSpec cdf_meijer_spec(const DoubleGGParams& ch) {
  std::vector<double> b = delta_sequence(ch.q, ch.gg1.beta);
  const std::vector<double> b2 = delta_sequence(ch.p, ch.gg2.beta);
  b.insert(b.end(), b2.begin(), b2.end());
  b.push_back(0.0);
  return specfun::MeijerGSpec(static_cast<int>(b.size()) - 1, 1, {1.0}, std::move(b));
}

double meijer_log_argument(const DoubleGGParams& ch, double irradiance) {
  return ch.p * (ch.gg2.gamma * std::log(irradiance) - std::log(ch.gg2.omega)) +
         ch.q * std::log(ch.gg1.beta) + ch.p * std::log(ch.gg2.beta) -
         ch.p * std::log(static_cast<double>(ch.p)) - ch.q * std::log(static_cast<double>(ch.q)) -
         ch.q * std::log(ch.gg1.omega);
}

double pdf_meijer_log_prefactor(const DoubleGGParams& ch, double irradiance) {
  return std::log(ch.gg2.gamma) + (ch.gg2.beta + 0.5) * std::log(static_cast<double>(ch.p)) +
         (ch.gg1.beta - 0.5) * std::log(static_cast<double>(ch.q)) +
         (1.0 - 0.5 * (ch.p + ch.q)) * std::log(2.0 * M_PI) - log_gamma(ch.gg1.beta) -
         log_gamma(ch.gg2.beta) - std::log(irradiance);
}

double cdf_meijer_log_prefactor(const DoubleGGParams& ch) {
  return (ch.gg2.beta - 0.5) * std::log(static_cast<double>(ch.p)) +
         (ch.gg1.beta - 0.5) * std::log(static_cast<double>(ch.q)) +
         (1.0 - 0.5 * (ch.p + ch.q)) * std::log(2.0 * M_PI) - log_gamma(ch.gg1.beta) -
         log_gamma(ch.gg2.beta);
}

}  // namespace fso::channel
