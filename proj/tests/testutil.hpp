#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "fso/channel.hpp"
#include "fso/gamma.hpp"
#include "fso/quadrature.hpp"

// Test-side oracles, kept independent of the library's Mellin-Barnes path.
namespace oracle {

// Generalized-Gamma factor density: X^g ~ Gamma(b, O/b).
inline double gengamma_pdf(double x, double g, double b, double O) {
  if (!(x > 0.0)) return 0.0;
  return std::exp(std::log(g) + b * std::log(b / O) - fso::log_gamma(b) +
                  (g * b - 1.0) * std::log(x) - b * std::pow(x, g) / O);
}

inline double gengamma_cdf_reg(double x, double g, double b, double O) {
  // regularized lower incomplete gamma at b, b x^g / O, by series/continued fraction
  const double a = b;
  const double z = b * std::pow(x, g) / O;
  if (z <= 0.0) return 0.0;
  const double lg = fso::log_gamma(a);
  if (z < a + 1.0) {
    double term = 1.0 / a, sum = term;
    for (int n = 1; n < 500; ++n) {
      term *= z / (a + n);
      sum += term;
      if (term < sum * 1e-16) break;
    }
    return sum * std::exp(-z + a * std::log(z) - lg);
  }
  // Lentz continued fraction for the upper function
  double b0 = z + 1.0 - a, c = 1e300, d = 1.0 / b0, h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -i * (i - a);
    b0 += 2.0;
    d = an * d + b0;
    if (std::abs(d) < 1e-300) d = 1e-300;
    c = b0 + an / c;
    if (std::abs(c) < 1e-300) c = 1e-300;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return 1.0 - std::exp(-z + a * std::log(z) - lg) * h;
}

// Product-distribution density: f(I) = Int f1(I/y) f2(y) / y dy, by adaptive
// quadrature on log y.
inline double product_pdf(const fso::channel::DoubleGGParams& ch, double irradiance) {
  const auto f = [&](double ly) {
    const double y = std::exp(ly);
    return gengamma_pdf(irradiance / y, ch.gg1.gamma, ch.gg1.beta, ch.gg1.omega) *
           gengamma_pdf(y, ch.gg2.gamma, ch.gg2.beta, ch.gg2.omega);
  };
  const auto r = fso::quadrature::integrate_segmented(f, {-60.0, -8.0, -2.0, 0.0, 2.0, 8.0, 60.0},
                                                      1e-11, 1e-280);
  return r.value;
}

// Product-distribution cdf: P(XY <= I) = Int f1(x) F2(I/x) dx on log x.
inline double product_cdf(const fso::channel::DoubleGGParams& ch, double irradiance) {
  const auto f = [&](double lx) {
    const double x = std::exp(lx);
    return x * gengamma_pdf(x, ch.gg1.gamma, ch.gg1.beta, ch.gg1.omega) *
           gengamma_cdf_reg(irradiance / x, ch.gg2.gamma, ch.gg2.beta, ch.gg2.omega);
  };
  const auto r = fso::quadrature::integrate_segmented(f, {-60.0, -8.0, -2.0, 0.0, 2.0, 8.0, 60.0},
                                                      1e-11, 1e-280);
  return r.value;
}

// Kolmogorov-Smirnov statistic of draws against the channel cdf, using an
// exact-cdf table on a log grid (interpolation error ~1e-7, far below the
// tolerances asserted on KS distances).
inline double ks_statistic(const fso::channel::DoubleGGParams& ch, std::vector<double> draws) {
  std::sort(draws.begin(), draws.end());
  const double lo = std::log(draws.front()) - 1e-6;
  const double hi = std::log(draws.back()) + 1e-6;
  const int grid_n = 4000;
  std::vector<double> lx(grid_n), lf(grid_n);
  for (int i = 0; i < grid_n; ++i) {
    lx[i] = lo + (hi - lo) * i / (grid_n - 1);
    lf[i] = fso::channel::cdf(ch, std::exp(lx[i]));
  }
  double ks = 0.0;
  const double n = static_cast<double>(draws.size());
  for (std::size_t i = 0; i < draws.size(); ++i) {
    const double l = std::log(draws[i]);
    const double t = (l - lo) / (hi - lo) * (grid_n - 1);
    const int k = std::min(std::max(static_cast<int>(t), 0), grid_n - 2);
    const double f = lf[k] + (lf[k + 1] - lf[k]) * (t - k);
    ks = std::max(ks, std::max(std::abs(f - (i + 1) / n), std::abs(f - i / n)));
  }
  return ks;
}

// Brute-force best rational (independent of the library implementation).
inline void brute_best_rational(double target, long max_den, long& num, long& den) {
  double best = 1e300;
  for (long d = 1; d <= max_den; ++d) {
    long n = std::lround(target * d);
    if (n < 1) n = 1;
    const double err = std::abs(static_cast<double>(n) / d - target);
    if (err < best * (1.0 - 1e-15)) {
      best = err;
      num = n;
      den = d;
    }
  }
}

}  // namespace oracle
