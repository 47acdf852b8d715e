#include "fso/gamma.hpp"

#include <cmath>
#include <stdexcept>

namespace fso {

namespace {

constexpr double kLanczosG = 607.0 / 128.0;
constexpr double kLanczosCoef[15] = {
    0.99999999999999709182,     57.156235665862923517,     -59.597960355475491248,
    14.136097974741747174,      -0.49191381609762019978,   0.33994649984811888699e-4,
    0.46523628927048575665e-4,  -0.98374475304879564677e-4, 0.15808870322491248884e-3,
    -0.21026444172410488319e-3, 0.21743961811521264320e-3, -0.16431810653676389022e-3,
    0.84418223983852743293e-4,  -0.26190838401581408670e-4, 0.36899182659531622704e-5};

constexpr double kLogSqrt2Pi = 0.91893853320467274178;
constexpr double kLogPi = 1.1447298858494001741;

// Lanczos sum; valid for Re(z) >= 0.5.
cplx lanczos_log_gamma(cplx z) {
  cplx sum = kLanczosCoef[0];
  for (int k = 1; k < 15; ++k) sum += kLanczosCoef[k] / (z - 1.0 + static_cast<double>(k));
  const cplx t = z + (kLanczosG - 0.5);
  return kLogSqrt2Pi + (z - 0.5) * std::log(t) - t + std::log(sum);
}

// log(sin(pi z)) with the winding that keeps the reflection formula on the
// principal log-gamma branch; requires Im(z) >= 0, z not an integer.
cplx log_sin_pi(cplx z) {
  const cplx i(0.0, 1.0);
  // sin(pi z) = (i/2) e^{-i pi z} (1 - e^{2 pi i z}); |e^{2 pi i z}| <= 1 here.
  return -i * (M_PI * z) + cplx(-M_LN2, M_PI_2) + std::log(1.0 - std::exp(2.0 * M_PI * i * z));
}

}  // namespace

cplx log_gamma(cplx z) {
  if (z.imag() == 0.0) {
    const double x = z.real();
    if (x <= 0.0 && x == std::floor(x)) throw std::domain_error("log_gamma: pole at nonpositive integer");
  }
  if (z.imag() < 0.0) return std::conj(log_gamma(std::conj(z)));
  if (z.real() >= 0.5) return lanczos_log_gamma(z);
  return kLogPi - log_sin_pi(z) - lanczos_log_gamma(1.0 - z);
}

double log_gamma(double x) {
  if (x <= 0.0) throw std::domain_error("log_gamma(real): requires x > 0");
  return lanczos_log_gamma(cplx(x, 0.0)).real();
}

double digamma(double x) {
  if (x <= 0.0) throw std::domain_error("digamma: requires x > 0");
  double acc = 0.0;
  while (x < 10.0) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  const double w = 1.0 / (x * x);
  // asymptotic series with Bernoulli numbers B2..B14
  double series = w * (1.0 / 12.0 - w * (1.0 / 120.0 - w * (1.0 / 252.0 - w * (1.0 / 240.0 -
                  w * (1.0 / 132.0 - w * (691.0 / 32760.0 - w * (1.0 / 12.0)))))));
  return acc + std::log(x) - 0.5 / x - series;
}

}  // namespace fso
