#include "fso/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fso/errors.hpp"

namespace fso::specfun {

double q_function(double x) { return 0.5 * std::erfc(x * M_SQRT1_2); }

double q_approx(double x) {
  return std::exp(-0.5 * x * x) / 12.0 + std::exp(-2.0 * x * x / 3.0) / 4.0;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct ContourIntegrand {
  const std::vector<GammaTerm>& terms;
  double log_z;
  double log_pref;

  cplx log_f(cplx s) const {
    cplx r = s * log_z + log_pref;
    for (const auto& t : terms) r += static_cast<double>(t.sign) * log_gamma(cplx(t.mu + t.nu * s.real(), t.nu * s.imag()));
    return r;
  }
  double dlog_re(double c) const {
    double r = log_z;
    for (const auto& t : terms) r += t.sign * t.nu * digamma(t.mu + t.nu * c);
    return r;
  }
};

}  // namespace

MellinKernel::MellinKernel(std::vector<GammaTerm> terms) : terms_(std::move(terms)) {
  strip_lo_ = -kInf;
  strip_hi_ = kInf;
  decay_ = 0.0;
  for (const auto& t : terms_) {
    decay_ += t.sign * std::abs(t.nu) * M_PI_2;
    if (t.sign < 0 || t.nu == 0.0) continue;  // denominator factors have no poles
    if (t.nu < 0.0)
      strip_hi_ = std::min(strip_hi_, -t.mu / t.nu);
    else
      strip_lo_ = std::max(strip_lo_, -t.mu / t.nu);
  }
}

MellinResult MellinKernel::evaluate(double log_z, double log_prefactor, double rel_tol) const {
  if (decay_ <= 0.0)
    throw capability_error("MellinKernel: integrand does not decay on vertical contours");
  if (strip_lo_ >= strip_hi_) {
    std::ostringstream os;
    os << "MellinKernel: pole families overlap, no vertical contour separates them"
       << " (left sup " << strip_lo_ << " >= right inf " << strip_hi_ << ")";
    throw evaluation_error(os.str());
  }

  const ContourIntegrand f{terms_, log_z, log_prefactor};

  // Contour abscissa: real saddle of log|F|, clamped inside the strip.
  double a = strip_lo_, b = strip_hi_;
  if (!std::isfinite(a)) {
    a = std::isfinite(b) ? b - 1.0 : -1.0;
    double ref = std::isfinite(b) ? b : 0.0;
    while (f.dlog_re(a) > 0.0 && a > -1e8) a = ref - 2.0 * (ref - a) - 1.0;
  }
  if (!std::isfinite(b)) {
    b = a + 1.0;
    while (f.dlog_re(b) < 0.0 && b < 1e8) b = a + 2.0 * (b - a);
  }
  if (std::isfinite(strip_lo_) && std::isfinite(strip_hi_)) {
    const double w = strip_hi_ - strip_lo_;
    a = std::max(a, strip_lo_ + 0.02 * w);
    b = std::min(b, strip_hi_ - 0.02 * w);
  } else {
    if (std::isfinite(strip_lo_)) a = std::max(a, strip_lo_ + 1e-6 * (1.0 + std::abs(strip_lo_)));
    if (std::isfinite(strip_hi_)) b = std::min(b, strip_hi_ - 1e-6 * (1.0 + std::abs(strip_hi_)));
  }
  for (int it = 0; it < 120; ++it) {
    const double mid = 0.5 * (a + b);
    (f.dlog_re(mid) < 0.0 ? a : b) = mid;
  }
  const double c = 0.5 * (a + b);

  const double peak = f.log_f(cplx(c, 0.0)).real();
  long nodes = 0;

  const auto term_at = [&](double t) {
    ++nodes;
    const cplx lf = f.log_f(cplx(c, t)) - peak;
    return lf.real() > 700.0 ? 0.0 : std::exp(lf.real()) * std::cos(lf.imag());
  };

  double abs_sum = 0.0;
  // Full trapezoid sum at step h: f(0) + 2 sum_{k>=1} Re f(ikh), truncated when
  // terms stay below 1e-17 of the running peak.
  const auto tail_sum = [&](double h, long k0, long stride) {
    double s = 0.0, peak_term = 1.0;
    int small_run = 0;
    for (long k = k0; k < 4000000; k += stride) {
      const double v = 2.0 * term_at(k * h);
      s += v;
      abs_sum += std::abs(v);
      peak_term = std::max(peak_term, std::abs(v));
      if (std::abs(v) < 1e-17 * peak_term) {
        if (++small_run >= 8) break;
      } else {
        small_run = 0;
      }
    }
    return s;
  };

  const double width = (std::isfinite(strip_lo_) && std::isfinite(strip_hi_))
                           ? strip_hi_ - strip_lo_
                           : 2.0;
  double h = std::min(0.5, width);
  const double t0_term = term_at(0.0);
  abs_sum = std::abs(t0_term);
  double sum = t0_term + tail_sum(h, 1, 1);
  double integral = h * sum;
  double err = kInf;

  for (int level = 0; level < 30; ++level) {
    const double h2 = 0.5 * h;
    const double odd = tail_sum(h2, 1, 2);
    const double refined = 0.5 * integral + h2 * odd;
    err = std::abs(refined - integral);
    integral = refined;
    h = h2;
    sum = integral / h;
    if (level >= 1 && err <= rel_tol * std::max(std::abs(integral), 1e-300)) break;
  }

  MellinResult res;
  const double scale = std::exp(peak) / (2.0 * M_PI);
  res.value = integral * scale;
  res.condition = (abs_sum * h) / std::max(std::abs(integral), 1e-300);
  res.err_est = err * scale + std::abs(res.value) * res.condition * 1e-16;
  res.nodes = nodes;
  res.contour_re = c;
  if (err > 1e-6 * std::max(std::abs(integral), 1e-300)) {
    throw accuracy_error("MellinKernel: contour quadrature did not converge", res.value,
                         res.err_est);
  }
  return res;
}

MeijerGSpec::MeijerGSpec(int m_, int n_, std::vector<double> a_, std::vector<double> b_)
    : m(m_), n(n_), a(std::move(a_)), b(std::move(b_)) {
  const int p = static_cast<int>(a.size());
  const int q = static_cast<int>(b.size());
  if (m < 0 || m > q || n < 0 || n > p)
    throw std::invalid_argument("MeijerGSpec: require 0 <= m <= len(b), 0 <= n <= len(a)");
  if (m == q && n == p)
    cls = MeijerClass::all_numerator;
  else if (n == 1 && p == 1 && m == q - 1)
    cls = MeijerClass::cdf_kernel;
  else
    cls = MeijerClass::unsupported;
}

MellinKernel MeijerGSpec::kernel() const {
  if (cls == MeijerClass::unsupported)
    throw capability_error("meijer_g: parameter class not supported (need all-numerator or cdf kernel)");
  const int p = static_cast<int>(a.size());
  const int q = static_cast<int>(b.size());
  std::vector<GammaTerm> terms;
  terms.reserve(p + q);
  for (int j = 0; j < q; ++j) {
    if (j < m)
      terms.push_back({b[j], -1.0, +1});  // Gamma(b_j - s)
    else
      terms.push_back({1.0 - b[j], +1.0, -1});  // 1 / Gamma(1 - b_j + s)
  }
  for (int i = 0; i < p; ++i) {
    if (i < n)
      terms.push_back({1.0 - a[i], +1.0, +1});  // Gamma(1 - a_i + s)
    else
      terms.push_back({a[i], -1.0, -1});  // 1 / Gamma(a_i - s)
  }
  return MellinKernel(std::move(terms));
}

MeijerResult meijer_g(const MeijerGSpec& spec, double z, double rel_tol) {
  if (!(z > 0.0)) throw std::domain_error("meijer_g: requires z > 0");
  return meijer_g_scaled(spec, std::log(z), 0.0, rel_tol);
}

MeijerResult meijer_g_scaled(const MeijerGSpec& spec, double log_z, double log_prefactor,
                             double rel_tol) {
  const MellinKernel k = spec.kernel();
  const MellinResult r = k.evaluate(log_z, log_prefactor, rel_tol);
  return {r.value, r.err_est, r.nodes};
}

}  // namespace fso::specfun
