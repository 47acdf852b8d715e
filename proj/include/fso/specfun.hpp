#pragma once

#include <vector>

#include "fso/gamma.hpp"

namespace fso::specfun {

// Gaussian tail probability Q(x) = 0.5 erfc(x / sqrt 2).
double q_function(double x);

// Two-exponential approximation exp(-x^2/2)/12 + exp(-2 x^2/3)/4 for x >= 0.
double q_approx(double x);

// One gamma factor of a Mellin-Barnes integrand: sign * logGamma(mu + nu * s).
// nu < 0 gives a right pole family (poles at s = (mu + k)/(-nu), k >= 0),
// nu > 0 a left family. sign -1 puts the factor in the denominator.
struct GammaTerm {
  double mu;
  double nu;
  int sign;
};

struct MellinResult {
  double value = 0.0;
  double err_est = 0.0;   // absolute error estimate
  long nodes = 0;         // integrand evaluations
  double contour_re = 0.0;
  double condition = 1.0;  // sum |F| h / |integral|, in scaled units
};

// Product of gamma terms times z^s, integrated over a vertical contour that
// separates the left pole families from the right ones. The contour abscissa
// is placed at the real saddle of log|F| (clamped inside the strip), and the
// line integral is evaluated by a trapezoid rule with step halving until the
// requested relative tolerance is met.
class MellinKernel {
 public:
  explicit MellinKernel(std::vector<GammaTerm> terms);

  const std::vector<GammaTerm>& terms() const { return terms_; }
  double strip_lo() const { return strip_lo_; }
  double strip_hi() const { return strip_hi_; }
  double decay() const { return decay_; }

  // pref * (1/2pi i) Int F(s) e^{s log_z} ds, with log(pref) folded into the
  // integrand so that astronomically scaled prefactors stay representable.
  MellinResult evaluate(double log_z, double log_prefactor = 0.0, double rel_tol = 1e-10) const;

 private:
  std::vector<GammaTerm> terms_;
  double strip_lo_;  // sup of left pole families (-inf when none)
  double strip_hi_;  // inf of right pole families (+inf when none)
  double decay_;     // pi/2 * sum sign*|nu|
};

enum class MeijerClass {
  all_numerator,  // m = len(b), n = len(a)
  cdf_kernel,     // m = len(b) - 1, n = 1, len(a) = 1
  unsupported,
};

// Meijer G instance G^{m,n}_{p,q}(z | a ; b) restricted to the parameter
// classes used by this library (real parameters, z > 0).
struct MeijerGSpec {
  MeijerGSpec(int m, int n, std::vector<double> a, std::vector<double> b);

  int m;
  int n;
  std::vector<double> a;
  std::vector<double> b;
  MeijerClass cls;

  MellinKernel kernel() const;  // throws capability_error when unsupported
};

struct MeijerResult {
  double value = 0.0;
  double err_est = 0.0;
  long nodes = 0;
};

MeijerResult meijer_g(const MeijerGSpec& spec, double z, double rel_tol = 1e-10);

// Same, with log z supplied directly and a log-space prefactor multiplied in.
MeijerResult meijer_g_scaled(const MeijerGSpec& spec, double log_z, double log_prefactor,
                             double rel_tol = 1e-10);

}  // namespace fso::specfun
