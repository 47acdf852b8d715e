#pragma once

#include <Eigen/Core>
#include <functional>

namespace fso::quadrature {

// Gauss-Legendre nodes/weights on [-1, 1], computed once per order and cached.
struct GaussRule {
  Eigen::ArrayXd x;
  Eigen::ArrayXd w;
};
const GaussRule& gauss_legendre(int order);

// Composite rule on (0, 1): dyadic panels refining toward 0 (levels_lo) and
// toward 1 (levels_hi), Gauss-Legendre of the given order on each panel.
// Resolves integrands with boundary layers near either endpoint.
struct PanelRule {
  Eigen::ArrayXd u;
  Eigen::ArrayXd w;
};
PanelRule dyadic_panels(int levels_lo, int levels_hi, int order);

struct AdaptiveResult {
  double value = 0.0;
  double err_est = 0.0;
  long evaluations = 0;
  bool converged = true;
};

// Adaptive Gauss-Kronrod 15(7) on [a, b].
AdaptiveResult integrate(const std::function<double(double)>& f, double a, double b,
                         double rel_tol = 1e-10, double abs_tol = 0.0, int max_depth = 48);

// As above, with initial subdivision points (useful when the integrand has a
// known boundary layer far from the interval midpoint).
AdaptiveResult integrate_segmented(const std::function<double(double)>& f,
                                   const std::vector<double>& breakpoints, double rel_tol = 1e-10,
                                   double abs_tol = 0.0);

}  // namespace fso::quadrature
