#include "fso/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace fso::quadrature {

namespace {

GaussRule compute_gauss(int n) {
  GaussRule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Newton iteration from the Chebyshev-based initial guess.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r.x[i] = -x;
    r.x[n - 1 - i] = x;
    r.w[i] = r.w[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
  }
  return r;
}

// Gauss-Kronrod 15(7) nodes/weights on [-1, 1] (symmetric halves).
constexpr double kKronrodX[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
constexpr double kKronrodW[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double kGauss7W[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct PanelEval {
  double integral;
  double error;
};

PanelEval gk15(const std::function<double(double)>& f, double a, double b, long& evals) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double fk[15];
  for (int i = 0; i < 7; ++i) {
    fk[i] = f(c - h * kKronrodX[i]);
    fk[14 - i] = f(c + h * kKronrodX[i]);
  }
  fk[7] = f(c);
  evals += 15;
  double resk = 0.0;
  for (int i = 0; i < 7; ++i) resk += kKronrodW[i] * (fk[i] + fk[14 - i]);
  resk += kKronrodW[7] * fk[7];
  double resg = kGauss7W[3] * fk[7];
  for (int i = 0; i < 3; ++i) resg += kGauss7W[i] * (fk[2 * i + 1] + fk[13 - 2 * i]);
  return {resk * h, std::abs(resk - resg) * h};
}

void adapt(const std::function<double(double)>& f, double a, double b, double tol, int depth,
           int max_depth, AdaptiveResult& out) {
  long ev = 0;
  const PanelEval whole = gk15(f, a, b, ev);
  out.evaluations += ev;
  if (whole.error <= tol || depth >= max_depth) {
    out.value += whole.integral;
    out.err_est += whole.error;
    if (depth >= max_depth && whole.error > tol) out.converged = false;
    return;
  }
  const double c = 0.5 * (a + b);
  adapt(f, a, c, 0.5 * tol, depth + 1, max_depth, out);
  adapt(f, c, b, 0.5 * tol, depth + 1, max_depth, out);
}

}  // namespace

const GaussRule& gauss_legendre(int order) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, compute_gauss(order)).first;
  return it->second;
}

PanelRule dyadic_panels(int levels_lo, int levels_hi, int order) {
  const GaussRule& g = gauss_legendre(order);
  std::vector<double> edges;
  edges.push_back(0.0);
  for (int j = levels_lo; j >= 1; --j) edges.push_back(std::ldexp(1.0, -j));
  for (int j = 2; j <= levels_hi; ++j) edges.push_back(1.0 - std::ldexp(1.0, -j));
  edges.push_back(1.0);
  const int panels = static_cast<int>(edges.size()) - 1;
  PanelRule r;
  r.u.resize(panels * order);
  r.w.resize(panels * order);
  int k = 0;
  for (int p = 0; p < panels; ++p) {
    const double a = edges[p], b = edges[p + 1];
    for (int i = 0; i < order; ++i, ++k) {
      r.u[k] = 0.5 * (b - a) * g.x[i] + 0.5 * (a + b);
      r.w[k] = 0.5 * (b - a) * g.w[i];
    }
  }
  return r;
}

AdaptiveResult integrate(const std::function<double(double)>& f, double a, double b,
                         double rel_tol, double abs_tol, int max_depth) {
  if (!(b > a)) return {};
  long ev = 0;
  const PanelEval first = gk15(f, a, b, ev);
  AdaptiveResult out;
  out.evaluations = ev;
  const double tol = std::max(abs_tol, rel_tol * std::abs(first.integral));
  if (first.error <= tol) {
    out.value = first.integral;
    out.err_est = first.error;
    return out;
  }
  out = AdaptiveResult{};
  adapt(f, a, b, std::max(abs_tol, rel_tol * std::abs(first.integral)), 0, max_depth, out);
  // one refinement pass against the now-known magnitude
  if (out.err_est > rel_tol * std::abs(out.value) && out.converged) {
    AdaptiveResult redo;
    adapt(f, a, b, std::max(abs_tol, rel_tol * std::abs(out.value)), 0, max_depth, redo);
    out = redo;
  }
  return out;
}

AdaptiveResult integrate_segmented(const std::function<double(double)>& f,
                                   const std::vector<double>& breakpoints, double rel_tol,
                                   double abs_tol) {
  if (breakpoints.size() < 2) throw std::invalid_argument("integrate_segmented: need >= 2 points");
  // first pass: coarse magnitude estimate
  double coarse = 0.0;
  long ev = 0;
  for (size_t i = 0; i + 1 < breakpoints.size(); ++i)
    coarse += gk15(f, breakpoints[i], breakpoints[i + 1], ev).integral;
  const double tol = std::max(abs_tol, rel_tol * std::abs(coarse));
  AdaptiveResult out;
  out.evaluations = ev;
  for (size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    AdaptiveResult seg;
    adapt(f, breakpoints[i], breakpoints[i + 1], tol / (breakpoints.size() - 1), 0, 48, seg);
    out.value += seg.value;
    out.err_est += seg.err_est;
    out.evaluations += seg.evaluations;
    out.converged = out.converged && seg.converged;
  }
  return out;
}

}  // namespace fso::quadrature
