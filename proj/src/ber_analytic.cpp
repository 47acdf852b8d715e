#include "fso/ber_analytic.hpp"

#include <cmath>

#include "fso/ber_numeric.hpp"
#include "fso/errors.hpp"
#include "fso/gamma.hpp"

namespace fso::ber_analytic {

using channel::DoubleGGParams;
using channel::GenGammaParams;

std::vector<double> j_sequence(int xi, int y, double x) {
  if (xi < 1 || y < 1) throw std::invalid_argument("j_sequence: xi, y must be >= 1");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(xi) * y);
  for (int j = 0; j < y; ++j) {
    const auto block = channel::delta_sequence(xi, (y - j - x) / y);
    out.insert(out.end(), block.begin(), block.end());
  }
  return out;
}

LambdaContext make_lambda_context(const DoubleGGParams& ch, long max_den, double nudge_threshold,
                                  NudgePolicy policy) {
  LambdaContext ctx{ch};
  ctx.gamma2_original = ch.gg2.gamma;
  const double target = ch.p * ch.gg2.gamma / 2.0;
  ctx.lk = channel::best_rational(target, max_den);
  ctx.l = ctx.lk.num;
  ctx.k = ctx.lk.den;
  const bool want_nudge = policy == NudgePolicy::always ||
                          (policy == NudgePolicy::automatic && ctx.lk.rel_error > nudge_threshold);
  if (want_nudge) {
    const double g2 = 2.0 * static_cast<double>(ctx.l) / (ctx.k * static_cast<double>(ch.p));
    const double g1 = g2 * ch.p / ch.q;
    ctx.ch = DoubleGGParams(GenGammaParams(g1, ch.gg1.beta, channel::omega_from(ch.gg1.beta, g1)),
                            GenGammaParams(g2, ch.gg2.beta, channel::omega_from(ch.gg2.beta, g2)),
                            ch.p, ch.q);
    ctx.nudged = true;
  }
  // residual model error against the original channel: l/k mismatch that was
  // not nudged away, plus the p/q rationalization of gamma1/gamma2
  const double lk_resid = ctx.nudged ? 0.0 : ctx.lk.rel_error;
  const double shift = ctx.nudged ? std::abs(ctx.ch.gg2.gamma - ctx.gamma2_original) /
                                        ctx.gamma2_original
                                  : 0.0;
  ctx.reported_accuracy = 10.0 * (lk_resid + shift + ch.ratio.rel_error) + 1e-6;
  return ctx;
}

namespace {

double lambda_log_argument(const LambdaContext& ctx, int upsilon, int n_apertures, double snr) {
  const auto& ch = ctx.ch;
  const double p = ch.p, q = ch.q;
  const double l = static_cast<double>(ctx.l), k = static_cast<double>(ctx.k);
  const double log_omega = p * std::log(ch.gg2.omega * p / ch.gg2.beta) +
                           q * std::log(q * ch.gg1.omega / ch.gg1.beta);
  return l * std::log(static_cast<double>(upsilon) * n_apertures) - k * log_omega +
         l * std::log(l) - l * std::log(snr) - k * (p + q) * std::log(k);
}

double lambda_log_prefactor(const LambdaContext& ctx) {
  const auto& ch = ctx.ch;
  const double p = ch.p, q = ch.q;
  const double b1 = ch.gg1.beta, b2 = ch.gg2.beta;
  const double l = static_cast<double>(ctx.l), k = static_cast<double>(ctx.k);
  const double log_alpha = std::log(ch.gg2.gamma) + (b2 + 0.5) * std::log(p) +
                           (b1 - 0.5) * std::log(q) + (1.0 - 0.5 * (p + q)) * std::log(2.0 * M_PI) -
                           log_gamma(b1) - log_gamma(b2);
  return log_alpha - 0.5 * std::log(l) + (b1 + b2) * std::log(k) - std::log(2.0) -
         0.5 * (l - 1.0 + (k - 1.0) * (p + q)) * std::log(2.0 * M_PI);
}

specfun::MeijerGSpec lambda_spec(const LambdaContext& ctx) {
  const auto& ch = ctx.ch;
  std::vector<double> b = j_sequence(static_cast<int>(ctx.k), ch.q, 1.0 - ch.gg1.beta);
  const auto b2 = j_sequence(static_cast<int>(ctx.k), ch.p, 1.0 - ch.gg2.beta);
  b.insert(b.end(), b2.begin(), b2.end());
  const std::vector<double> a = channel::delta_sequence(static_cast<int>(ctx.l), 1.0);
  return specfun::MeijerGSpec(static_cast<int>(b.size()), static_cast<int>(a.size()), a,
                              std::move(b));
}

}  // namespace

LambdaValue lambda_closed(const LambdaContext& ctx, int upsilon, int n_apertures, double snr) {
  if (upsilon != 3 && upsilon != 4) throw std::invalid_argument("lambda_closed: upsilon in {3,4}");
  if (n_apertures < 1) throw std::invalid_argument("lambda_closed: N >= 1");
  if (!(snr > 0.0)) throw std::domain_error("lambda_closed: snr must be > 0");
  LambdaValue out;
  try {
    const auto r = specfun::meijer_g_scaled(lambda_spec(ctx),
                                            lambda_log_argument(ctx, upsilon, n_apertures, snr),
                                            lambda_log_prefactor(ctx), 1e-10);
    out.value = r.value;
    out.err_est = r.err_est;
  } catch (const evaluation_error&) {
    out.value = ber_numeric::lambda_oracle(ctx.ch, upsilon, n_apertures, snr);
    out.err_est = 1e-9 * out.value;
    out.used_fallback = true;
  } catch (const accuracy_error&) {
    out.value = ber_numeric::lambda_oracle(ctx.ch, upsilon, n_apertures, snr);
    out.err_est = 1e-9 * out.value;
    out.used_fallback = true;
  }
  return out;
}

double ber_simo_oc_closed(std::span<const LambdaContext> ctxs, double snr) {
  if (ctxs.empty()) throw std::invalid_argument("ber_simo_oc_closed: need at least one branch");
  const int n = static_cast<int>(ctxs.size());
  double p4 = 1.0, p3 = 1.0;
  for (const auto& ctx : ctxs) {
    p4 *= lambda_closed(ctx, 4, n, snr).value;
    p3 *= lambda_closed(ctx, 3, n, snr).value;
  }
  return p4 / 12.0 + p3 / 4.0;
}

double lambda_gg(double beta1, double beta2, int upsilon, int n_apertures, double snr) {
  if (beta1 < 0.5 || beta2 < 0.5) throw std::invalid_argument("lambda_gg: shapes >= 0.5");
  std::vector<double> b = channel::delta_sequence(2, beta1);
  const auto b2 = channel::delta_sequence(2, beta2);
  b.insert(b.end(), b2.begin(), b2.end());
  const specfun::MeijerGSpec spec(4, 1, {1.0}, std::move(b));
  const double z = upsilon * static_cast<double>(n_apertures) * beta1 * beta1 * beta2 * beta2 /
                   (16.0 * snr);
  const double log_pref = (beta1 + beta2 - 2.0) * M_LN2 - std::log(M_PI) - log_gamma(beta1) -
                          log_gamma(beta2);
  return specfun::meijer_g_scaled(spec, std::log(z), log_pref, 1e-10).value;
}

double lambda_kc(double beta2, int upsilon, int n_apertures, double snr) {
  if (beta2 < 0.5) throw std::invalid_argument("lambda_kc: shape >= 0.5");
  const specfun::MeijerGSpec spec(4, 1, {1.0},
                                  {0.5, 1.0, 0.5 * beta2, 0.5 * (beta2 + 1.0)});
  const double z = upsilon * static_cast<double>(n_apertures) * beta2 * beta2 / (16.0 * snr);
  const double log_pref = (beta2 - 1.0) * M_LN2 - std::log(M_PI) - log_gamma(beta2);
  return specfun::meijer_g_scaled(spec, std::log(z), log_pref, 1e-10).value;
}

double lambda_dw(double gamma1, double gamma2, double omega1, double omega2, long p, long q,
                 long l, long k, int upsilon, int n_apertures, double snr) {
  (void)gamma1;
  if (p < 1 || q < 1 || l < 1 || k < 1) throw std::invalid_argument("lambda_dw: integers >= 1");
  std::vector<double> b = j_sequence(static_cast<int>(k), static_cast<int>(q), 0.0);
  const auto b2 = j_sequence(static_cast<int>(k), static_cast<int>(p), 0.0);
  b.insert(b.end(), b2.begin(), b2.end());
  const std::vector<double> a = channel::delta_sequence(static_cast<int>(l), 1.0);
  const specfun::MeijerGSpec spec(static_cast<int>(b.size()), static_cast<int>(a.size()), a,
                                  std::move(b));
  const double pd = static_cast<double>(p), qd = static_cast<double>(q);
  const double ld = static_cast<double>(l), kd = static_cast<double>(k);
  const double log_arg = ld * std::log(static_cast<double>(upsilon) * n_apertures) +
                         ld * (std::log(ld) - std::log(snr)) -
                         kd * pd * std::log(omega2 * pd * kd) - kd * qd * std::log(qd * omega1 * kd);
  const double log_pref = std::log(gamma2) + 1.5 * std::log(pd) + 0.5 * std::log(qd) -
                          0.5 * std::log(ld) + 2.0 * std::log(kd) - M_LN2 -
                          0.5 * (ld - 3.0 + kd * (pd + qd)) * std::log(2.0 * M_PI);
  return specfun::meijer_g_scaled(spec, log_arg, log_pref, 1e-10).value;
}

}  // namespace fso::ber_analytic
