#pragma once

#include <span>
#include <vector>

#include "fso/channel.hpp"

namespace fso::ber_analytic {

// Context for the closed-form per-branch factor: the integer pair (l, k)
// rationalizes p * gamma2 / 2, and when that approximation is poorer than the
// nudge threshold the channel exponents are moved to the nearest values that
// make it exact (scales re-derived from the unit-mean identity).
struct LambdaContext {
  channel::DoubleGGParams ch;   // effective channel the closed form evaluates
  long l = 1;
  long k = 1;
  channel::RationalApprox lk;   // l/k against the original p*gamma2/2
  bool nudged = false;
  double gamma2_original = 0.0;
  double reported_accuracy = 1e-6;  // expected scale of |closed/oracle - 1|
                                    // against the original channel
};

enum class NudgePolicy { automatic, never, always };

LambdaContext make_lambda_context(const channel::DoubleGGParams& ch, long max_den = 12,
                                  double nudge_threshold = 1e-3,
                                  NudgePolicy policy = NudgePolicy::automatic);

// Meijer parameter block: y blocks of Delta(xi, .), total xi*y entries.
std::vector<double> j_sequence(int xi, int y, double x);

struct LambdaValue {
  double value = 0.0;
  double err_est = 0.0;
  bool used_fallback = false;  // contour failed, integral oracle substituted
};

// Per-branch closed-form factor (upsilon in {3, 4}).
LambdaValue lambda_closed(const LambdaContext& ctx, int upsilon, int n_apertures, double snr);

// Closed-form SIMO-OC BER: (1/12) prod Lambda(n,4) + (1/4) prod Lambda(n,3).
double ber_simo_oc_closed(std::span<const LambdaContext> ctxs, double snr);

// Special-case closed forms.
double lambda_kc(double beta2, int upsilon, int n_apertures, double snr);
double lambda_gg(double beta1, double beta2, int upsilon, int n_apertures, double snr);
double lambda_dw(double gamma1, double gamma2, double omega1, double omega2, long p, long q,
                 long l, long k, int upsilon, int n_apertures, double snr);

}  // namespace fso::ber_analytic
