#pragma once

#include <complex>

namespace fso {

using cplx = std::complex<double>;

// Log-gamma on the principal branch (branch cut along the negative real axis,
// real-axis values taken as the upper-half-plane limit). Throws std::domain_error
// at the poles z = 0, -1, -2, ...
cplx log_gamma(cplx z);

// Real log-gamma for x > 0.
double log_gamma(double x);

// Real digamma for x > 0.
double digamma(double x);

}  // namespace fso
