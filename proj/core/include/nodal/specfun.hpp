#pragma once

namespace nodal::specfun {

/// Principal branch W0 of the Lambert function, the inverse of w -> w e^w on
/// [-1, inf). Halley iteration; throws DomainError for x < -1/e.
double lambert_w0(double x);

/// ln Gamma(x) for x > 0 via a Lanczos approximation (g = 7, 9 terms).
double ln_gamma(double x);

/// ln[Gamma(x + a) / Gamma(x + b)], formed in log space so that it stays
/// finite for large x.
double ln_gamma_ratio(double x, double a, double b);

}  // namespace nodal::specfun
