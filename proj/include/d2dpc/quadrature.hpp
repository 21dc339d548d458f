#pragma once

#include <functional>

namespace d2dpc {

struct QuadratureOptions {
  double rel_tol = 1e-12;
  double abs_tol = 1e-16;
  unsigned max_depth = 18;
};

/// Adaptive Gauss-Kronrod (7/15) integral of f over a finite [a, b].
/// Throws NumericFailure when the error estimate misses the requested
/// tolerance by more than two orders of magnitude.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& options = {});

/// Integral of f(h) e^(-h) over [lo, hi], hi possibly +inf (truncated where the
/// exponential tail mass is below 1e-19). `singular_power` is the exponent beta
/// in f(h) ~ h^(-beta) near h = 0; when lo == 0 and 0 < beta < 1 the segment
/// touching the origin is integrated after the substitution h = u^(1/(1-beta)),
/// which makes the integrand bounded.
double integrate_exponential_weight(const std::function<double(double)>& f,
                                    double lo, double hi,
                                    double singular_power = 0.0,
                                    const QuadratureOptions& options = {});

}  // namespace d2dpc
