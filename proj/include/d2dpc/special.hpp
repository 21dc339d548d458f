#pragma once

namespace d2dpc {

/// Euler Gamma function for x > 0.
double gamma_fn(double x);

/// Lower incomplete gamma, integral of t^(a-1) e^(-t) over [0, x], for a > 0.
double lower_incomplete_gamma(double a, double x);

/// Upper incomplete gamma, integral of t^(a-1) e^(-t) over [x, inf), for a > 0.
double upper_incomplete_gamma(double a, double x);

/// Integral of t^(a-1) e^(-t) over [x0, x1]. Picks the lower or upper tail
/// difference so that narrow cells far from the origin keep their precision.
/// For a <= 0 the cell must not touch the origin (x0 > 0).
double incomplete_gamma_interval(double a, double x0, double x1);

/// Integral of e^(-h) over [x0, x1] (x1 may be +inf).
double exponential_mass(double x0, double x1);

}  // namespace d2dpc
