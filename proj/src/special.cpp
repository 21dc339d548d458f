#include "d2dpc/special.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "d2dpc/error.hpp"
#include "d2dpc/quadrature.hpp"

namespace d2dpc {

double gamma_fn(double x) {
  if (!(x > 0.0)) {
    throw InvalidParameter("gamma_fn: argument must be positive, got " + std::to_string(x));
  }
  return boost::math::tgamma(x);
}

double lower_incomplete_gamma(double a, double x) {
  if (!(a > 0.0) || x < 0.0) {
    throw InvalidParameter("lower_incomplete_gamma: need a > 0 and x >= 0");
  }
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return boost::math::tgamma(a);
  return boost::math::tgamma_lower(a, x);
}

double upper_incomplete_gamma(double a, double x) {
  if (!(a > 0.0) || x < 0.0) {
    throw InvalidParameter("upper_incomplete_gamma: need a > 0 and x >= 0");
  }
  if (std::isinf(x)) return 0.0;
  if (x == 0.0) return boost::math::tgamma(a);
  return boost::math::tgamma(a, x);
}

double incomplete_gamma_interval(double a, double x0, double x1) {
  if (!(x1 >= x0) || x0 < 0.0) {
    throw InvalidParameter("incomplete_gamma_interval: need 0 <= x0 <= x1");
  }
  if (x1 == x0) return 0.0;
  if (a <= 0.0) {
    if (!(x0 > 0.0)) {
      throw InvalidParameter("incomplete_gamma_interval: a <= 0 diverges at the origin");
    }
    if (x0 >= 1.0) {
      return integrate_exponential_weight(
          [a](double t) { return std::pow(t, a - 1.0); }, x0, x1);
    }
    // Near the origin the integrand is too steep for quadrature; integrate by
    // parts up to a positive order (or the exponential integral at order 0).
    if (a == 0.0) {
      return boost::math::expint(1, x0) -
             (std::isinf(x1) ? 0.0 : boost::math::expint(1, x1));
    }
    const double edge = std::pow(x0, a) * std::exp(-x0) -
                        (std::isinf(x1) ? 0.0 : std::pow(x1, a) * std::exp(-x1));
    return (incomplete_gamma_interval(a + 1.0, x0, x1) - edge) / a;
  }
  // Below the distribution's bulk the lower tail is small and accurate; above
  // it the upper tail is. Differencing in the small tail avoids cancellation.
  if (x0 >= a + 1.0) {
    return upper_incomplete_gamma(a, x0) - upper_incomplete_gamma(a, x1);
  }
  return lower_incomplete_gamma(a, x1) - lower_incomplete_gamma(a, x0);
}

double exponential_mass(double x0, double x1) {
  if (std::isinf(x1)) return std::exp(-x0);
  // e^-x0 - e^-x1 without cancellation for narrow cells.
  return -std::exp(-x0) * std::expm1(-(x1 - x0));
}

}  // namespace d2dpc
