#include "d2dpc/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "d2dpc/error.hpp"

namespace d2dpc {
namespace {

// e^-45 ~ 2.9e-20: beyond this the weight is negligible for every integrand
// used here (all grow at most polynomially).
constexpr double kTailCutoff = 45.0;

// Decade splits towards the origin so that sharp features near 0 (for example
// exp(-k h^-g) with small k) are resolved without deep bisection.
double integrate_from_origin(const std::function<double(double)>& f, double right,
                             const QuadratureOptions& options);

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& options) {
  if (!(b >= a)) {
    throw InvalidParameter("integrate: need a <= b");
  }
  if (a == b) return 0.0;
  // Boost compares its per-panel error estimate, which is taken on the
  // reference panel [-1, 1], with a tolerance in the caller's units. Mapping
  // [a, b] onto [-1, 1] first keeps both in the same units.
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  auto mapped = [&](double x) { return half * f(mid + half * x); };
  double error = 0.0;
  double l1 = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      mapped, -1.0, 1.0, options.max_depth, options.rel_tol, &error, &l1);
  const double allowed = std::max(100.0 * options.rel_tol * l1, options.abs_tol);
  if (!std::isfinite(value) || error > allowed) {
    std::ostringstream msg;
    msg << "adaptive quadrature on [" << a << ", " << b << "] reached error " << error
        << " (allowed " << allowed << ")";
    throw NumericFailure(msg.str(), error);
  }
  return value;
}

double integrate_exponential_weight(const std::function<double(double)>& f,
                                    double lo, double hi, double singular_power,
                                    const QuadratureOptions& options) {
  if (lo < 0.0 || !(hi >= lo)) {
    throw InvalidParameter("integrate_exponential_weight: need 0 <= lo <= hi");
  }
  hi = std::min(hi, std::max(lo, kTailCutoff));
  if (hi == lo) return 0.0;

  auto weighted = [&f](double h) {
    const double w = std::exp(-h);
    return w == 0.0 ? 0.0 : f(h) * w;
  };

  // Breakpoints separate the near-origin behaviour from the bulk and the tail.
  std::array<double, 5> cuts{lo, 1.0, 8.0, 20.0, hi};
  double total = 0.0;
  double left = lo;
  for (double cut : cuts) {
    const double right = std::min(cut, hi);
    if (right <= left) continue;
    if (left == 0.0 && singular_power > 0.0 && singular_power < 1.0) {
      // h = u^m with m = 1/(1-beta): h^-beta dh = m u^0 du.
      const double m = 1.0 / (1.0 - singular_power);
      auto substituted = [&](double u) {
        if (u <= 0.0) return 0.0;
        const double h = std::pow(u, m);
        if (h == 0.0) return 0.0;
        return weighted(h) * m * std::pow(u, m - 1.0);
      };
      total += integrate_from_origin(substituted, std::pow(right, 1.0 / m), options);
    } else if (left == 0.0) {
      total += integrate_from_origin(weighted, right, options);
    } else {
      total += integrate(weighted, left, right, options);
    }
    left = right;
  }
  return total;
}

namespace {

double integrate_from_origin(const std::function<double(double)>& f, double right,
                             const QuadratureOptions& options) {
  constexpr int kDecades = 18;
  double upper = right;
  double total = 0.0;
  for (int k = 0; k < kDecades; ++k) {
    const double lower = upper * 0.1;
    total += integrate(f, lower, upper, options);
    upper = lower;
  }
  return total + integrate(f, 0.0, upper, options);
}

}  // namespace
}  // namespace d2dpc
