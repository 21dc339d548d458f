#include "d2dpc/outage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "d2dpc/error.hpp"

namespace d2dpc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double clamp_probability(double p) { return std::clamp(p, 0.0, 1.0); }

const PowerPolicy& policy_of(Layer which, const PowerPolicy& c, const PowerPolicy& d) {
  return which == Layer::cellular ? c : d;
}

}  // namespace

const char* to_string(OutageMode mode) {
  switch (mode) {
    case OutageMode::independent_exact: return "independent-exact";
    case OutageMode::dependent_lower_bound: return "dependent-lower-bound";
    case OutageMode::dependent_approx: return "dependent-approx";
  }
  return "unknown";
}

MomentValue interference_mass(const NetworkParams& params, const PolicyMoments& cellular,
                              const PolicyMoments& d2d) {
  double total = 0.0;
  for (auto [lambda, y] : {std::pair{params.lambda_c(), cellular.y},
                           std::pair{params.lambda_d(), d2d.y}}) {
    if (lambda == 0.0) continue;
    if (y.is_infinite()) return MomentValue::infinite();
    total += lambda * y.require("E[P^delta]");
  }
  return MomentValue::finite(total);
}

double outage_independent_constant(const NetworkParams& params, double p_c, double p_d,
                                   Layer which) {
  params.require_delta_below_one("outage_independent_constant");
  if (!(p_c > 0.0) || !(p_d > 0.0)) {
    throw InvalidParameter("outage_independent_constant: powers must be > 0");
  }
  const double delta = params.delta();
  const double p_i = which == Layer::cellular ? p_c : p_d;
  const double mass = params.lambda_c() * std::pow(p_c, delta) +
                      params.lambda_d() * std::pow(p_d, delta);
  return clamp_probability(-std::expm1(-phi(params, which) * mass / std::pow(p_i, delta)));
}

double outage_independent_general(const NetworkParams& params, const PowerPolicy& policy_c,
                                  const PowerPolicy& policy_d, Layer which) {
  params.require_delta_below_one("outage_independent_general");
  const double delta = params.delta();
  const MomentValue mass = interference_mass(params, policy_moments(policy_c, delta),
                                             policy_moments(policy_d, delta));
  if (mass.is_infinite()) return 1.0;
  const double s = mass.require("interference mass");
  if (s == 0.0) return 0.0;
  const double k = phi(params, which) * s;
  const double success = expect_power(policy_of(which, policy_c, policy_d), [&](double p) {
    return p > 0.0 ? std::exp(-k / std::pow(p, delta)) : 0.0;
  });
  return clamp_probability(1.0 - success);
}

double outage_dependent_lower_bound(const NetworkParams& params, const PowerPolicy& policy_c,
                                    const PowerPolicy& policy_d, Layer which) {
  const double delta = params.delta();
  const MomentValue mass = interference_mass(params, policy_moments(policy_c, delta),
                                             policy_moments(policy_d, delta));
  const double s = mass.require("lambda_c E[P_c^delta] + lambda_d E[P_d^delta]");
  if (s == 0.0) return 0.0;
  const double k = psi(params, which) * s;
  const double success = expect_power_fade(
      policy_of(which, policy_c, policy_d), [&](double p, double h) {
        const double received = h * p;
        return received > 0.0 ? std::exp(-k * std::pow(received, -delta)) : 0.0;
      });
  return clamp_probability(1.0 - success);
}

double outage_dependent_approx(const NetworkParams& params, const PolicyMoments& cellular,
                               const PolicyMoments& d2d, Layer which) {
  const MomentValue mass = interference_mass(params, cellular, d2d);
  const double s = mass.require("lambda_c E[P_c^delta] + lambda_d E[P_d^delta]");
  if (s == 0.0) return 0.0;
  const MomentValue& z = which == Layer::cellular ? cellular.z : d2d.z;
  if (z.is_infinite()) return 1.0;
  return clamp_probability(-std::expm1(-psi(params, which) * s * z.require("z")));
}

double outage_dependent_approx(const NetworkParams& params, const PowerPolicy& policy_c,
                               const PowerPolicy& policy_d, Layer which) {
  const double delta = params.delta();
  return outage_dependent_approx(params, policy_moments(policy_c, delta),
                                 policy_moments(policy_d, delta), which);
}

OutageModel evaluate_outage(OutageMode mode, const NetworkParams& params,
                            const PowerPolicy& policy_c, const PowerPolicy& policy_d,
                            Layer which) {
  switch (mode) {
    case OutageMode::independent_exact:
      return {mode, outage_independent_general(params, policy_c, policy_d, which)};
    case OutageMode::dependent_lower_bound:
      return {mode, outage_dependent_lower_bound(params, policy_c, policy_d, which)};
    case OutageMode::dependent_approx:
      return {mode, outage_dependent_approx(params, policy_c, policy_d, which)};
  }
  throw InvalidParameter("unknown outage mode");
}

double qc_survival(const PowerPolicy& policy, double q, double delta) {
  if (q < 0.0) throw InvalidParameter("qc_survival: q must be >= 0");
  return expect_power(policy, [q, delta](double p) {
    if (p <= 0.0) return 0.0;
    return std::exp(-q / std::pow(p, delta));
  });
}

double find_qc(const PowerPolicy& policy, double eps, double delta) {
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidParameter("find_qc: eps must lie in (0, 1)");
  if (!(delta > 0.0)) throw DeltaOutOfRange("find_qc: requires delta > 0");
  if (!(raw_moment(policy, delta).as_double() > 0.0)) {
    throw InvalidParameter("find_qc: E[P^delta] must be positive");
  }
  const double target = 1.0 - eps;
  if (qc_survival(policy, 0.0, delta) < target) {
    throw InfeasibleDensities(
        "find_qc: the cellular outage target is missed even without interference");
  }

  double lo = 0.0;
  double hi = 1.0;
  int doublings = 0;
  while (qc_survival(policy, hi, delta) >= target) {
    lo = hi;
    hi *= 2.0;
    if (++doublings > 200) {
      throw NumericFailure("find_qc: no bracket after 200 doublings", hi);
    }
  }
  // Absolute tolerance 1e-12, tightened to relative 1e-12 for Q < 1.
  for (int iter = 0; iter < 400; ++iter) {
    const double tol = std::max(1e-12 * std::min(1.0, hi),
                                4.0 * std::numeric_limits<double>::epsilon() * hi);
    if (hi - lo <= tol) break;
    const double mid = 0.5 * (lo + hi);
    if (qc_survival(policy, mid, delta) >= target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace d2dpc
