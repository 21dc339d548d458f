#include "d2dpc/feasibility.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "d2dpc/error.hpp"
#include "d2dpc/outage.hpp"
#include "d2dpc/special.hpp"

namespace d2dpc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// ln(1 / (1 - eps))
double log_target(double eps) { return -std::log1p(-eps); }

FeasibilityRegion independent_region(const NetworkParams& params, double q_c, double y_c,
                                     double pd_max) {
  const double delta = params.delta();
  const double phi_c = phi(params, Layer::cellular);
  const double phi_d = phi(params, Layer::d2d);
  const double l_d = log_target(params.d2d().outage_target);
  FeasibilityRegion region;
  if (pd_max > independent_threshold_power(params, q_c)) {
    region.coef_c = y_c * phi_c / q_c;
    region.coef_d = phi_d / l_d;
    region.bound = 1.0;
    region.region_case = RegionCase::independent_high_peak;
  } else {
    // The low-peak line divides by the D2D peak power.
    region.coef_c = y_c / std::pow(pd_max, delta);
    region.coef_d = 1.0;
    region.bound = l_d / phi_d;
    region.region_case = RegionCase::independent_low_peak;
  }
  return region;
}

void check_peak(double pd_max) {
  if (!(pd_max > 0.0)) throw InvalidParameter("D2D peak power must be > 0 (use inf for none)");
}

}  // namespace

const char* to_string(RegionCase region_case) {
  switch (region_case) {
    case RegionCase::independent_high_peak: return "independent-high-peak";
    case RegionCase::independent_low_peak: return "independent-low-peak";
    case RegionCase::dependent: return "dependent";
  }
  return "unknown";
}

bool FeasibilityRegion::contains(double lambda_c, double lambda_d, double rel_slack) const {
  if (lambda_c < 0.0 || lambda_d < 0.0) return false;
  return coef_c * lambda_c + coef_d * lambda_d <= bound * (1.0 + rel_slack);
}

double FeasibilityRegion::load(double lambda_c, double lambda_d) const {
  return (coef_c * lambda_c + coef_d * lambda_d) / bound;
}

std::pair<double, double> FeasibilityRegion::boundary_along(double lambda_c,
                                                            double lambda_d) const {
  const double l = load(lambda_c, lambda_d);
  if (!(l > 0.0)) throw InvalidParameter("boundary_along: direction must be nonzero");
  return {lambda_c / l, lambda_d / l};
}

std::vector<std::pair<double, double>> FeasibilityRegion::boundary(std::size_t points) const {
  if (points < 2) throw InvalidParameter("boundary: need at least two points");
  std::vector<std::pair<double, double>> out;
  out.reserve(points);
  const double c_max = lambda_c_intercept();
  for (std::size_t i = 0; i < points; ++i) {
    const double lc = c_max * static_cast<double>(i) / static_cast<double>(points - 1);
    const double ld =
        i + 1 == points ? 0.0 : std::max(0.0, (bound - coef_c * lc) / coef_d);
    out.emplace_back(lc, ld);
  }
  return out;
}

std::string FeasibilityRegion::describe() const {
  std::ostringstream out;
  out.precision(12);
  out << to_string(region_case) << ": " << coef_c << " * lambda_c + " << coef_d
      << " * lambda_d <= " << bound;
  return out.str();
}

const IndependentSolution& IndependentSolution::require_feasible() const {
  if (!feasible) throw InfeasibleDensities(reason);
  return *this;
}

double independent_threshold_power(const NetworkParams& params, double q_c) {
  const double phi_c = phi(params, Layer::cellular);
  const double phi_d = phi(params, Layer::d2d);
  const double l_d = log_target(params.d2d().outage_target);
  return std::pow(q_c * phi_d / (phi_c * l_d), 1.0 / params.delta());
}

FeasibilityRegion feasibility_independent(const NetworkParams& params,
                                          const PowerPolicy& policy_c, double pd_max) {
  params.require_delta_below_one("feasibility_independent");
  params.require_small_outage_target(Layer::d2d, "feasibility_independent");
  check_peak(pd_max);
  const double delta = params.delta();
  const double y_c = raw_moment(policy_c, delta).require("E[P_c^delta]");
  const double q_c = find_qc(policy_c, params.cellular().outage_target, delta);
  return independent_region(params, q_c, y_c, pd_max);
}

double region_achieving_power_independent(const NetworkParams& params, double q_c,
                                          double y_c, double pd_max) {
  params.require_delta_below_one("region_achieving_power_independent");
  check_peak(pd_max);
  if (!(q_c > 0.0)) throw InvalidParameter("Q_c must be > 0");
  const FeasibilityRegion region = independent_region(params, q_c, y_c, pd_max);
  if (!region.contains(params.lambda_c(), params.lambda_d())) {
    throw InfeasibleDensities("densities outside the independent region (" +
                              region.describe() + ")");
  }
  const double threshold = independent_threshold_power(params, q_c);
  return pd_max > threshold ? threshold : pd_max;
}

double region_achieving_power_independent(const NetworkParams& params,
                                          const PowerPolicy& policy_c, double pd_max) {
  params.require_small_outage_target(Layer::d2d, "region_achieving_power_independent");
  const double delta = params.delta();
  const double y_c = raw_moment(policy_c, delta).require("E[P_c^delta]");
  const double q_c = find_qc(policy_c, params.cellular().outage_target, delta);
  return region_achieving_power_independent(params, q_c, y_c, pd_max);
}

IndependentSolution optimal_power_independent(const NetworkParams& params,
                                              const PowerPolicy& policy_c, double pd_max) {
  params.require_delta_below_one("optimal_power_independent");
  params.require_small_outage_target(Layer::cellular, "optimal_power_independent");
  params.require_small_outage_target(Layer::d2d, "optimal_power_independent");
  check_peak(pd_max);
  const double delta = params.delta();
  const double y_c = raw_moment(policy_c, delta).require("E[P_c^delta]");
  const double q_c = find_qc(policy_c, params.cellular().outage_target, delta);
  const double phi_c = phi(params, Layer::cellular);
  const double phi_d = phi(params, Layer::d2d);
  const double lambda_c = params.lambda_c();
  const double lambda_d = params.lambda_d();
  constexpr double slack = 1e-9;

  IndependentSolution sol;
  const double cellular_room = q_c / phi_c - lambda_c * y_c;
  sol.r_c = lambda_d > 0.0 ? cellular_room / lambda_d : (cellular_room >= 0.0 ? kInf : -kInf);

  const double denominator = log_target(params.d2d().outage_target) / phi_d - lambda_d;
  if (!(denominator > 0.0)) {
    sol.p_d0 = kInf;
    sol.y0 = kInf;
    std::ostringstream why;
    why << "D2D density " << lambda_d << " reaches the D2D self-interference limit "
        << log_target(params.d2d().outage_target) / phi_d;
    sol.reason = why.str();
    return sol;
  }
  sol.y0 = lambda_c * y_c / denominator;
  sol.p_d0 = std::pow(sol.y0, 1.0 / delta);
  sol.feasible = true;
  if (sol.y0 > sol.r_c * (1.0 + slack) + 0.0 || sol.r_c < 0.0) {
    std::ostringstream why;
    why << "E[P_d^delta] = " << sol.y0 << " exceeds the cellular cap R_c = " << sol.r_c;
    sol.feasible = false;
    sol.reason = why.str();
  } else if (sol.p_d0 > pd_max * (1.0 + slack)) {
    std::ostringstream why;
    why << "optimal power " << sol.p_d0 << " exceeds the peak " << pd_max;
    sol.feasible = false;
    sol.reason = why.str();
  }
  return sol;
}

FeasibilityRegion feasibility_dependent(const NetworkParams& params,
                                        const PowerPolicy& policy_c) {
  const double delta = params.delta();
  if (!(delta < 2.0)) throw DeltaOutOfRange("feasibility_dependent: requires delta < 2");
  const PolicyMoments m = policy_moments(policy_c, delta);
  const double y_c = m.y.require("E[P_c^delta]");
  const double z_c = m.z.require("E[P_c^-delta h_c^-delta]");
  const double psi_c = psi(params, Layer::cellular);
  const double psi_d = psi(params, Layer::d2d);
  const double l_c = log_target(params.cellular().outage_target);
  const double l_d = log_target(params.d2d().outage_target);
  const double g = gamma_fn(1.0 - delta / 2.0);

  FeasibilityRegion region;
  region.coef_c = y_c;
  region.coef_d = psi_d * g * g * l_c / (psi_c * z_c * l_d);
  region.bound = l_c / (psi_c * z_c);
  region.region_case = RegionCase::dependent;
  return region;
}

FeasibilityRegion feasibility_dependent_fractional(const NetworkParams& params,
                                                   const PowerPolicy& policy_c, double exponent) {
  const double delta = params.delta();
  const double arg_y = 1.0 - exponent * delta;
  const double arg_z = 1.0 + delta * (exponent - 1.0);
  if (!(arg_y > 0.0) || !(arg_z > 0.0)) {
    throw MomentDiverges("E[P_d^delta] E[P_d^-delta h^-delta]",
                         "fractional D2D law has a divergent moment at this exponent");
  }
  FeasibilityRegion region = feasibility_dependent(params, policy_c);
  const double g = gamma_fn(1.0 - delta / 2.0);
  // Only the product E[xi^delta] E[xi^-delta h^-delta] of the D2D law enters.
  region.coef_d *= gamma_fn(arg_y) * gamma_fn(arg_z) / (g * g);
  return region;
}

PowerPolicy region_achieving_power_dependent(const NetworkParams& params,
                                             const PowerPolicy& policy_c) {
  const double delta = params.delta();
  if (!(delta < 2.0)) {
    throw DeltaOutOfRange("region_achieving_power_dependent: requires delta < 2");
  }
  const double z_c = policy_moments(policy_c, delta).z.require("E[P_c^-delta h_c^-delta]");
  const double psi_c = psi(params, Layer::cellular);
  const double psi_d = psi(params, Layer::d2d);
  const double l_c = log_target(params.cellular().outage_target);
  const double l_d = log_target(params.d2d().outage_target);
  const double bracket = psi_d * gamma_fn(1.0 - delta / 2.0) * l_c / (psi_c * z_c * l_d);
  return PowerPolicy::fractional(std::pow(bracket, 1.0 / delta), 0.5);
}

}  // namespace d2dpc
