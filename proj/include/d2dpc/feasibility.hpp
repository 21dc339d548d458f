#pragma once

#include <string>
#include <utility>
#include <vector>

#include "d2dpc/model.hpp"

namespace d2dpc {

enum class RegionCase { independent_high_peak, independent_low_peak, dependent };

const char* to_string(RegionCase region_case);

/// Half-plane {(lambda_c, lambda_d) >= 0 : coef_c lambda_c + coef_d lambda_d <= bound}.
struct FeasibilityRegion {
  double coef_c = 0.0;
  double coef_d = 0.0;
  double bound = 0.0;
  RegionCase region_case = RegionCase::independent_high_peak;

  /// Closed region with a relative slack of 1e-9 on the bound.
  bool contains(double lambda_c, double lambda_d, double rel_slack = 1e-9) const;

  /// coef_c lambda_c + coef_d lambda_d divided by the bound (1 on the boundary).
  double load(double lambda_c, double lambda_d) const;

  double lambda_c_intercept() const { return bound / coef_c; }
  double lambda_d_intercept() const { return bound / coef_d; }

  /// Boundary point on the ray through (lambda_c, lambda_d) from the origin.
  std::pair<double, double> boundary_along(double lambda_c, double lambda_d) const;

  /// `points` evenly spaced (lambda_c, lambda_d) pairs along the boundary
  /// segment, from the lambda_d axis to the lambda_c axis.
  std::vector<std::pair<double, double>> boundary(std::size_t points) const;

  std::string describe() const;
};

/// Fixed (optimal) independent D2D power and the matching E[P_d^delta].
struct IndependentSolution {
  double p_d0 = 0.0;
  double y0 = 0.0;
  double r_c = 0.0;  // cap on E[P_d^delta] from the cellular constraint
  bool feasible = false;
  std::string reason;

  /// Throws InfeasibleDensities carrying `reason` when not feasible.
  const IndependentSolution& require_feasible() const;
};

/// Region reachable with independent control for a given cellular law and
/// D2D peak power (+inf for none).
FeasibilityRegion feasibility_independent(const NetworkParams& params,
                                          const PowerPolicy& policy_c, double pd_max);

/// Peak level separating the high- and low-peak cases.
double independent_threshold_power(const NetworkParams& params, double q_c);

/// Constant D2D power reaching the independent region.
double region_achieving_power_independent(const NetworkParams& params, double q_c,
                                          double y_c, double pd_max);
double region_achieving_power_independent(const NetworkParams& params,
                                          const PowerPolicy& policy_c, double pd_max);

/// Minimum-mean D2D power under independent control (a constant).
IndependentSolution optimal_power_independent(const NetworkParams& params,
                                              const PowerPolicy& policy_c, double pd_max);

/// Region under channel-dependent control (linearised outage).
FeasibilityRegion feasibility_dependent(const NetworkParams& params,
                                        const PowerPolicy& policy_c);

/// Region reached when D2D users run a fractional law with exponent s (any
/// scale). Linear in the densities; coincides with feasibility_dependent at
/// s = 1/2 and shrinks away from it.
FeasibilityRegion feasibility_dependent_fractional(const NetworkParams& params,
                                                   const PowerPolicy& policy_c, double exponent);

/// Fractional policy with exponent 1/2 reaching the dependent region.
PowerPolicy region_achieving_power_dependent(const NetworkParams& params,
                                             const PowerPolicy& policy_c);

}  // namespace d2dpc
