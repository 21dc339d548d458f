#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "d2dpc/error.hpp"
#include "d2dpc/model.hpp"

namespace d2dpc {

/// Channel-gain breakpoints 0 <= x_0 < x_1 < ... < x_N = M.
struct Grid {
  std::vector<double> points;

  std::size_t segments() const { return points.size() - 1; }
  double truncation() const { return points.back(); }

  /// Validates and wraps arbitrary breakpoints. Throws InvalidGrid.
  static Grid from_points(std::vector<double> points);
};

/// Smallest M (to 1e-12) with e^-M < tail_mass.
double default_truncation(double tail_mass = 1e-9);

/// Dense uniform prefix on [0, dense_cap] holding split * N segments, then a
/// uniform suffix on [dense_cap, M]. Requires N >= 2 even and M > dense_cap > 0.
Grid build_grid(std::size_t segments, double truncation, double split = 0.5,
                double dense_cap = 1e-3);

/// Coefficients of the discretized minimum-power problem
///   min sum a_i p_i
///   s.t. (A + lambda_d sum a_i p_i^delta) sum c_i p_i^-delta <= B
///        sum a_i p_i^delta <= C
struct DiscretizedProblem {
  Grid grid;
  std::vector<double> a;  // mass of e^-h per cell
  std::vector<double> c;  // mass of h^-delta e^-h per cell
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;  // +inf when lambda_d == 0
  double lambda_d = 0.0;
  double delta = 0.0;
};

/// Throws InfeasibleDensities when the cellular constraint leaves no room
/// (C < 0) and DeltaOutOfRange when delta >= 1 with a cell touching h = 0.
DiscretizedProblem discretize(const Grid& grid, const NetworkParams& params,
                              const PolicyMoments& moments_c);

struct GpOptions {
  double floor = 1e-12;          // lower bound on every level
  std::size_t max_iterations = 500;  // Newton steps, all centring rounds together
  double gap_tolerance = 1e-10;  // duality gap on ln E[P]
  double barrier_growth = 10.0;
};

struct GpSolution {
  std::vector<double> levels;
  double objective = 0.0;  // sum a_i p_i
  double kkt_residual = 0.0;
  std::size_t iterations = 0;
  bool floor_active = false;
};

/// Log-form constraint values at given levels: the objective ln sum a_i p_i
/// and the two constraints (<= 0 when satisfied; -inf when absent).
struct GpEvaluation {
  double log_objective;
  double interference;  // ln((A + lambda_d Y) Z / B)
  double cellular;      // ln(Y / C)
};

GpEvaluation evaluate_gp(const DiscretizedProblem& problem,
                         const std::vector<double>& levels);

/// Raised when the Newton budget runs out; carries the last strictly feasible
/// iterate.
class GpNonConvergence : public NonConvergence {
 public:
  GpNonConvergence(const std::string& what, GpSolution best)
      : NonConvergence(what), best_(std::move(best)) {}

  const GpSolution& best() const noexcept { return best_; }

 private:
  GpSolution best_;
};

/// Strictly feasible starting levels: the fractional-1/2 law sampled at cell
/// midpoints, or the shape minimizing Y Z, scaled into the interior.
/// Throws InfeasibleDiscretization when neither admits a feasible scale.
std::vector<double> seed_levels(const DiscretizedProblem& problem, double floor = 1e-12);

/// Barrier interior-point solve in u = ln p.
GpSolution solve_gp(const DiscretizedProblem& problem, const GpOptions& options = {});

struct DependentPowerResult {
  GpSolution solution;
  PowerPolicy policy;
  PolicyMoments moments;
};

/// Grid, discretize and solve. Throws InfeasibleDensities outside the
/// dependent feasibility region.
DependentPowerResult dependent_minimum_power(const NetworkParams& params,
                                             const PowerPolicy& policy_c,
                                             std::size_t segments = 5000,
                                             double truncation = default_truncation(),
                                             const GpOptions& options = {});

}  // namespace d2dpc
