#include <doctest.h>

#include <cmath>
#include <vector>

#include "d2dpc/error.hpp"
#include "d2dpc/feasibility.hpp"
#include "d2dpc/outage.hpp"
#include "oracles.hpp"

using namespace d2dpc;

namespace {

const double kInf = INFINITY;

double l_of(double eps) { return -std::log1p(-eps); }

}  // namespace

TEST_CASE("independent optimum at the default parameters") {
  const NetworkParams p = NetworkParams::defaults(0.001, 0.001);
  const IndependentSolution sol = optimal_power_independent(p, PowerPolicy::constant(1.0), kInf);
  REQUIRE(sol.feasible);
  CHECK(sol.p_d0 == doctest::Approx(0.138742).epsilon(1e-5));
  CHECK(sol.y0 == doctest::Approx(0.22733).epsilon(1e-4));
  CHECK(sol.r_c == doctest::Approx(4.39889).epsilon(1e-5));

  // Oracle: the D2D constraint with equality, lambda_c + lambda_d y0 = L_d y0 / phi_d.
  const double ph = oracle::phi(0.1, 1.0, 0.75);
  const double y0 = 0.001 / (l_of(0.01) / ph - 0.001);
  CHECK(oracle::rel_diff(sol.y0, y0) < 1e-12);
  CHECK(std::abs(outage_independent_constant(p, 1.0, sol.p_d0, Layer::d2d) - 0.01) < 1e-12);
  CHECK(outage_independent_constant(p, 1.0, sol.p_d0 * (1.0 - 1e-6), Layer::d2d) > 0.01);
  CHECK(outage_independent_constant(p, 1.0, sol.p_d0, Layer::cellular) < 0.01);
}

TEST_CASE("independent optimum corner cases") {
  const PowerPolicy one = PowerPolicy::constant(1.0);
  SUBCASE("no cellular users needs no D2D power") {
    const IndependentSolution sol =
        optimal_power_independent(NetworkParams::defaults(0.0, 0.002), one, kInf);
    CHECK(sol.feasible);
    CHECK(sol.p_d0 == 0.0);
  }
  SUBCASE("D2D self-interference limit") {
    const IndependentSolution sol =
        optimal_power_independent(NetworkParams::defaults(0.001, 0.006), one, kInf);
    CHECK_FALSE(sol.feasible);
    CHECK(std::isinf(sol.p_d0));
    CHECK_FALSE(sol.reason.empty());
    CHECK_THROWS_AS(sol.require_feasible(), InfeasibleDensities);
  }
  SUBCASE("cellular cap exceeded") {
    const IndependentSolution sol =
        optimal_power_independent(NetworkParams::defaults(0.005, 0.001), one, kInf);
    CHECK_FALSE(sol.feasible);
    CHECK(sol.y0 > sol.r_c);
  }
  SUBCASE("peak below the optimum") {
    const IndependentSolution sol =
        optimal_power_independent(NetworkParams::defaults(0.001, 0.001), one, 0.1);
    CHECK_FALSE(sol.feasible);
    CHECK(sol.reason.find("peak") != std::string::npos);
  }
  CHECK_THROWS_AS(optimal_power_independent(NetworkParams::defaults(0.001, 0.001), one, 0.0),
                  InvalidParameter);
}

TEST_CASE("independent region, high-peak case") {
  const NetworkParams p = NetworkParams::defaults(0.001, 0.001);
  const FeasibilityRegion r = feasibility_independent(p, PowerPolicy::constant(1.0), kInf);
  CHECK(r.region_case == RegionCase::independent_high_peak);
  const double ph = oracle::phi(0.1, 1.0, 0.75);
  const double q_c = l_of(0.01);  // constant unit cellular power
  CHECK(oracle::rel_diff(r.lambda_c_intercept(), q_c / ph) < 1e-10);
  CHECK(oracle::rel_diff(r.lambda_d_intercept(), l_of(0.01) / ph) < 1e-12);
  CHECK(r.lambda_c_intercept() == doctest::Approx(0.00539889).epsilon(1e-6));
  CHECK(r.coef_c == doctest::Approx(185.2232).epsilon(1e-6));
  CHECK(r.contains(0.001, 0.001));
  CHECK_FALSE(r.contains(0.003, 0.003));
  CHECK_FALSE(r.contains(-0.001, 0.0));

  const auto pts = r.boundary(5);
  REQUIRE(pts.size() == 5);
  CHECK(pts.front().first == 0.0);
  CHECK(pts.back().second == 0.0);
  for (const auto& [lc, ld] : pts) CHECK(r.load(lc, ld) == doctest::Approx(1.0).epsilon(1e-12));
  const auto [bc, bd] = r.boundary_along(1.0, 2.0);
  CHECK(bd == doctest::Approx(2.0 * bc));
  CHECK(r.load(bc, bd) == doctest::Approx(1.0));
  CHECK_THROWS_AS(r.boundary_along(0.0, 0.0), InvalidParameter);
  CHECK(r.describe().find("independent-high-peak") != std::string::npos);
}

TEST_CASE("independent region, low-peak case and the threshold") {
  const NetworkParams p = NetworkParams::defaults(0.001, 0.001);
  const PowerPolicy one = PowerPolicy::constant(1.0);
  const double q_c = find_qc(one, 0.01, 0.75);
  const double threshold = independent_threshold_power(p, q_c);
  CHECK(threshold == doctest::Approx(1.0));  // identical layers
  const FeasibilityRegion low = feasibility_independent(p, one, 0.5);
  CHECK(low.region_case == RegionCase::independent_low_peak);
  CHECK(oracle::rel_diff(low.coef_c, 1.0 / std::pow(0.5, 0.75)) < 1e-12);
  CHECK(low.coef_d == 1.0);
  // The two lines coincide at the threshold.
  const FeasibilityRegion at = feasibility_independent(p, one, threshold);
  const FeasibilityRegion high = feasibility_independent(p, one, kInf);
  CHECK(oracle::rel_diff(at.lambda_c_intercept(), high.lambda_c_intercept()) < 1e-9);
  CHECK(oracle::rel_diff(at.lambda_d_intercept(), high.lambda_d_intercept()) < 1e-9);
  // A lower peak only shrinks the region.
  CHECK(low.lambda_c_intercept() < high.lambda_c_intercept());
}

TEST_CASE("region-achieving independent power meets both exact constraints") {
  oracle::Gen gen(41);
  const NetworkParams base = NetworkParams::defaults();
  const PowerPolicy one = PowerPolicy::constant(1.0);
  for (double pd_max : {kInf, 0.5}) {
    const FeasibilityRegion r = feasibility_independent(base, one, pd_max);
    for (int i = 0; i < 20; ++i) {
      const double t = gen.uniform(0.0, 1.0);
      const auto [bc, bd] = r.boundary_along(t, 1.0 - t);
      const NetworkParams p = base.with_densities(0.99 * bc, 0.99 * bd);
      const double pd = region_achieving_power_independent(p, one, pd_max);
      CHECK(pd <= pd_max);
      CHECK(outage_independent_constant(p, 1.0, pd, Layer::cellular) <= 0.01 * (1.0 + 1e-12));
      CHECK(outage_independent_constant(p, 1.0, pd, Layer::d2d) <= 0.01 * (1.0 + 1e-12));
      const NetworkParams out = base.with_densities(1.01 * bc, 1.01 * bd);
      CHECK_THROWS_AS(region_achieving_power_independent(out, one, pd_max), InfeasibleDensities);
    }
  }
}

TEST_CASE("dependent region at the default parameters") {
  const NetworkParams p = NetworkParams::defaults(0.001, 0.001);
  const FeasibilityRegion r = feasibility_dependent(p, PowerPolicy::constant(1.0));
  CHECK(r.region_case == RegionCase::dependent);
  const double g = std::tgamma(1.0 - 0.375);
  CHECK(oracle::rel_diff(r.coef_d, g * g / std::tgamma(0.25)) < 1e-12);
  CHECK(r.coef_d == doctest::Approx(0.567586).epsilon(1e-6));
  CHECK(r.coef_c == 1.0);
  const double ps = oracle::psi(0.1, 1.0, 0.75);
  CHECK(oracle::rel_diff(r.bound, l_of(0.01) / (ps * std::tgamma(0.25))) < 1e-12);
  CHECK(r.lambda_d_intercept() == doctest::Approx(0.0095120).epsilon(1e-4));
}

TEST_CASE("half-exponent law reaches the dependent boundary on both constraints") {
  oracle::Gen gen(42);
  for (int i = 0; i < 20; ++i) {
    const double delta = gen.pick(std::vector<double>{0.5, 0.75});
    LayerParams c{0.0, gen.uniform(0.5, 2.0), gen.log_uniform(0.05, 1.0), gen.uniform(0.005, 0.1)};
    LayerParams d{0.0, gen.uniform(0.5, 2.0), gen.log_uniform(0.05, 1.0), gen.uniform(0.005, 0.1)};
    const NetworkParams base(c, d, 2.0 / delta);
    const PowerPolicy pc = PowerPolicy::fractional(gen.log_uniform(0.5, 2.0), gen.uniform(0.0, 0.9));
    const FeasibilityRegion r = feasibility_dependent(base, pc);
    const double t = gen.uniform(0.05, 0.95);
    const auto [bc, bd] = r.boundary_along(t, 1.0 - t);
    const NetworkParams p = base.with_densities(bc, bd);
    const PowerPolicy pd = region_achieving_power_dependent(p, pc);
    CHECK(std::abs(outage_dependent_approx(p, pc, pd, Layer::cellular) - c.outage_target) < 1e-10);
    CHECK(std::abs(outage_dependent_approx(p, pc, pd, Layer::d2d) - d.outage_target) < 1e-10);
  }
}

TEST_CASE("fractional D2D regions shrink away from the half exponent") {
  const NetworkParams p = NetworkParams::defaults();
  const PowerPolicy one = PowerPolicy::constant(1.0);
  const FeasibilityRegion half = feasibility_dependent_fractional(p, one, 0.5);
  const FeasibilityRegion ref = feasibility_dependent(p, one);
  CHECK(oracle::rel_diff(half.coef_d, ref.coef_d) < 1e-14);
  CHECK(half.coef_c == ref.coef_c);
  CHECK(half.bound == ref.bound);
  const double quarter = feasibility_dependent_fractional(p, one, 0.25).coef_d;
  CHECK(quarter == doctest::Approx(0.6425112).epsilon(1e-6));
  CHECK(oracle::rel_diff(feasibility_dependent_fractional(p, one, 0.75).coef_d, quarter) < 1e-12);
  for (double s : {0.0, 0.1, 0.3, 0.45, 0.55, 0.9, 1.0}) {
    CHECK(feasibility_dependent_fractional(p, one, s).coef_d > ref.coef_d);
  }
  CHECK_THROWS_AS(feasibility_dependent_fractional(p, one, 1.5), MomentDiverges);
}
