#include <doctest.h>

#include <cmath>
#include <vector>

#include "d2dpc/error.hpp"
#include "d2dpc/model.hpp"
#include "d2dpc/outage.hpp"
#include "oracles.hpp"

using namespace d2dpc;

namespace {

NetworkParams random_params(oracle::Gen& gen) {
  const double delta = gen.pick(std::vector<double>{0.5, 0.75});
  LayerParams c{gen.log_uniform(1e-4, 1e-2), gen.uniform(0.5, 2.0), gen.log_uniform(0.05, 2.0),
                gen.uniform(0.005, 0.1)};
  LayerParams d{gen.log_uniform(1e-4, 1e-2), gen.uniform(0.5, 2.0), gen.log_uniform(0.05, 2.0),
                gen.uniform(0.005, 0.1)};
  return NetworkParams(c, d, 2.0 / delta);
}

}  // namespace

TEST_CASE("independent outage with constant powers at the default parameters") {
  const NetworkParams p = NetworkParams::defaults(0.001, 0.001);
  const double out = outage_independent_constant(p, 1.0, 1.0, Layer::cellular);
  CHECK(out == doctest::Approx(0.0037162).epsilon(1e-4));
  const double ref = 1.0 - std::exp(-oracle::phi(0.1, 1.0, 0.75) * 0.002);
  CHECK(oracle::rel_diff(out, ref) < 1e-12);
  CHECK(outage_independent_constant(p.with_densities(0.0, 0.0), 1.0, 1.0, Layer::d2d) == 0.0);
  CHECK_THROWS_AS(outage_independent_constant(p, 0.0, 1.0, Layer::d2d), InvalidParameter);
}

TEST_CASE("general independent outage reduces to the constant formula") {
  oracle::Gen gen(31);
  for (int i = 0; i < 30; ++i) {
    const NetworkParams p = random_params(gen);
    const double pc = gen.log_uniform(0.1, 10.0), pd = gen.log_uniform(0.1, 10.0);
    for (Layer w : {Layer::cellular, Layer::d2d}) {
      CHECK(oracle::rel_diff(outage_independent_general(p, PowerPolicy::constant(pc),
                                                        PowerPolicy::constant(pd), w),
                             outage_independent_constant(p, pc, pd, w)) < 1e-10);
    }
  }
}

TEST_CASE("general independent outage with a fractional law matches quadrature") {
  oracle::Gen gen(32);
  for (int i = 0; i < 20; ++i) {
    const NetworkParams p = random_params(gen);
    const double delta = p.delta();
    const double k = gen.log_uniform(0.2, 5.0), s = gen.uniform(0.0, 0.9);
    const PowerPolicy pc = PowerPolicy::fractional(k, s);
    const PowerPolicy pd = PowerPolicy::constant(gen.log_uniform(0.2, 5.0));
    const double y_c = std::pow(k, delta) * std::tgamma(1.0 - s * delta);
    const double mass = p.lambda_c() * y_c + p.lambda_d() * std::pow(pd.level(0.0), delta);
    const double kk = oracle::phi(p.cellular().sir_threshold, p.cellular().link_distance, delta) * mass;
    const double success = oracle::half_line([&](double h) {
      return std::exp(-kk * std::pow(k * std::pow(h, -s), -delta) - h);
    });
    CHECK(std::abs(outage_independent_general(p, pc, pd, Layer::cellular) - (1.0 - success)) <
          1e-10);
  }
}

TEST_CASE("dependent lower bound matches quadrature and sits below the linearised form") {
  oracle::Gen gen(33);
  for (int i = 0; i < 30; ++i) {
    const NetworkParams p = random_params(gen);
    const double delta = p.delta();
    const double kc = gen.log_uniform(0.2, 5.0), sc = gen.uniform(0.0, 0.9);
    const double kd = gen.log_uniform(0.2, 5.0), sd = gen.uniform(0.0, 0.9);
    const PowerPolicy pc = PowerPolicy::fractional(kc, sc);
    const PowerPolicy pd = PowerPolicy::fractional(kd, sd);
    for (Layer w : {Layer::cellular, Layer::d2d}) {
      const double k = w == Layer::cellular ? kc : kd;
      const double s = w == Layer::cellular ? sc : sd;
      const LayerParams& lp = p.layer(w);
      const double mass = p.lambda_c() * std::pow(kc, delta) * std::tgamma(1.0 - sc * delta) +
                          p.lambda_d() * std::pow(kd, delta) * std::tgamma(1.0 - sd * delta);
      const double kk = oracle::psi(lp.sir_threshold, lp.link_distance, delta) * mass;
      const double success = oracle::half_line([&](double h) {
        return std::exp(-kk * std::pow(h * k * std::pow(h, -s), -delta) - h);
      });
      const double lb = outage_dependent_lower_bound(p, pc, pd, w);
      CHECK(std::abs(lb - (1.0 - success)) < 1e-10);
      // Jensen: E[exp(-X)] >= exp(-E[X]).
      const double approx = outage_dependent_approx(p, pc, pd, w);
      CHECK(lb <= approx + 1e-15);
      const double z = std::pow(k, -delta) * std::tgamma(1.0 + delta * (s - 1.0));
      CHECK(oracle::rel_diff(approx, 1.0 - std::exp(-kk * z)) < 1e-12);
    }
  }
}

TEST_CASE("evaluate_outage dispatches on the mode") {
  const NetworkParams p = NetworkParams::defaults(0.002, 0.001);
  const PowerPolicy pc = PowerPolicy::constant(1.0);
  const PowerPolicy pd = PowerPolicy::fractional(0.3, 0.5);
  CHECK(evaluate_outage(OutageMode::independent_exact, p, pc, pd, Layer::d2d).value ==
        outage_independent_general(p, pc, pd, Layer::d2d));
  CHECK(evaluate_outage(OutageMode::dependent_lower_bound, p, pc, pd, Layer::d2d).value ==
        outage_dependent_lower_bound(p, pc, pd, Layer::d2d));
  CHECK(evaluate_outage(OutageMode::dependent_approx, p, pc, pd, Layer::cellular).value ==
        outage_dependent_approx(p, pc, pd, Layer::cellular));
}

TEST_CASE("interference mass ignores divergent moments of an empty layer") {
  const NetworkParams p = NetworkParams::defaults(0.001, 0.0);
  const double delta = p.delta();
  const PolicyMoments c = policy_moments(PowerPolicy::constant(1.0), delta);
  const PolicyMoments d = policy_moments(PowerPolicy::fractional(1.0, 1.5), delta);
  REQUIRE(d.y.is_infinite());
  CHECK(interference_mass(p, c, d).require("mass") == doctest::Approx(0.001));
  CHECK(interference_mass(p.with_densities(0.001, 0.001), c, d).is_infinite());
  CHECK(outage_independent_general(p.with_densities(0.001, 0.001), PowerPolicy::constant(1.0),
                                   PowerPolicy::fractional(1.0, 1.5), Layer::cellular) == 1.0);
}

TEST_CASE("cellular interference budget Q_c") {
  const double delta = 0.75;
  for (double eps : {0.001, 0.01, 0.1}) {
    for (double level : {0.1, 1.0, 7.0}) {
      const double q = find_qc(PowerPolicy::constant(level), eps, delta);
      CHECK(oracle::rel_diff(q, std::pow(level, delta) * -std::log1p(-eps)) < 1e-10);
    }
  }
  // Fractional law: survival at Q_c equals 1 - eps, checked by direct quadrature.
  oracle::Gen gen(34);
  for (int i = 0; i < 10; ++i) {
    const double k = gen.log_uniform(0.2, 5.0), s = gen.uniform(0.0, 1.0);
    const double eps = gen.uniform(0.005, 0.1);
    const double q = find_qc(PowerPolicy::fractional(k, s), eps, delta);
    const double survival = oracle::half_line([&](double h) {
      return std::exp(-q * std::pow(k * std::pow(h, -s), -delta) - h);
    });
    CHECK(std::abs(survival - (1.0 - eps)) < 1e-10);
  }
  // A law that is silent with probability above eps can never meet the target.
  CHECK_THROWS_AS(find_qc(PowerPolicy::piecewise({0.0, 1.0}, {1.0}), 0.01, delta),
                  InfeasibleDensities);
  CHECK_THROWS_AS(find_qc(PowerPolicy::constant(1.0), 0.0, delta), InvalidParameter);
  CHECK_THROWS_AS(qc_survival(PowerPolicy::constant(1.0), -1.0, delta), InvalidParameter);
}
