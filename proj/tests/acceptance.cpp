// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "d2dpc/error.hpp"
#include "d2dpc/experiment.hpp"
#include "d2dpc/feasibility.hpp"
#include "d2dpc/gp.hpp"
#include "d2dpc/outage.hpp"
#include "d2dpc/simulator.hpp"
#include "gp_oracle.hpp"
#include "oracles.hpp"

using namespace d2dpc;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

// Shared random corpus for the simulation criteria.
struct CorpusEntry {
  NetworkParams params;
  Layer which;
};

std::vector<CorpusEntry> corpus() {
  oracle::Gen gen(20240601);
  std::vector<CorpusEntry> out;
  for (int i = 0; i < 10; ++i) {
    const double delta = i % 2 == 0 ? 0.5 : 0.75;
    const double theta_c = gen.log_uniform(0.05, 0.5), theta_d = gen.log_uniform(0.05, 0.5);
    LayerParams c{gen.log_uniform(1e-4, 1e-2), 1.0, theta_c, 0.01};
    LayerParams d{gen.log_uniform(1e-4, 1e-2), gen.uniform(0.5, 1.0), theta_d, 0.01};
    out.push_back({NetworkParams(c, d, 2.0 / delta), i % 3 == 0 ? Layer::d2d : Layer::cellular});
  }
  return out;
}

Outcome closed_form_vs_simulation() {
  const auto start = Clock::now();
  oracle::Gen gen(7);
  int agree = 0;
  std::string worst;
  double worst_z = 0.0;
  std::uint64_t seed = 1000;
  for (const CorpusEntry& e : corpus()) {
    const double pc = gen.log_uniform(0.5, 2.0), pd = gen.log_uniform(0.5, 2.0);
    SimConfig cfg{e.params, PowerPolicy::constant(pc), PowerPolicy::constant(pd)};
    cfg.trials = 1'000'000;
    cfg.seed = seed++;
    const double exact = outage_independent_constant(e.params, pc, pd, e.which);
    const OutageEstimate est = simulate_outage(cfg, e.which);
    const double se = std::sqrt(exact * (1.0 - exact) / static_cast<double>(est.trials));
    const double z = std::abs(est.p_hat - exact) / se;
    if (z <= 3.0) ++agree;
    if (z > worst_z) {
      worst_z = z;
      worst = fmt("%.5g vs %.5g", est.p_hat, exact);
    }
  }
  const double t = seconds_since(start);
  return {agree >= 9 && t < 120.0,
          fmt("%d/10 within 3 SE (worst %.2f SE: %s), %.1f s of 120 s", agree, worst_z,
              worst.c_str(), t)};
}

Outcome lower_bound_below_simulation() {
  oracle::Gen gen(8);
  int held = 0;
  double worst = -INFINITY;
  std::uint64_t seed = 2000;
  for (const CorpusEntry& e : corpus()) {
    SimConfig cfg{e.params,
                  PowerPolicy::fractional(gen.log_uniform(0.5, 2.0), gen.uniform(0.1, 0.9)),
                  PowerPolicy::fractional(gen.log_uniform(0.2, 1.0), gen.uniform(0.1, 0.9))};
    cfg.control = ControlMode::dependent;
    cfg.trials = 1'000'000;
    cfg.seed = seed++;
    const OutageEstimate est = simulate_outage(cfg, e.which);
    const double lb =
        outage_dependent_lower_bound(e.params, cfg.policy_c, cfg.policy_d, e.which);
    const double sigma = est.standard_error();
    if (lb <= est.p_hat + 3.0 * sigma) ++held;
    worst = std::max(worst, (lb - est.p_hat) / sigma);
  }
  return {held == 10, fmt("%d/10 cases with bound <= estimate + 3 sigma (max excess %.2f sigma)",
                          held, worst)};
}

Outcome independent_optimum() {
  const auto start = Clock::now();
  const PowerPolicy one = PowerPolicy::constant(1.0);
  int points = 0, optimal = 0, mc_ok = 0;
  double worst_z = 0.0;
  std::uint64_t seed = 3000;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      const double lc = 0.0002 + 0.0004 * i, ld = 0.0004 + 0.0006 * j;
      const NetworkParams p = NetworkParams::defaults(lc, ld);
      const IndependentSolution sol = optimal_power_independent(p, one, INFINITY);
      ++points;
      if (!sol.feasible) continue;
      bool below_found = false, feasible_found = false;
      for (int k = 0; k < 200; ++k) {
        const double level = sol.p_d0 * std::pow(10.0, -3.0 + 4.0 * k / 199.0);
        const bool ok = outage_independent_constant(p, 1.0, level, Layer::cellular) <=
                            p.cellular().outage_target &&
                        outage_independent_constant(p, 1.0, level, Layer::d2d) <=
                            p.d2d().outage_target;
        if (ok && level < sol.p_d0 * (1.0 - 1e-6)) below_found = true;
        if (ok) feasible_found = true;
      }
      if (!below_found && feasible_found) ++optimal;

      SimConfig cfg{p, one, PowerPolicy::constant(sol.p_d0)};
      cfg.trials = 1'000'000;
      cfg.seed = seed++;
      const OutageEstimate est = simulate_outage(cfg, Layer::d2d);
      const double z = std::abs(est.p_hat - p.d2d().outage_target) / est.standard_error();
      worst_z = std::max(worst_z, z);
      if (z <= 3.0) ++mc_ok;
    }
  }
  const double t = seconds_since(start);
  return {optimal == 25 && mc_ok == 25 && t < 300.0,
          fmt("%d/%d grid points optimal over 200 levels, %d/25 simulated at eps_d within 3 "
              "sigma (worst %.2f), %.1f s of 300 s",
              optimal, points, mc_ok, worst_z, t)};
}

Outcome gp_convergence() {
  const auto start = Clock::now();
  ExperimentConfig cfg;
  cfg.scenario = Scenario::convergence;
  cfg.d2d.density = 0.01;
  cfg.n_list = {500, 1000, 2500, 5000};
  try {
    const Table t = convergence_sweep(cfg);
    bool monotone = true;
    std::string values;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      const double obj = std::get<double>(t.rows[i][1]);
      values += fmt("%s%.6g", i ? ", " : "", obj);
      if (i > 0 && obj > std::get<double>(t.rows[i - 1][1]) * (1.0 + 1e-9)) monotone = false;
    }
    const double change = std::abs(std::get<double>(t.rows.back()[2]));
    const double secs = seconds_since(start);
    return {monotone && change < 0.01 && secs < 600.0,
            fmt("objectives [%s], last relative change %.3g%%, %.1f s", values.c_str(),
                100.0 * change, secs)};
  } catch (const Error& e) {
    return {false, fmt("lambda_d = 0.01 not solvable: %s: %s", to_string(e.kind()), e.what())};
  }
}

Outcome gp_oracle_equivalence() {
  const double m = default_truncation();
  struct Case {
    std::vector<double> points;
    double lambda_c, lambda_d;
  };
  std::vector<Case> cases{
      {{0.0, m}, 0.001, 0.001},
      {{0.0, 1.0, m}, 0.001, 0.001},
      {{0.0, 1e-3, m}, 0.001, 0.002},
      {{0.0, 0.3, m}, 0.002, 0.0005},
      {{0.0, 0.5, 2.0, m}, 0.001, 0.001},
      {{0.0, 0.2, 1.5, m}, 0.0005, 0.003},
      {{0.0, 1e-3, 1.0, m}, 0.002, 0.001},
      {{0.0, 0.05, 0.4, 6.0}, 0.001, 0.002},
  };
  int matched = 0, total = 0;
  double worst = 0.0;
  std::string failures;
  for (const Case& c : cases) {
    const NetworkParams p = NetworkParams::defaults(c.lambda_c, c.lambda_d);
    const DiscretizedProblem prob = discretize(Grid::from_points(c.points), p,
                                               policy_moments(PowerPolicy::constant(1.0), p.delta()));
    ++total;
    try {
      const GpSolution s = solve_gp(prob);
      const oracle::BruteForce bf = oracle::brute_force_gp(prob);
      const double rel = oracle::rel_diff(s.objective, bf.objective);
      worst = std::max(worst, rel);
      if (rel <= 1e-3) ++matched;
    } catch (const Error& e) {
      failures += fmt(" [N=%zu: %s]", c.points.size() - 1, e.what());
    }
  }
  return {matched == total, fmt("%d/%d instances within 0.1%% (worst %.2e)%s", matched, total,
                                worst, failures.c_str())};
}

Outcome power_savings() {
  const auto start = Clock::now();
  ExperimentConfig cfg;  // lambda_d 0.001:0.01:10, P_c = 1, N = 5000
  const Table t = compare_sweep(cfg);
  int in_band = 0;
  std::string ratios;
  for (const auto& row : t.rows) {
    const double r = std::get<double>(row[3]);
    ratios += fmt("%s%.3g", ratios.empty() ? "" : " ", r);
    if (r >= 0.35 && r <= 0.65) ++in_band;
  }
  const int n = static_cast<int>(t.rows.size());
  return {2 * in_band > n, fmt("%d/%d sweep points with ratio in [0.35, 0.65] (ratios: %s), %.1f s",
                               in_band, n, ratios.c_str(), seconds_since(start))};
}

Outcome half_exponent_extremality() {
  bool ok = true;
  std::string detail;
  for (double delta : {0.5, 0.75}) {
    double best = INFINITY, best_s = -1.0;
    for (double s : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      const PolicyMoments mo = policy_moments(PowerPolicy::fractional(1.0, s), delta);
      const double product = mo.y.require("y") * mo.z.require("z");
      if (product < best) best = product, best_s = s;
    }
    const double target = std::pow(std::tgamma(1.0 - delta / 2.0), 2.0);
    const double rel = oracle::rel_diff(best, target);
    ok = ok && best_s == 0.5 && rel <= 1e-6;
    detail += fmt("%sdelta %.2f: min at s = %.2f, rel err %.1e", detail.empty() ? "" : "; ", delta,
                  best_s, rel);
  }
  return {ok, detail};
}

Outcome region_boundaries() {
  const PowerPolicy one = PowerPolicy::constant(1.0);
  const NetworkParams base = NetworkParams::defaults();
  const double eps = 0.01;
  bool ok = true;
  std::string detail;

  const FeasibilityRegion ind = feasibility_independent(base, one, INFINITY);
  const double q_c = find_qc(one, eps, base.delta());
  const double threshold = independent_threshold_power(base, q_c);
  const FeasibilityRegion dep = feasibility_dependent(base, one);
  int ind_ok = 0, dep_ok = 0, checks = 0;
  for (double t : {0.1, 0.5, 0.9}) {
    ++checks;
    {
      const auto [bc, bd] = ind.boundary_along(t, 1.0 - t);
      const NetworkParams in = base.with_densities(0.99 * bc, 0.99 * bd);
      const double pd = region_achieving_power_independent(in, one, INFINITY);
      const bool inside_ok = outage_independent_constant(in, 1.0, pd, Layer::cellular) <= eps &&
                             outage_independent_constant(in, 1.0, pd, Layer::d2d) <= eps;
      const NetworkParams out = base.with_densities(1.01 * bc, 1.01 * bd);
      const bool outside_violates =
          outage_independent_constant(out, 1.0, threshold, Layer::cellular) > eps ||
          outage_independent_constant(out, 1.0, threshold, Layer::d2d) > eps;
      if (inside_ok && outside_violates) ++ind_ok;
    }
    {
      const auto [bc, bd] = dep.boundary_along(t, 1.0 - t);
      const NetworkParams in = base.with_densities(0.99 * bc, 0.99 * bd);
      const PowerPolicy pd = region_achieving_power_dependent(in, one);
      const bool inside_ok = outage_dependent_approx(in, one, pd, Layer::cellular) <= eps &&
                             outage_dependent_approx(in, one, pd, Layer::d2d) <= eps;
      const NetworkParams out = base.with_densities(1.01 * bc, 1.01 * bd);
      const bool outside_violates = outage_dependent_approx(out, one, pd, Layer::cellular) > eps ||
                                    outage_dependent_approx(out, one, pd, Layer::d2d) > eps;
      if (inside_ok && outside_violates) ++dep_ok;
    }
  }
  ok = ind_ok == checks && dep_ok == checks;
  detail = fmt("independent region %d/%d rays, dependent region %d/%d rays", ind_ok, checks,
               dep_ok, checks);

  // Simulation at the independent inside point on the diagonal.
  const auto [bc, bd] = ind.boundary_along(0.5, 0.5);
  const NetworkParams in = base.with_densities(0.99 * bc, 0.99 * bd);
  const double pd = region_achieving_power_independent(in, one, INFINITY);
  SimConfig cfg{in, one, PowerPolicy::constant(pd)};
  cfg.trials = 1'000'000;
  cfg.seed = 4000;
  for (Layer w : {Layer::cellular, Layer::d2d}) {
    const OutageEstimate est = simulate_outage(cfg, w);
    const double exact = outage_independent_constant(in, 1.0, pd, w);
    const bool sim_ok = est.p_hat <= eps + est.half_width_95 &&
                        std::abs(est.p_hat - exact) <= 3.0 * est.standard_error();
    ok = ok && sim_ok;
    detail += fmt("; %s simulated %.5f +- %.5f (analytic %.5f)", to_string(w), est.p_hat,
                  est.half_width_95, exact);
  }
  return {ok, detail};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("d2dpc_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  auto run = [&](const std::string& args, const fs::path& out) {
    const std::string cmd = std::string("\"") + D2DPC_CLI_PATH + "\" " + args + " --out \"" +
                            out.string() + "\" 2> /dev/null";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) && WEXITSTATUS(status) == 0;
  };
  const std::string args = "simulate --trials 200000 --seed 11 --lambda-c 0.002 --lambda-d 0.003";
  const bool ran = run(args, dir / "a.csv") && run(args, dir / "b.csv") &&
                   run("run --config \"" + (dir / "a.csv").string() + "\"", dir / "c.csv");
  const std::string a = slurp(dir / "a.csv");
  const bool same = ran && !a.empty() && a == slurp(dir / "b.csv");
  const bool reload = ran && a == slurp(dir / "c.csv");
  fs::remove_all(dir);
  return {same && reload, fmt("two runs %s, rerun from the output header %s",
                              same ? "byte-identical" : "differ",
                              reload ? "byte-identical" : "differs")};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"closed-form outage vs simulation", closed_form_vs_simulation},
      {"dependent lower bound vs simulation", lower_bound_below_simulation},
      {"independent optimum is minimal", independent_optimum},
      {"GP convergence at lambda_d = 0.01", gp_convergence},
      {"GP vs exhaustive search (N <= 3)", gp_oracle_equivalence},
      {"dependent/independent power ratio", power_savings},
      {"half-exponent law minimizes the moment product", half_exponent_extremality},
      {"feasibility region boundaries", region_boundaries},
      {"deterministic CSV output", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("[%s] %zu. %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu criteria, %d failed\n", criteria.size(), failed);
  return failed == 0 ? 0 : 1;
}
