#include "d2dpc/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "d2dpc/error.hpp"
#include "d2dpc/outage.hpp"

namespace d2dpc {
namespace {

constexpr std::uint64_t kBlock = 8192;
constexpr double kPi = std::numbers::pi;

unsigned worker_count(unsigned requested, std::uint64_t blocks) {
  unsigned n = requested;
  if (n == 0) {
    if (const char* env = std::getenv("D2DPL_THREADS")) {
      char* end = nullptr;
      const long v = std::strtol(env, &end, 10);
      if (end != env && v > 0) n = static_cast<unsigned>(v);
    }
  }
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::uint64_t>(n, std::max<std::uint64_t>(blocks, 1)));
}

struct BlockResult {
  std::uint64_t outages = 0;
  std::uint64_t interferers = 0;
};

struct Setup {
  const SimConfig* cfg;
  Layer which;
  double radius;
  double far_mean;
  double path_exponent;  // alpha / 2, applied to squared distances
  double link_gain;      // r^-alpha of the typical link
  double threshold;
  double count_mean[2];
  const PowerPolicy* policies[2];
  bool dependent;
};

BlockResult run_block(const Setup& s, std::uint64_t block, std::uint64_t count) {
  std::seed_seq seq{static_cast<std::uint32_t>(s.cfg->seed),
                    static_cast<std::uint32_t>(s.cfg->seed >> 32),
                    static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
  std::mt19937_64 rng(seq);
  std::exponential_distribution<double> fade(1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::poisson_distribution<std::uint64_t> counts[2] = {
      std::poisson_distribution<std::uint64_t>(std::max(s.count_mean[0], 1e-300)),
      std::poisson_distribution<std::uint64_t>(std::max(s.count_mean[1], 1e-300))};
  const PowerPolicy& own = *s.policies[s.which == Layer::cellular ? 0 : 1];
  const double r2 = s.radius * s.radius;
  const double ox = s.cfg->offset_x;
  const double oy = s.cfg->offset_y;

  BlockResult out;
  for (std::uint64_t trial = 0; trial < count; ++trial) {
    const double h = fade(rng);
    const double own_fade = s.dependent ? h : fade(rng);
    const double signal = own.level(own_fade) * h * s.link_gain;
    double interference = s.far_mean;
    for (int layer = 0; layer < 2; ++layer) {
      if (!(s.count_mean[layer] > 0.0)) continue;
      const std::uint64_t k = counts[layer](rng);
      out.interferers += k;
      for (std::uint64_t j = 0; j < k; ++j) {
        const double rho2 = r2 * unit(rng);
        const double angle = 2.0 * kPi * unit(rng);
        const double rho = std::sqrt(rho2);
        const double x = ox + rho * std::cos(angle);
        const double y = oy + rho * std::sin(angle);
        const double power = s.policies[layer]->level(fade(rng));
        const double gain = fade(rng);
        interference += power * gain * std::pow(x * x + y * y, -s.path_exponent);
      }
    }
    // Noise is neglected, so a trial without interference never fails.
    if (interference > 0.0 && signal <= s.threshold * interference) ++out.outages;
  }
  return out;
}

double max_link_distance(const NetworkParams& p) {
  return std::max(p.cellular().link_distance, p.d2d().link_distance);
}

}  // namespace

const char* to_string(ControlMode mode) {
  return mode == ControlMode::independent ? "independent" : "dependent";
}

double OutageEstimate::standard_error() const {
  if (trials == 0) return 1.0;
  const double n = static_cast<double>(trials);
  return std::max(std::sqrt(p_hat * (1.0 - p_hat) / n), 1.0 / n);
}

double far_field_mean(const SimConfig& cfg, double radius) {
  const NetworkParams& p = cfg.params;
  const double alpha = p.alpha();
  double total = 0.0;
  const PowerPolicy* policies[2] = {&cfg.policy_c, &cfg.policy_d};
  const double lambdas[2] = {p.lambda_c(), p.lambda_d()};
  for (int layer = 0; layer < 2; ++layer) {
    if (lambdas[layer] == 0.0) continue;
    const MomentValue mean = raw_moment(*policies[layer], 1.0);
    if (mean.is_infinite()) return std::numeric_limits<double>::infinity();
    total += lambdas[layer] * mean.require("E[P]") * 2.0 * kPi *
             std::pow(radius, 2.0 - alpha) / (alpha - 2.0);
  }
  return total;
}

double default_window_radius(const SimConfig& cfg, Layer which) {
  const NetworkParams& p = cfg.params;
  const double r_max = max_link_distance(p);
  const double alpha = p.alpha();
  const LayerParams& typ = p.layer(which);
  const PowerPolicy& own = which == Layer::cellular ? cfg.policy_c : cfg.policy_d;

  // Second-order effect of swapping the far field for its mean:
  //   1/2 theta^2 r^(2 alpha) E[P^-2] Var(I_far),
  //   Var(I_far) = sum lambda E[P^2] E[h^2] 2 pi R^(2 - 2 alpha) / (2 alpha - 2).
  const MomentValue inv2 = raw_moment(own, -2.0);
  if (inv2.is_infinite()) return 20.0 * r_max;
  double var_coef = 0.0;
  const PowerPolicy* policies[2] = {&cfg.policy_c, &cfg.policy_d};
  const double lambdas[2] = {p.lambda_c(), p.lambda_d()};
  for (int layer = 0; layer < 2; ++layer) {
    if (lambdas[layer] == 0.0) continue;
    const MomentValue m2 = raw_moment(*policies[layer], 2.0);
    if (m2.is_infinite()) return 20.0 * r_max;
    var_coef += lambdas[layer] * m2.require("E[P^2]") * 2.0 * 2.0 * kPi / (2.0 * alpha - 2.0);
  }
  const double sensitivity = 0.5 * typ.sir_threshold * typ.sir_threshold *
                             std::pow(typ.link_distance, 2.0 * alpha) *
                             inv2.require("E[P^-2]") * var_coef;
  constexpr double kTarget = 1e-6;
  double radius = 10.0 * r_max;
  if (sensitivity > 0.0) {
    radius = std::max(radius, std::pow(sensitivity / kTarget, 1.0 / (2.0 * alpha - 2.0)));
  }
  return radius;
}

OutageEstimate simulate_outage(const SimConfig& cfg, Layer which) {
  const NetworkParams& p = cfg.params;
  p.require_delta_below_one("simulate_outage");
  if (cfg.trials == 0) throw InvalidParameter("simulate_outage: trials must be > 0");

  Setup s{};
  s.cfg = &cfg;
  s.which = which;
  s.radius = cfg.window_radius > 0.0 ? cfg.window_radius : default_window_radius(cfg, which);
  if (std::hypot(cfg.offset_x, cfg.offset_y) >= s.radius) {
    throw InvalidParameter("simulate_outage: window offset must stay inside the window");
  }
  OutageEstimate est;
  est.window_radius = s.radius;
  est.seed = cfg.seed;
  est.trials = cfg.trials;
  if (cfg.far_field_correction) {
    const double mean = far_field_mean(cfg, s.radius);
    if (std::isfinite(mean)) {
      s.far_mean = mean;
      est.far_field_mean = mean;
      est.far_field_applied = true;
    }
  }
  s.path_exponent = p.alpha() / 2.0;
  s.link_gain = std::pow(p.layer(which).link_distance, -p.alpha());
  s.threshold = p.layer(which).sir_threshold;
  s.count_mean[0] = p.lambda_c() * kPi * s.radius * s.radius;
  s.count_mean[1] = p.lambda_d() * kPi * s.radius * s.radius;
  s.policies[0] = &cfg.policy_c;
  s.policies[1] = &cfg.policy_d;
  s.dependent = cfg.control == ControlMode::dependent;

  const std::uint64_t blocks = (cfg.trials + kBlock - 1) / kBlock;
  std::vector<BlockResult> results(blocks);
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (std::uint64_t b = next++; b < blocks; b = next++) {
      const std::uint64_t first = b * kBlock;
      results[b] = run_block(s, b, std::min(kBlock, cfg.trials - first));
    }
  };
  const unsigned workers = worker_count(cfg.threads, blocks);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const BlockResult& r : results) {
    est.outages += r.outages;
    est.interferers += r.interferers;
  }
  const double n = static_cast<double>(est.trials);
  est.p_hat = static_cast<double>(est.outages) / n;
  est.half_width_95 = 1.96 * std::sqrt(est.p_hat * (1.0 - est.p_hat) / n);
  return est;
}

BoundReport validate_bound(const SimConfig& cfg, Layer which) {
  if (cfg.control != ControlMode::dependent) {
    throw InvalidParameter("validate_bound: needs a channel-dependent configuration");
  }
  BoundReport report;
  report.simulated = simulate_outage(cfg, which);
  report.lower_bound = outage_dependent_lower_bound(cfg.params, cfg.policy_c, cfg.policy_d, which);
  report.approx = outage_dependent_approx(cfg.params, cfg.policy_c, cfg.policy_d, which);
  const double p_hat = report.simulated.p_hat;
  report.gap_approx_bound = report.approx - report.lower_bound;
  report.gap_simulated_bound = p_hat - report.lower_bound;
  report.gap_approx_simulated = report.approx - p_hat;
  const double sigma = report.simulated.standard_error();
  if (report.lower_bound > p_hat + 3.0 * sigma) {
    std::ostringstream msg;
    msg << "lower bound " << report.lower_bound << " exceeds simulated outage " << p_hat
        << " by more than 3 standard errors (" << sigma << ")";
    throw BoundViolation(msg.str());
  }
  return report;
}

}  // namespace d2dpc
