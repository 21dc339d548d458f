#pragma once

#include <cstdint>

#include "d2dpc/model.hpp"

namespace d2dpc {

/// How the typical transmitter's power relates to its own direct-link fade.
/// Independent: the power law is evaluated at a fade drawn independently of
/// every channel. Dependent: it is evaluated at the direct-link fade itself.
enum class ControlMode { independent, dependent };

const char* to_string(ControlMode mode);

struct SimConfig {
  NetworkParams params;
  PowerPolicy policy_c;
  PowerPolicy policy_d;
  ControlMode control = ControlMode::independent;
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 1;
  double window_radius = 0.0;  // <= 0 selects default_window_radius
  double offset_x = 0.0;       // window centre relative to the receiver
  double offset_y = 0.0;
  bool far_field_correction = true;
  unsigned threads = 0;  // 0: D2DPL_THREADS, else hardware concurrency
};

struct OutageEstimate {
  double p_hat = 0.0;
  double half_width_95 = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t outages = 0;
  std::uint64_t interferers = 0;  // summed over trials and layers
  double window_radius = 0.0;
  double far_field_mean = 0.0;  // deterministic interference added per trial
  bool far_field_applied = false;
  std::uint64_t seed = 0;

  /// sqrt(p(1-p)/n), floored at 1/n so that zero-outage runs keep a scale.
  double standard_error() const;
};

/// Radius beyond which replacing the interference by its mean moves the
/// outage probability by less than about 1e-6 (at least 10 link distances).
/// Falls back to 20 link distances when a needed moment diverges.
double default_window_radius(const SimConfig& cfg, Layer which);

/// Mean interference from transmitters outside the disc of radius R around
/// the receiver; +inf when a mean power diverges.
double far_field_mean(const SimConfig& cfg, double radius);

/// Monte-Carlo outage estimate for the typical `which` receiver. Requires
/// delta < 1. Deterministic for a given seed regardless of thread count.
OutageEstimate simulate_outage(const SimConfig& cfg, Layer which);

struct BoundReport {
  OutageEstimate simulated;
  double lower_bound = 0.0;
  double approx = 0.0;
  double gap_approx_bound = 0.0;      // approx - lower_bound
  double gap_simulated_bound = 0.0;   // simulated - lower_bound
  double gap_approx_simulated = 0.0;  // approx - simulated
};

/// Simulates a dependent configuration and compares it with the analytic
/// lower bound and its linearised form. Throws BoundViolation when the bound
/// exceeds the estimate by more than three standard errors.
BoundReport validate_bound(const SimConfig& cfg, Layer which);

}  // namespace d2dpc
