#pragma once

#include "d2dpc/model.hpp"

namespace d2dpc {

enum class OutageMode { independent_exact, dependent_lower_bound, dependent_approx };

const char* to_string(OutageMode mode);

struct OutageModel {
  OutageMode mode;
  double value;  // probability in [0, 1]
};

/// lambda_c E[P_c^delta] + lambda_d E[P_d^delta]; zero density suppresses a
/// divergent moment (no transmitters, no interference). Infinite otherwise.
MomentValue interference_mass(const NetworkParams& params, const PolicyMoments& cellular,
                              const PolicyMoments& d2d);

/// Exact outage of the typical `which` user when both layers transmit at a
/// constant power.
double outage_independent_constant(const NetworkParams& params, double p_c, double p_d,
                                   Layer which);

/// Exact outage under independent control with arbitrary power laws; the
/// typical user's own power is averaged over its law.
double outage_independent_general(const NetworkParams& params, const PowerPolicy& policy_c,
                                   const PowerPolicy& policy_d, Layer which);

/// Dominant-interferer lower bound for channel-dependent control, averaged
/// over the typical user's fade h and its power P(h).
double outage_dependent_lower_bound(const NetworkParams& params, const PowerPolicy& policy_c,
                                    const PowerPolicy& policy_d, Layer which);

/// Linearised form of the lower bound: 1 - exp(-psi_i S z_i).
double outage_dependent_approx(const NetworkParams& params, const PolicyMoments& cellular,
                               const PolicyMoments& d2d, Layer which);
double outage_dependent_approx(const NetworkParams& params, const PowerPolicy& policy_c,
                               const PowerPolicy& policy_d, Layer which);

OutageModel evaluate_outage(OutageMode mode, const NetworkParams& params,
                            const PowerPolicy& policy_c, const PowerPolicy& policy_d,
                            Layer which);

/// E[exp(-q / P^delta)] for the given law; non-increasing in q, 1 at q = 0
/// when P > 0 almost surely.
double qc_survival(const PowerPolicy& policy, double q, double delta);

/// Largest q with qc_survival(q) >= 1 - eps, located by bisection
/// (closed boundary). Throws NumericFailure when no bracket is found.
double find_qc(const PowerPolicy& policy, double eps, double delta);

}  // namespace d2dpc
