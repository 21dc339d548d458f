#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace d2dpc {

enum class Layer { cellular, d2d };

const char* to_string(Layer layer);
Layer other(Layer layer);

/// Per-layer inputs: PPP density, fixed link distance, SIR threshold (linear)
/// and outage target.
struct LayerParams {
  double density = 0.0;
  double link_distance = 1.0;
  double sir_threshold = 0.1;
  double outage_target = 0.01;
};

/// Validated two-layer network description. delta = 2/alpha is derived once.
class NetworkParams {
 public:
  NetworkParams(const LayerParams& cellular, const LayerParams& d2d,
                double path_loss_exponent);

  /// theta = 0.1, eps = 0.01, r = 1 on both layers and alpha = 2/0.75.
  static NetworkParams defaults(double lambda_c = 0.0, double lambda_d = 0.0);

  const LayerParams& layer(Layer which) const {
    return which == Layer::cellular ? cellular_ : d2d_;
  }
  const LayerParams& cellular() const { return cellular_; }
  const LayerParams& d2d() const { return d2d_; }

  double lambda(Layer which) const { return layer(which).density; }
  double lambda_c() const { return cellular_.density; }
  double lambda_d() const { return d2d_.density; }
  double alpha() const { return alpha_; }
  double delta() const { return delta_; }

  NetworkParams with_densities(double lambda_c, double lambda_d) const;

  /// Throws DeltaOutOfRange unless delta < 1.
  void require_delta_below_one(std::string_view operation) const;

  /// Throws AssumptionViolated unless eps <= 1 - 1/e for the given layer.
  void require_small_outage_target(Layer which, std::string_view operation) const;

 private:
  LayerParams cellular_;
  LayerParams d2d_;
  double alpha_;
  double delta_;
};

double derive_delta(double alpha);
double derive_delta(const NetworkParams& params);

/// pi^2 / sin(pi delta) * delta * theta^delta * r^2, the Laplace-functional
/// constant for Rayleigh fading with power independent of the channel.
double phi(double theta, double r, double delta);
double phi(const NetworkParams& params, Layer which);

/// pi r^2 theta^delta Gamma(1 + delta), the dominant-interferer constant.
double psi(double theta, double r, double delta);
double psi(const NetworkParams& params, Layer which);

/// A moment that is either a finite number or explicitly divergent.
class MomentValue {
 public:
  static MomentValue finite(double value) { return MomentValue(value, false); }
  static MomentValue infinite() { return MomentValue(0.0, true); }

  bool is_finite() const { return !infinite_; }
  bool is_infinite() const { return infinite_; }

  /// Returns the value or throws MomentDiverges naming `moment`.
  double require(std::string_view moment) const;

  /// +inf for divergent moments. For display and ordering only.
  double as_double() const;

 private:
  MomentValue(double value, bool infinite) : value_(value), infinite_(infinite) {}

  double value_;
  bool infinite_;
};

/// y = E[P^delta], z = E[P^-delta h^-delta], mean = E[P].
struct PolicyMoments {
  MomentValue y = MomentValue::finite(0.0);
  MomentValue z = MomentValue::infinite();
  MomentValue mean = MomentValue::finite(0.0);
};

struct ConstantPower {
  double level;
};

/// P = scale * h^-exponent.
struct FractionalPower {
  double scale;
  double exponent;
};

/// P = levels[i] on [grid[i], grid[i+1]), zero outside [grid.front(), grid.back()).
struct PiecewisePower {
  std::vector<double> grid;
  std::vector<double> levels;
};

/// Transmit-power law as a function of the transmitter's own direct-link
/// fade h (unit-mean exponential). Under independent control the same law is
/// applied to a fade drawn independently of every channel.
class PowerPolicy {
 public:
  using Kind = std::variant<ConstantPower, FractionalPower, PiecewisePower>;

  static PowerPolicy constant(double level, std::optional<double> peak = std::nullopt);
  static PowerPolicy fractional(double scale, double exponent,
                                std::optional<double> peak = std::nullopt);
  static PowerPolicy piecewise(std::vector<double> grid, std::vector<double> levels,
                               std::optional<double> peak = std::nullopt);

  const Kind& kind() const { return kind_; }
  std::optional<double> peak() const { return peak_; }

  bool is_constant() const { return std::holds_alternative<ConstantPower>(kind_); }
  bool is_fractional() const { return std::holds_alternative<FractionalPower>(kind_); }
  bool is_piecewise() const { return std::holds_alternative<PiecewisePower>(kind_); }

  /// Power at fade h >= 0, peak clipping applied.
  double level(double fade) const;

  /// Same policy with every level multiplied by `factor`.
  PowerPolicy scaled(double factor) const;

  /// Short textual form: "const:1", "frac:1,0.5", "piecewise:N".
  std::string describe() const;

 private:
  PowerPolicy(Kind kind, std::optional<double> peak);

  Kind kind_;
  std::optional<double> peak_;
};

/// Parses "const:p" or "frac:k,s" (optionally followed by "@peak").
PowerPolicy parse_policy(std::string_view text);

/// E[P^order] for the power drawn at a unit-mean exponential fade.
MomentValue raw_moment(const PowerPolicy& policy, double order);

/// E[g(P)] with P = policy.level(h), h ~ Exp(1). `singular_power` describes
/// g(P(h)) ~ h^-beta at the origin (quadrature hint).
double expect_power(const PowerPolicy& policy, const std::function<double(double)>& g,
                    double singular_power = 0.0);

/// E[f(P(h), h)] with h ~ Exp(1).
double expect_power_fade(const PowerPolicy& policy,
                         const std::function<double(double, double)>& f,
                         double singular_power = 0.0);

/// Integral of h^-delta e^-h over a grid cell.
double cell_singular_mass(double x0, double x1, double delta);

PolicyMoments policy_moments(const PowerPolicy& policy, double delta);

}  // namespace d2dpc
