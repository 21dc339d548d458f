#include "d2dpc/model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "d2dpc/error.hpp"
#include "d2dpc/quadrature.hpp"
#include "d2dpc/special.hpp"

namespace d2dpc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_layer(const LayerParams& layer, const char* name) {
  auto fail = [name](const std::string& what) {
    throw InvalidParameter(std::string(name) + " layer: " + what);
  };
  if (!(layer.density >= 0.0) || !std::isfinite(layer.density)) fail("density must be finite and >= 0");
  if (!(layer.link_distance > 0.0) || !std::isfinite(layer.link_distance)) fail("link distance must be > 0");
  if (!(layer.sir_threshold > 0.0) || !std::isfinite(layer.sir_threshold)) fail("SIR threshold must be > 0");
  if (!(layer.outage_target > 0.0 && layer.outage_target < 1.0)) fail("outage target must lie in (0, 1)");
}

std::string format_number(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

double parse_number(std::string_view text, std::string_view context) {
  std::string s(text);
  if (s == "inf" || s == "+inf" || s == "infinity") return kInf;
  double value = 0.0;
  const auto* begin = s.data();
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw InvalidParameter("cannot parse number '" + s + "' in " + std::string(context));
  }
  return value;
}

}  // namespace

const char* to_string(Layer layer) {
  return layer == Layer::cellular ? "cellular" : "d2d";
}

Layer other(Layer layer) {
  return layer == Layer::cellular ? Layer::d2d : Layer::cellular;
}

// ---------------------------------------------------------------------------
// NetworkParams

NetworkParams::NetworkParams(const LayerParams& cellular, const LayerParams& d2d,
                             double path_loss_exponent)
    : cellular_(cellular), d2d_(d2d), alpha_(path_loss_exponent), delta_(0.0) {
  validate_layer(cellular_, "cellular");
  validate_layer(d2d_, "d2d");
  if (!(alpha_ > 0.0) || !std::isfinite(alpha_)) {
    throw InvalidParameter("path-loss exponent must be finite and > 0");
  }
  delta_ = derive_delta(alpha_);
}

NetworkParams NetworkParams::defaults(double lambda_c, double lambda_d) {
  LayerParams c{lambda_c, 1.0, 0.1, 0.01};
  LayerParams d{lambda_d, 1.0, 0.1, 0.01};
  return NetworkParams(c, d, 2.0 / 0.75);
}

NetworkParams NetworkParams::with_densities(double lambda_c, double lambda_d) const {
  LayerParams c = cellular_;
  LayerParams d = d2d_;
  c.density = lambda_c;
  d.density = lambda_d;
  return NetworkParams(c, d, alpha_);
}

void NetworkParams::require_delta_below_one(std::string_view operation) const {
  if (!(delta_ < 1.0)) {
    throw DeltaOutOfRange(std::string(operation) + ": requires delta = 2/alpha < 1 (got " +
                          format_number(delta_) + "); aggregate interference is infinite");
  }
}

void NetworkParams::require_small_outage_target(Layer which,
                                                std::string_view operation) const {
  const double limit = 1.0 - 1.0 / std::numbers::e;
  const double eps = layer(which).outage_target;
  if (eps > limit) {
    throw AssumptionViolated(std::string(operation) + ": " + to_string(which) +
                             " outage target " + format_number(eps) +
                             " exceeds 1 - 1/e");
  }
}

double derive_delta(double alpha) {
  if (!(alpha > 0.0)) throw InvalidParameter("alpha must be > 0");
  return 2.0 / alpha;
}

double derive_delta(const NetworkParams& params) { return params.delta(); }

double phi(double theta, double r, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw DeltaOutOfRange("phi: requires 0 < delta < 1, got " + format_number(delta));
  }
  const double pi = std::numbers::pi;
  return pi * pi / std::sin(pi * delta) * delta * std::pow(theta, delta) * r * r;
}

double phi(const NetworkParams& params, Layer which) {
  const auto& l = params.layer(which);
  return phi(l.sir_threshold, l.link_distance, params.delta());
}

double psi(double theta, double r, double delta) {
  if (!(delta > 0.0)) throw DeltaOutOfRange("psi: requires delta > 0");
  return std::numbers::pi * r * r * std::pow(theta, delta) * gamma_fn(1.0 + delta);
}

double psi(const NetworkParams& params, Layer which) {
  const auto& l = params.layer(which);
  return psi(l.sir_threshold, l.link_distance, params.delta());
}

// ---------------------------------------------------------------------------
// MomentValue

double MomentValue::require(std::string_view moment) const {
  if (infinite_) {
    throw MomentDiverges(std::string(moment), "moment " + std::string(moment) + " diverges");
  }
  return value_;
}

double MomentValue::as_double() const { return infinite_ ? kInf : value_; }

// ---------------------------------------------------------------------------
// PowerPolicy

PowerPolicy::PowerPolicy(Kind kind, std::optional<double> peak)
    : kind_(std::move(kind)), peak_(peak) {
  if (peak_ && !(*peak_ > 0.0)) {
    throw InvalidParameter("peak power must be > 0");
  }
  if (peak_ && std::isinf(*peak_)) peak_.reset();
}

PowerPolicy PowerPolicy::constant(double level, std::optional<double> peak) {
  if (!(level > 0.0) || !std::isfinite(level)) {
    throw InvalidParameter("constant power level must be finite and > 0");
  }
  if (peak && level > *peak) {
    throw InvalidParameter("constant power level exceeds the peak power");
  }
  return PowerPolicy(ConstantPower{level}, peak);
}

PowerPolicy PowerPolicy::fractional(double scale, double exponent, std::optional<double> peak) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw InvalidParameter("fractional power scale must be finite and > 0");
  }
  if (!(exponent >= 0.0) || !std::isfinite(exponent)) {
    throw InvalidParameter("fractional power exponent must be finite and >= 0");
  }
  return PowerPolicy(FractionalPower{scale, exponent}, peak);
}

PowerPolicy PowerPolicy::piecewise(std::vector<double> grid, std::vector<double> levels,
                                   std::optional<double> peak) {
  if (grid.size() < 2) throw InvalidParameter("piecewise policy needs at least one cell");
  if (levels.size() + 1 != grid.size()) {
    throw InvalidParameter("piecewise policy needs one level per grid cell");
  }
  if (!(grid.front() >= 0.0)) throw InvalidParameter("piecewise grid must start at >= 0");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1]) || !std::isfinite(grid[i])) {
      throw InvalidParameter("piecewise grid must be finite and strictly increasing");
    }
  }
  for (double p : levels) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw InvalidParameter("piecewise levels must be finite and >= 0");
    }
    if (peak && p > *peak) throw InvalidParameter("piecewise level exceeds the peak power");
  }
  return PowerPolicy(PiecewisePower{std::move(grid), std::move(levels)}, peak);
}

double PowerPolicy::level(double fade) const {
  double p = std::visit(
      [fade](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, ConstantPower>) {
          return k.level;
        } else if constexpr (std::is_same_v<T, FractionalPower>) {
          if (k.exponent == 0.0) return k.scale;
          return k.scale * std::pow(fade, -k.exponent);
        } else {
          if (fade < k.grid.front() || fade >= k.grid.back()) return 0.0;
          const auto it = std::upper_bound(k.grid.begin(), k.grid.end(), fade);
          return k.levels[static_cast<std::size_t>(it - k.grid.begin()) - 1];
        }
      },
      kind_);
  if (peak_) p = std::min(p, *peak_);
  return p;
}

PowerPolicy PowerPolicy::scaled(double factor) const {
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    throw InvalidParameter("policy scale factor must be finite and > 0");
  }
  std::optional<double> peak;
  if (peak_) peak = *peak_ * factor;
  return std::visit(
      [&](const auto& k) -> PowerPolicy {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, ConstantPower>) {
          return constant(k.level * factor, peak);
        } else if constexpr (std::is_same_v<T, FractionalPower>) {
          return fractional(k.scale * factor, k.exponent, peak);
        } else {
          std::vector<double> levels = k.levels;
          for (double& p : levels) p *= factor;
          return piecewise(k.grid, std::move(levels), peak);
        }
      },
      kind_);
}

std::string PowerPolicy::describe() const {
  std::string text = std::visit(
      [](const auto& k) -> std::string {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, ConstantPower>) {
          return "const:" + format_number(k.level);
        } else if constexpr (std::is_same_v<T, FractionalPower>) {
          return "frac:" + format_number(k.scale) + "," + format_number(k.exponent);
        } else {
          return "piecewise:" + std::to_string(k.levels.size());
        }
      },
      kind_);
  if (peak_) text += "@" + format_number(*peak_);
  return text;
}

PowerPolicy parse_policy(std::string_view text) {
  std::optional<double> peak;
  if (const auto at = text.find('@'); at != std::string_view::npos) {
    peak = parse_number(text.substr(at + 1), "policy peak");
    text = text.substr(0, at);
  }
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw InvalidParameter("policy '" + std::string(text) + "' must look like const:p or frac:k,s");
  }
  const std::string_view kind = text.substr(0, colon);
  const std::string_view args = text.substr(colon + 1);
  if (kind == "const" || kind == "constant") {
    return PowerPolicy::constant(parse_number(args, "constant policy"), peak);
  }
  if (kind == "frac" || kind == "fractional") {
    const auto comma = args.find(',');
    if (comma == std::string_view::npos) {
      throw InvalidParameter("fractional policy needs 'frac:k,s'");
    }
    return PowerPolicy::fractional(parse_number(args.substr(0, comma), "fractional scale"),
                                   parse_number(args.substr(comma + 1), "fractional exponent"),
                                   peak);
  }
  throw InvalidParameter("unknown policy kind '" + std::string(kind) + "'");
}

// ---------------------------------------------------------------------------
// Expectations over the fade

namespace {

// Integral of f(h) e^-h over h >= 0, split where a peak clips a fractional law
// so that the kink sits on a panel edge.
double integrate_over_fade(const PowerPolicy& policy, const std::function<double(double)>& f,
                           double singular_power) {
  const auto* fr = std::get_if<FractionalPower>(&policy.kind());
  if (fr && policy.peak() && fr->exponent > 0.0) {
    const double kink = std::pow(fr->scale / *policy.peak(), 1.0 / fr->exponent);
    if (std::isfinite(kink)) {
      return integrate_exponential_weight(f, 0.0, kink, singular_power) +
             integrate_exponential_weight(f, kink, kInf);
    }
  }
  return integrate_exponential_weight(f, 0.0, kInf, singular_power);
}

}  // namespace

double expect_power(const PowerPolicy& policy, const std::function<double(double)>& g,
                    double singular_power) {
  if (const auto* c = std::get_if<ConstantPower>(&policy.kind())) {
    return g(c->level);
  }
  if (const auto* pw = std::get_if<PiecewisePower>(&policy.kind())) {
    double total = 0.0;
    double inside = 0.0;
    for (std::size_t i = 0; i < pw->levels.size(); ++i) {
      const double a = exponential_mass(pw->grid[i], pw->grid[i + 1]);
      inside += a;
      if (a > 0.0) total += a * g(policy.level(pw->grid[i]));
    }
    const double outside = exponential_mass(0.0, pw->grid.front()) +
                           exponential_mass(pw->grid.back(), kInf);
    if (outside > 0.0) total += outside * g(0.0);
    return total;
  }
  return integrate_over_fade(policy, [&](double h) { return g(policy.level(h)); },
                             singular_power);
}

double expect_power_fade(const PowerPolicy& policy,
                         const std::function<double(double, double)>& f,
                         double singular_power) {
  if (const auto* pw = std::get_if<PiecewisePower>(&policy.kind())) {
    double total = 0.0;
    const double beta = singular_power;
    auto zero_part = [&](double lo, double hi) {
      return integrate_exponential_weight([&](double h) { return f(0.0, h); }, lo, hi,
                                          lo == 0.0 ? beta : 0.0);
    };
    if (pw->grid.front() > 0.0) total += zero_part(0.0, pw->grid.front());
    for (std::size_t i = 0; i < pw->levels.size(); ++i) {
      const double lo = pw->grid[i];
      const double p = policy.level(lo);
      total += integrate_exponential_weight([&](double h) { return f(p, h); }, lo,
                                            pw->grid[i + 1], lo == 0.0 ? beta : 0.0);
    }
    total += zero_part(pw->grid.back(), kInf);
    return total;
  }
  return integrate_over_fade(policy, [&](double h) { return f(policy.level(h), h); },
                             singular_power);
}

MomentValue raw_moment(const PowerPolicy& policy, double order) {
  if (order == 0.0) return MomentValue::finite(1.0);
  if (const auto* c = std::get_if<ConstantPower>(&policy.kind())) {
    return MomentValue::finite(std::pow(c->level, order));
  }
  if (const auto* f = std::get_if<FractionalPower>(&policy.kind()); f && !policy.peak()) {
    const double arg = 1.0 - f->exponent * order;
    if (!(arg > 0.0)) return MomentValue::infinite();
    return MomentValue::finite(std::pow(f->scale, order) * gamma_fn(arg));
  }
  if (const auto* pw = std::get_if<PiecewisePower>(&policy.kind())) {
    double total = 0.0;
    for (std::size_t i = 0; i < pw->levels.size(); ++i) {
      const double a = exponential_mass(pw->grid[i], pw->grid[i + 1]);
      const double p = pw->levels[i];
      if (p == 0.0) {
        if (order < 0.0 && a > 0.0) return MomentValue::infinite();
        continue;
      }
      total += a * std::pow(p, order);
    }
    // The law is zero outside the grid, a set of positive probability.
    if (order < 0.0) return MomentValue::infinite();
    return MomentValue::finite(total);
  }
  // Clipped fractional law: bounded near h = 0, polynomial in h elsewhere.
  return MomentValue::finite(
      expect_power(policy, [order](double p) { return std::pow(p, order); }));
}

double cell_singular_mass(double x0, double x1, double delta) {
  return incomplete_gamma_interval(1.0 - delta, x0, x1);
}

PolicyMoments policy_moments(const PowerPolicy& policy, double delta) {
  if (!(delta > 0.0)) throw DeltaOutOfRange("policy_moments: requires delta > 0");
  PolicyMoments m;
  m.y = raw_moment(policy, delta);
  m.mean = raw_moment(policy, 1.0);

  if (const auto* c = std::get_if<ConstantPower>(&policy.kind())) {
    m.z = delta < 1.0 ? MomentValue::finite(std::pow(c->level, -delta) * gamma_fn(1.0 - delta))
                      : MomentValue::infinite();
  } else if (const auto* f = std::get_if<FractionalPower>(&policy.kind())) {
    if (!policy.peak()) {
      const double arg = 1.0 + delta * (f->exponent - 1.0);
      m.z = arg > 0.0 ? MomentValue::finite(std::pow(f->scale, -delta) * gamma_fn(arg))
                      : MomentValue::infinite();
    } else if (delta < 1.0) {
      m.z = MomentValue::finite(expect_power_fade(
          policy,
          [delta](double p, double h) { return std::pow(p, -delta) * std::pow(h, -delta); },
          delta));
    } else {
      m.z = MomentValue::infinite();
    }
  } else {
    const auto& pw = std::get<PiecewisePower>(policy.kind());
    if (pw.grid.front() == 0.0 && !(delta < 1.0)) {
      throw InvalidParameter("piecewise policy: a grid starting at 0 requires delta < 1");
    }
    // Sums over the grid cells only, matching the discretized problem.
    double z = 0.0;
    bool infinite = false;
    for (std::size_t i = 0; i < pw.levels.size() && !infinite; ++i) {
      const double c = cell_singular_mass(pw.grid[i], pw.grid[i + 1], delta);
      if (pw.levels[i] == 0.0) {
        infinite = c > 0.0;
      } else {
        z += c * std::pow(pw.levels[i], -delta);
      }
    }
    m.z = infinite ? MomentValue::infinite() : MomentValue::finite(z);
  }
  return m;
}

}  // namespace d2dpc
