#include "d2dpc/gp.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "d2dpc/feasibility.hpp"
#include "d2dpc/special.hpp"

namespace d2dpc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_target(double eps) { return -std::log1p(-eps); }

// ln sum exp(terms); fills softmax weights when requested.
double log_sum_exp(const std::vector<double>& terms, std::vector<double>* weights = nullptr) {
  const double m = *std::max_element(terms.begin(), terms.end());
  if (!std::isfinite(m)) {
    if (weights) weights->assign(terms.size(), 0.0);
    return m;
  }
  double s = 0.0;
  for (double x : terms) s += std::exp(x - m);
  if (weights) {
    weights->resize(terms.size());
    for (std::size_t i = 0; i < terms.size(); ++i) (*weights)[i] = std::exp(terms[i] - m) / s;
  }
  return m + std::log(s);
}

double log_add_exp(double x, double y) {
  const double m = std::max(x, y);
  if (m == -kInf) return -kInf;
  return m + std::log1p(std::exp(std::min(x, y) - m));
}

struct Values {
  double f0 = 0.0;
  double ln_y = 0.0;
  double ln_z = 0.0;
  double f1 = -kInf;
  double f2 = -kInf;
  double rho = 0.0;
};

// Barrier function for the problem in u = ln p:
//   t f0(u) - ln(-f1(u)) - ln(-f2(u)) - sum ln(u_i - ln floor)
class Barrier {
 public:
  Barrier(const DiscretizedProblem& problem, double floor)
      : problem_(problem), lower_(std::log(floor)) {
    const std::size_t n = problem.a.size();
    log_a_.resize(n);
    log_c_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      log_a_[i] = std::log(problem.a[i]);
      log_c_[i] = std::log(problem.c[i]);
    }
    has_f1_ = problem.A > 0.0 || problem.lambda_d > 0.0;
    has_f2_ = std::isfinite(problem.C);
    // With A > 0 the interference constraint already bounds every level away
    // from zero; otherwise the problem is scale-free and the floor is needed.
    has_floor_ = !(problem.A > 0.0);
    ln_a_const_ = problem.A > 0.0 ? std::log(problem.A) : -kInf;
    ln_lambda_ = problem.lambda_d > 0.0 ? std::log(problem.lambda_d) : -kInf;
    ln_b_ = std::log(problem.B);
    ln_c_const_ = has_f2_ ? std::log(problem.C) : kInf;
  }

  std::size_t size() const { return log_a_.size(); }
  std::size_t inequality_count() const {
    return (has_floor_ ? size() : 0) + (has_f1_ ? 1 : 0) + (has_f2_ ? 1 : 0);
  }
  double lower() const { return lower_; }
  bool has_floor() const { return has_floor_; }
  bool has_f1() const { return has_f1_; }
  bool has_f2() const { return has_f2_; }

  Values values(const std::vector<double>& u, std::vector<double>* w0 = nullptr,
                std::vector<double>* wy = nullptr, std::vector<double>* wz = nullptr) const {
    const double delta = problem_.delta;
    const std::size_t n = size();
    std::vector<double> t0(n), ty(n), tz(n);
    for (std::size_t i = 0; i < n; ++i) {
      t0[i] = log_a_[i] + u[i];
      ty[i] = log_a_[i] + delta * u[i];
      tz[i] = log_c_[i] - delta * u[i];
    }
    Values v;
    v.f0 = log_sum_exp(t0, w0);
    v.ln_y = log_sum_exp(ty, wy);
    v.ln_z = log_sum_exp(tz, wz);
    if (has_f1_) {
      const double ln_load = log_add_exp(ln_a_const_, ln_lambda_ + v.ln_y);
      v.f1 = ln_load + v.ln_z - ln_b_;
      v.rho = problem_.lambda_d > 0.0 ? std::exp(ln_lambda_ + v.ln_y - ln_load) : 0.0;
    }
    if (has_f2_) v.f2 = v.ln_y - ln_c_const_;
    return v;
  }

  bool strictly_feasible(const std::vector<double>& u, const Values& v) const {
    if (has_f1_ && !(v.f1 < 0.0)) return false;
    if (has_f2_ && !(v.f2 < 0.0)) return false;
    if (has_floor_) {
      for (double x : u) {
        if (!(x > lower_)) return false;
      }
    }
    return true;
  }

  double value(const std::vector<double>& u, const Values& v, double t) const {
    double phi = t * v.f0;
    if (has_f1_) phi -= std::log(-v.f1);
    if (has_f2_) phi -= std::log(-v.f2);
    if (has_floor_) {
      for (double x : u) phi -= std::log(x - lower_);
    }
    return phi;
  }

  // Gradient and Hessian H = diag(d) + U S U^T with U = [w0, wy, wz].
  struct Derivatives {
    Values v;
    std::vector<double> grad, diag, w0, wy, wz;
    Eigen::Matrix3d s;
  };

  Derivatives derivatives(const std::vector<double>& u, double t) const {
    const double delta = problem_.delta;
    const double d2 = delta * delta;
    const std::size_t n = size();
    Derivatives d;
    d.v = values(u, &d.w0, &d.wy, &d.wz);
    const double s1 = has_f1_ ? 1.0 / -d.v.f1 : 0.0;
    const double s2 = has_f2_ ? 1.0 / -d.v.f2 : 0.0;
    const double rho = d.v.rho;
    d.grad.resize(n);
    d.diag.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      d.grad[i] = t * d.w0[i] + s1 * delta * (rho * d.wy[i] - d.wz[i]) + s2 * delta * d.wy[i];
      d.diag[i] = t * d.w0[i] + s1 * d2 * (rho * d.wy[i] + d.wz[i]) + s2 * d2 * d.wy[i];
      if (has_floor_) {
        const double gap = u[i] - lower_;
        d.grad[i] -= 1.0 / gap;
        d.diag[i] += 1.0 / (gap * gap);
      }
    }
    d.s.setZero();
    d.s(0, 0) = -t;
    d.s(1, 1) = -s1 * rho * rho * d2 - s2 * d2 + s1 * s1 * d2 * rho * rho + s2 * s2 * d2;
    d.s(2, 2) = -s1 * d2 + s1 * s1 * d2;
    d.s(1, 2) = d.s(2, 1) = -s1 * s1 * d2 * rho;
    return d;
  }

 private:
  const DiscretizedProblem& problem_;
  double lower_;
  std::vector<double> log_a_, log_c_;
  bool has_f1_ = false;
  bool has_f2_ = false;
  bool has_floor_ = false;
  double ln_a_const_ = 0.0;
  double ln_lambda_ = 0.0;
  double ln_b_ = 0.0;
  double ln_c_const_ = 0.0;
};

std::vector<double> hessian_product(const Barrier::Derivatives& d, const std::vector<double>& x) {
  const std::size_t n = x.size();
  Eigen::Vector3d ut = Eigen::Vector3d::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    ut(0) += d.w0[i] * x[i];
    ut(1) += d.wy[i] * x[i];
    ut(2) += d.wz[i] * x[i];
  }
  const Eigen::Vector3d su = d.s * ut;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = d.diag[i] * x[i] + d.w0[i] * su(0) + d.wy[i] * su(1) + d.wz[i] * su(2);
  }
  return out;
}

// Woodbury solve of (diag + U S U^T) x = b with two refinement passes.
std::vector<double> newton_solve(const Barrier::Derivatives& d, const std::vector<double>& b) {
  const std::size_t n = b.size();
  Eigen::Matrix3d k = Eigen::Matrix3d::Zero();
  const std::vector<double>* cols[3] = {&d.w0, &d.wy, &d.wz};
  for (std::size_t i = 0; i < n; ++i) {
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) k(r, c) += (*cols[r])[i] * (*cols[c])[i] / d.diag[i];
    }
  }
  const Eigen::FullPivLU<Eigen::Matrix3d> lu(Eigen::Matrix3d::Identity() + d.s * k);

  auto apply_inverse = [&](const std::vector<double>& rhs) {
    std::vector<double> x(n);
    Eigen::Vector3d y = Eigen::Vector3d::Zero();
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = rhs[i] / d.diag[i];
      for (int r = 0; r < 3; ++r) y(r) += (*cols[r])[i] * x[i];
    }
    const Eigen::Vector3d corr = lu.solve(d.s * y);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] -= (d.w0[i] * corr(0) + d.wy[i] * corr(1) + d.wz[i] * corr(2)) / d.diag[i];
    }
    return x;
  };

  std::vector<double> x = apply_inverse(b);
  for (int pass = 0; pass < 2; ++pass) {
    const std::vector<double> hx = hessian_product(d, x);
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - hx[i];
    const std::vector<double> dx = apply_inverse(r);
    for (std::size_t i = 0; i < n; ++i) x[i] += dx[i];
  }
  return x;
}

// Largest violation of the KKT conditions at u, with multipliers fitted by
// least squares to the stationarity equation.
double kkt_residual(const Barrier& barrier, double delta, const std::vector<double>& u) {
  const std::size_t n = u.size();
  const Barrier::Derivatives d = barrier.derivatives(u, 0.0);
  std::vector<double> g1(n, 0.0), g2(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (barrier.has_f1()) g1[i] = delta * (d.v.rho * d.wy[i] - d.wz[i]);
    if (barrier.has_f2()) g2[i] = delta * d.wy[i];
  }
  auto dot = [n](const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
    return s;
  };
  const double a11 = dot(g1, g1), a12 = dot(g1, g2), a22 = dot(g2, g2);
  const double b1 = -dot(g1, d.w0), b2 = -dot(g2, d.w0);
  double l1 = 0.0, l2 = 0.0;
  const double det = a11 * a22 - a12 * a12;
  if (det > 1e-14 * a11 * a22) {
    l1 = (b1 * a22 - b2 * a12) / det;
    l2 = (a11 * b2 - a12 * b1) / det;
  }
  if (!(l1 >= 0.0 && l2 >= 0.0)) {
    l1 = a11 > 0.0 ? std::max(0.0, b1 / a11) : 0.0;
    l2 = 0.0;
    const double alt = a22 > 0.0 ? std::max(0.0, b2 / a22) : 0.0;
    auto residual = [&](double x1, double x2) {
      double r = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double v = d.w0[i] + x1 * g1[i] + x2 * g2[i];
        r += v * v;
      }
      return r;
    };
    if (residual(0.0, alt) < residual(l1, 0.0)) {
      l1 = 0.0;
      l2 = alt;
    }
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = d.w0[i] + l1 * g1[i] + l2 * g2[i];
    if (barrier.has_floor() && r > 0.0) {
      worst = std::max(worst, r * (u[i] - barrier.lower()));  // floor multiplier r
      r = 0.0;
    }
    worst = std::max(worst, std::abs(r));
  }
  if (barrier.has_f1()) worst = std::max({worst, d.v.f1, l1 * -d.v.f1});
  if (barrier.has_f2()) worst = std::max({worst, d.v.f2, l2 * -d.v.f2});
  return worst;
}

GpSolution make_solution(const DiscretizedProblem& problem, const Barrier& barrier,
                         const std::vector<double>& u, double floor, std::size_t iterations) {
  GpSolution sol;
  sol.levels.resize(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    sol.levels[i] = std::exp(u[i]);
    sol.objective += problem.a[i] * sol.levels[i];
    if (sol.levels[i] < 10.0 * floor) sol.floor_active = true;
  }
  sol.kkt_residual = kkt_residual(barrier, problem.delta, u);
  sol.iterations = iterations;
  return sol;
}

void validate_problem(const DiscretizedProblem& problem) {
  const std::size_t n = problem.a.size();
  if (n == 0 || problem.c.size() != n) {
    throw InvalidParameter("discretized problem needs matching non-empty a and c");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(problem.a[i] > 0.0) || !std::isfinite(problem.a[i]) || !(problem.c[i] > 0.0) ||
        !std::isfinite(problem.c[i])) {
      throw InvalidParameter("discretized coefficients must be positive and finite");
    }
  }
  if (!(problem.delta > 0.0)) throw InvalidParameter("discretized problem needs delta > 0");
  if (!(problem.A >= 0.0) || !(problem.B > 0.0) || !std::isfinite(problem.B) ||
      !(problem.lambda_d >= 0.0)) {
    throw InvalidParameter("discretized problem needs A >= 0, 0 < B < inf, lambda_d >= 0");
  }
  if (!(problem.C >= 0.0)) throw InfeasibleDensities("cellular constraint leaves no room (C < 0)");
}

}  // namespace

Grid Grid::from_points(std::vector<double> points) {
  if (points.size() < 2) throw InvalidGrid("grid needs at least two points");
  if (!(points.front() >= 0.0)) throw InvalidGrid("grid must start at >= 0");
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (!(points[i] > points[i - 1]) || !std::isfinite(points[i])) {
      std::ostringstream msg;
      msg << "grid must be finite and strictly increasing (point " << i << ")";
      throw InvalidGrid(msg.str());
    }
  }
  return Grid{std::move(points)};
}

double default_truncation(double tail_mass) {
  if (!(tail_mass > 0.0 && tail_mass < 1.0)) {
    throw InvalidGrid("tail mass must lie in (0, 1)");
  }
  double m = -std::log(tail_mass);
  while (!(std::exp(-m) < tail_mass)) m = std::nextafter(m, kInf);
  return m;
}

Grid build_grid(std::size_t segments, double truncation, double split, double dense_cap) {
  if (segments < 2 || segments % 2 != 0) {
    throw InvalidGrid("segment count must be an even number >= 2");
  }
  if (!(dense_cap > 0.0) || !(truncation > dense_cap) || !std::isfinite(truncation)) {
    throw InvalidGrid("need M > dense_cap > 0");
  }
  if (!(split > 0.0 && split < 1.0)) throw InvalidGrid("split must lie in (0, 1)");
  const double dense_exact = split * static_cast<double>(segments);
  const auto dense = static_cast<std::size_t>(std::llround(dense_exact));
  if (std::abs(dense_exact - static_cast<double>(dense)) > 1e-9 || dense < 1 ||
      dense >= segments) {
    throw InvalidGrid("split * N must be a whole number of segments in [1, N - 1]");
  }
  std::vector<double> points(segments + 1);
  for (std::size_t n = 0; n <= dense; ++n) {
    points[n] = dense_cap * static_cast<double>(n) / static_cast<double>(dense);
  }
  const std::size_t sparse = segments - dense;
  for (std::size_t n = 1; n <= sparse; ++n) {
    points[dense + n] = dense_cap + (truncation - dense_cap) * static_cast<double>(n) /
                                        static_cast<double>(sparse);
  }
  points[segments] = truncation;
  return Grid::from_points(std::move(points));
}

DiscretizedProblem discretize(const Grid& grid, const NetworkParams& params,
                              const PolicyMoments& moments_c) {
  const double delta = params.delta();
  if (grid.points.front() == 0.0 && !(delta < 1.0)) {
    throw DeltaOutOfRange("discretize: a cell touching h = 0 needs delta < 1");
  }
  DiscretizedProblem p;
  p.grid = grid;
  p.delta = delta;
  p.lambda_d = params.lambda_d();
  const std::size_t n = grid.segments();
  p.a.resize(n);
  p.c.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    p.a[i] = exponential_mass(grid.points[i], grid.points[i + 1]);
    p.c[i] = cell_singular_mass(grid.points[i], grid.points[i + 1], delta);
  }
  const double lambda_c = params.lambda_c();
  p.A = lambda_c > 0.0 ? lambda_c * moments_c.y.require("E[P_c^delta]") : 0.0;
  p.B = log_target(params.d2d().outage_target) / psi(params, Layer::d2d);
  const double z_c = moments_c.z.require("E[P_c^-delta h_c^-delta]");
  const double room =
      log_target(params.cellular().outage_target) / (z_c * psi(params, Layer::cellular)) - p.A;
  if (room < 0.0) {
    std::ostringstream msg;
    msg << "cellular constraint leaves no room for D2D users (C = " << room << " / lambda_d)";
    throw InfeasibleDensities(msg.str());
  }
  p.C = p.lambda_d > 0.0 ? room / p.lambda_d : kInf;
  return p;
}

GpEvaluation evaluate_gp(const DiscretizedProblem& problem, const std::vector<double>& levels) {
  if (levels.size() != problem.a.size()) {
    throw InvalidParameter("evaluate_gp: one level per cell required");
  }
  double obj = 0.0, y = 0.0, z = 0.0;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const double p = levels[i];
    obj += problem.a[i] * p;
    y += problem.a[i] * std::pow(p, problem.delta);
    z += p > 0.0 ? problem.c[i] * std::pow(p, -problem.delta) : kInf;
  }
  GpEvaluation e;
  e.log_objective = std::log(obj);
  const double load = problem.A + problem.lambda_d * y;
  e.interference = load > 0.0 ? std::log(load) + std::log(z) - std::log(problem.B) : -kInf;
  e.cellular = std::isfinite(problem.C) ? std::log(y) - std::log(problem.C) : -kInf;
  return e;
}

std::vector<double> seed_levels(const DiscretizedProblem& problem, double floor) {
  validate_problem(problem);
  const std::size_t n = problem.a.size();
  const double delta = problem.delta;
  const auto& x = problem.grid.points;

  std::vector<std::vector<double>> shapes;
  if (x.size() == n + 1) {
    std::vector<double> half(n);
    for (std::size_t i = 0; i < n; ++i) half[i] = 1.0 / std::sqrt(0.5 * (x[i] + x[i + 1]));
    shapes.push_back(std::move(half));
  }
  // Minimizes Y Z over shapes (equality case of Cauchy-Schwarz), so when this
  // one admits no scale the discretized problem is infeasible.
  std::vector<double> balanced(n);
  for (std::size_t i = 0; i < n; ++i) {
    balanced[i] = std::pow(problem.c[i] / problem.a[i], 1.0 / (2.0 * delta));
  }
  shapes.push_back(std::move(balanced));

  std::ostringstream why;
  for (auto& shape : shapes) {
    const double top = *std::max_element(shape.begin(), shape.end());
    double y = 0.0, z = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      shape[i] /= top;
      y += problem.a[i] * std::pow(shape[i], delta);
      z += problem.c[i] * std::pow(shape[i], -delta);
    }
    // Scaling by kappa^(1/delta) multiplies Y by kappa and Z by 1/kappa.
    double lo = 0.0;
    double hi = std::isfinite(problem.C) ? problem.C / y : kInf;
    const double slack = problem.B - problem.lambda_d * y * z;
    if (!(slack > 0.0)) {
      why << " [shape rejected: lambda_d Y Z = " << problem.lambda_d * y * z
          << " >= B = " << problem.B << "]";
      continue;
    }
    if (problem.A > 0.0) lo = problem.A * z / slack;
    if (!(lo < hi * (1.0 - 1e-12))) {
      why << " [shape rejected: scale window (" << lo << ", " << hi << ") is empty]";
      continue;
    }
    double kappa;
    if (lo > 0.0 && std::isfinite(hi)) kappa = std::sqrt(lo * hi);
    else if (lo > 0.0) kappa = 2.0 * lo;
    else if (std::isfinite(hi)) kappa = 0.5 * hi;
    else kappa = 1.0;
    const double scale = std::pow(kappa, 1.0 / delta);
    std::vector<double> levels(n);
    for (std::size_t i = 0; i < n; ++i) levels[i] = std::max(scale * shape[i], 2.0 * floor);
    const GpEvaluation e = evaluate_gp(problem, levels);
    if (e.interference < 0.0 && e.cellular < 0.0 && std::isfinite(e.log_objective)) {
      return levels;
    }
    why << " [shape rejected after applying the power floor]";
  }
  throw InfeasibleDiscretization("no strictly feasible starting point:" + why.str());
}

GpSolution solve_gp(const DiscretizedProblem& problem, const GpOptions& options) {
  validate_problem(problem);
  if (!(options.floor > 0.0) || !(options.barrier_growth > 1.0) ||
      !(options.gap_tolerance > 0.0)) {
    throw InvalidParameter("solve_gp: invalid options");
  }
  const Barrier barrier(problem, options.floor);
  const std::size_t n = barrier.size();
  const std::vector<double> seed = seed_levels(problem, options.floor);
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = std::log(seed[i]);

  // Initial t balancing the objective and barrier gradients.
  double t = 1.0;
  {
    const Barrier::Derivatives d0 = barrier.derivatives(u, 0.0);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      num -= d0.w0[i] * d0.grad[i];
      den += d0.w0[i] * d0.w0[i];
    }
    if (den > 0.0 && num > 0.0) t = std::clamp(num / den, 1e-3, 1e6);
  }

  const double m = static_cast<double>(barrier.inequality_count());
  constexpr double kCentred = 1e-9;  // half squared Newton decrement
  std::size_t steps = 0;

  for (;;) {
    double previous = kInf;
    int stalled = 0;
    int near_centre = 0;
    for (;;) {
      const Barrier::Derivatives d = barrier.derivatives(u, t);
      std::vector<double> neg(n);
      for (std::size_t i = 0; i < n; ++i) neg[i] = -d.grad[i];
      const std::vector<double> dir = newton_solve(d, neg);
      double lam2 = 0.0;
      for (std::size_t i = 0; i < n; ++i) lam2 -= d.grad[i] * dir[i];
      if (!(lam2 > 2.0 * kCentred)) break;
      // Rounding in the constraint values limits how far centring can go.
      // Newton converges in a handful of steps once lam2 < 1e-4; more than
      // that means the decrement is noise.
      stalled = lam2 < 1e-4 && lam2 >= 0.5 * previous ? stalled + 1 : 0;
      if (lam2 < 1e-4) ++near_centre;
      if (stalled >= 3 || near_centre > 8) break;
      previous = lam2;
      if (steps >= options.max_iterations) {
        std::ostringstream msg;
        msg << "GP solver hit " << options.max_iterations << " Newton steps (gap " << m / t
            << ", decrement " << lam2 << ")";
        throw GpNonConvergence(msg.str(), make_solution(problem, barrier, u, options.floor,
                                                        steps));
      }
      const double phi0 = barrier.value(u, d.v, t);
      std::vector<double> trial(n);
      double step = 1.0;
      bool accepted = false;
      for (int k = 0; k < 200; ++k, step *= 0.5) {
        for (std::size_t i = 0; i < n; ++i) trial[i] = u[i] + step * dir[i];
        const Values v = barrier.values(trial);
        if (!barrier.strictly_feasible(trial, v)) continue;
        // Close to the centre the full step is taken without a descent test.
        if (lam2 <= 0.0625 || barrier.value(trial, v, t) <= phi0 - 0.25 * step * lam2) {
          accepted = true;
          break;
        }
      }
      ++steps;
      if (!accepted) break;  // no representable progress left at this t
      u.swap(trial);
    }
    if (m / t <= options.gap_tolerance) break;
    t *= options.barrier_growth;
  }
  return make_solution(problem, barrier, u, options.floor, steps);
}

DependentPowerResult dependent_minimum_power(const NetworkParams& params,
                                             const PowerPolicy& policy_c, std::size_t segments,
                                             double truncation, const GpOptions& options) {
  const FeasibilityRegion region = feasibility_dependent(params, policy_c);
  if (!region.contains(params.lambda_c(), params.lambda_d())) {
    throw InfeasibleDensities("densities outside the dependent feasibility region (" +
                              region.describe() + ")");
  }
  const Grid grid = build_grid(segments, truncation);
  const PolicyMoments moments_c = policy_moments(policy_c, params.delta());
  const DiscretizedProblem problem = discretize(grid, params, moments_c);
  GpSolution solution = solve_gp(problem, options);
  PowerPolicy policy = PowerPolicy::piecewise(grid.points, solution.levels);
  PolicyMoments moments = policy_moments(policy, params.delta());
  return {std::move(solution), std::move(policy), moments};
}

}  // namespace d2dpc
