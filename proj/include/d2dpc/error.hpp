#pragma once

#include <stdexcept>
#include <string>

namespace d2dpc {

// Every failure raised by the library derives from Error so callers (the CLI
// in particular) can map the category to an exit code.
enum class ErrorKind {
  invalid_parameter,
  delta_out_of_range,
  moment_diverges,
  assumption_violated,
  infeasible_densities,
  invalid_grid,
  infeasible_discretization,
  numeric_failure,
  non_convergence,
  bound_violation,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class InvalidParameter : public Error {
 public:
  explicit InvalidParameter(const std::string& what)
      : Error(ErrorKind::invalid_parameter, what) {}
};

/// delta = 2/alpha is outside the range an operation supports (usually delta >= 1,
/// where aggregate interference under independent control is infinite).
class DeltaOutOfRange : public Error {
 public:
  explicit DeltaOutOfRange(const std::string& what)
      : Error(ErrorKind::delta_out_of_range, what) {}
};

class MomentDiverges : public Error {
 public:
  MomentDiverges(const std::string& moment, const std::string& what)
      : Error(ErrorKind::moment_diverges, what), moment_(moment) {}

  const std::string& moment() const noexcept { return moment_; }

 private:
  std::string moment_;
};

class AssumptionViolated : public Error {
 public:
  explicit AssumptionViolated(const std::string& what)
      : Error(ErrorKind::assumption_violated, what) {}
};

class InfeasibleDensities : public Error {
 public:
  explicit InfeasibleDensities(const std::string& what)
      : Error(ErrorKind::infeasible_densities, what) {}
};

class InvalidGrid : public Error {
 public:
  explicit InvalidGrid(const std::string& what)
      : Error(ErrorKind::invalid_grid, what) {}
};

class InfeasibleDiscretization : public Error {
 public:
  explicit InfeasibleDiscretization(const std::string& what)
      : Error(ErrorKind::infeasible_discretization, what) {}
};

class NumericFailure : public Error {
 public:
  NumericFailure(const std::string& what, double achieved_tolerance)
      : Error(ErrorKind::numeric_failure, what),
        achieved_tolerance_(achieved_tolerance) {}

  double achieved_tolerance() const noexcept { return achieved_tolerance_; }

 private:
  double achieved_tolerance_;
};

class NonConvergence : public Error {
 public:
  explicit NonConvergence(const std::string& what)
      : Error(ErrorKind::non_convergence, what) {}
};

class BoundViolation : public Error {
 public:
  explicit BoundViolation(const std::string& what)
      : Error(ErrorKind::bound_violation, what) {}
};

}  // namespace d2dpc
