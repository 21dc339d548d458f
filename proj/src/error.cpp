#include "d2dpc/error.hpp"

namespace d2dpc {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_parameter: return "InvalidParameter";
    case ErrorKind::delta_out_of_range: return "DeltaOutOfRange";
    case ErrorKind::moment_diverges: return "MomentDiverges";
    case ErrorKind::assumption_violated: return "AssumptionViolated";
    case ErrorKind::infeasible_densities: return "InfeasibleDensities";
    case ErrorKind::invalid_grid: return "InvalidGrid";
    case ErrorKind::infeasible_discretization: return "InfeasibleDiscretization";
    case ErrorKind::numeric_failure: return "NumericFailure";
    case ErrorKind::non_convergence: return "NonConvergence";
    case ErrorKind::bound_violation: return "BoundViolation";
  }
  return "Error";
}

}  // namespace d2dpc
