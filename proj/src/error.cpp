#include "anharm/error.hpp"

namespace anharm {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::sector_violation: return "SectorViolation";
    case ErrorKind::unsupported_exponent: return "UnsupportedExponent";
    case ErrorKind::config_error: return "ConfigError";
    case ErrorKind::convergence_failure: return "ConvergenceFailure";
    case ErrorKind::tolerance_not_met: return "ToleranceNotMet";
    case ErrorKind::no_decay_detected: return "NoDecayDetected";
    case ErrorKind::not_converged: return "NotConverged";
    case ErrorKind::denominator_underflow: return "DenominatorUnderflow";
    case ErrorKind::ray_divergence: return "RayDivergence";
    case ErrorKind::branch_point_on_path: return "BranchPointOnPath";
    case ErrorKind::branch_cut: return "BranchCut";
    case ErrorKind::degenerate_fit: return "DegenerateFit";
    case ErrorKind::no_sign_change: return "NoSignChange";
    case ErrorKind::insufficient_decay: return "InsufficientDecay";
    case ErrorKind::hypothesis_violated: return "HypothesisViolated";
    case ErrorKind::io_error: return "IoError";
  }
  return "Unknown";
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::sector_violation:
    case ErrorKind::unsupported_exponent:
    case ErrorKind::config_error:
    case ErrorKind::branch_cut:
    case ErrorKind::branch_point_on_path:
      return 2;
    case ErrorKind::io_error:
      return 4;
    default:
      return 3;
  }
}

}  // namespace anharm
