#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace anharm {

enum class ErrorKind {
  sector_violation,
  unsupported_exponent,
  config_error,
  convergence_failure,
  tolerance_not_met,
  no_decay_detected,
  not_converged,
  denominator_underflow,
  ray_divergence,
  branch_point_on_path,
  branch_cut,
  degenerate_fit,
  no_sign_change,
  insufficient_decay,
  hypothesis_violated,
  io_error,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Process exit code for the CLI: 2 validation, 3 convergence, 4 I/O.
int exit_code(ErrorKind kind);

}  // namespace anharm
