#pragma once

// Orthonormal Hermite functions h_j(x) = (2^j j! sqrt(pi))^{-1/2} H_j(x) e^{-x^2/2}
// at complex arguments, and the position ladder matrix of the basis.

#include <Eigen/Dense>

#include "anharm/model.hpp"

namespace anharm::hermite {

// Value exp(log_scale) * mantissa, for quantities beyond double range.
struct Scaled {
  cplx mantissa;
  double log_scale = 0.0;

  cplx value() const { return mantissa * std::exp(log_scale); }
  double log_abs() const { return std::log(std::abs(mantissa)) + log_scale; }
};

/// h_j(z) by the normalized three-term recurrence with running rescaling.
Scaled function(int j, cplx z);

/// sum_j c_j sqrt(s) h_j(s z).
Scaled expansion(const Eigen::VectorXcd& coeffs, double scale, cplx z);
Scaled expansion(const Eigen::VectorXd& coeffs, double scale, cplx z);

/// Dimensionless position operator in the basis, truncated to n x n:
/// X(j, j+1) = X(j+1, j) = sqrt((j+1)/2).
Eigen::MatrixXd position(int n);

}  // namespace anharm::hermite
