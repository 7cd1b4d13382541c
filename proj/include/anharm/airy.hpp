#pragma once

// Airy function Ai and its derivative on the complex plane, plus the real
// zeros of Ai and Ai' that parametrize the eigenpairs of A(1, theta).
//
// Evaluation regions:
//   |z| <= 2            Maclaurin series
//   2 < |z| <= 8        Taylor continuation of Ai'' = z Ai along the ray
//                       through z, started from whichever end keeps Ai the
//                       dominant solution (asymptotic end for |arg z| < pi/3,
//                       origin otherwise)
//   |z| > 8             Poincare expansion in zeta = (2/3) z^{3/2}, optimally
//                       truncated; the exponential factor is returned
//                       separately in log_scale

#include <complex>

#include "anharm/model.hpp"

namespace anharm::airy {

inline constexpr double kAsymptoticRadius = 8.0;
inline constexpr double kSeriesRadius = 2.0;
inline constexpr int kNewtonMaxIter = 50;

struct AiryValue {
  cplx ai;
  cplx ai_prime;
  double log_scale = 0.0;  // true values are exp(log_scale) * ai, exp(log_scale) * ai_prime

  cplx value() const { return ai * std::exp(log_scale); }
  cplx derivative() const { return ai_prime * std::exp(log_scale); }
  /// log|Ai(z)|, -inf at zeros.
  double log_abs() const { return std::log(std::abs(ai)) + log_scale; }
};

AiryValue ai(cplx z);

// The individual evaluation branches, exposed for cross-checks.
AiryValue ai_maclaurin(cplx z);
AiryValue ai_asymptotic(cplx z);

struct AiryPoint {
  int n = 1;
  double mu = 0.0;
  Boundary kind = Boundary::dirichlet;
};

/// n-th negative zero of Ai (dirichlet) or of Ai' (neumann).
AiryPoint airy_point(int n, Boundary kind);

/// Leading-order magnitude |mu_n| = (3 pi (n - 1/4) / 2)^{2/3} (dirichlet),
/// (3 pi (n - 3/4) / 2)^{2/3} (neumann).
double mu_asymptotic(int n, Boundary kind);

}  // namespace anharm::airy
