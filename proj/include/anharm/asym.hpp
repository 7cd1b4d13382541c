#pragma once

// Closed-form asymptotic constants for kappa_n and growth-rate fitting.
//
//   m = 1:   log kappa_n ~ C(theta) (n - 1/2) + log K(theta) - log(n) / 2
//   m = 2k:  log kappa_n ~ c_k(theta) n + O(log n)

#include <optional>
#include <utility>
#include <vector>

#include "anharm/model.hpp"

namespace anharm::asym {

struct AiryConstants {
  double m_theta = 0.0;
  double C = 0.0;
  double K = 0.0;
};

/// Requires 0 < |theta| < 3 pi / 4 (Error(sector_violation) otherwise).
AiryConstants airy_constants(double theta);

struct Prediction {
  double log_kappa = 0.0;
  double kappa = 0.0;  // inf once exp overflows
};

/// Leading term exp(C (n - 1/2)) K / sqrt(n).
Prediction airy_kappa_prediction(double theta, int n);

/// Stationary point of the ray integral, 0 < |theta| < (k+1) pi / (2k).
double xi_k(int k, double theta);
/// Im of the integral of (1 - t^{2k})^{1/2} from 0 to xi exp(i |theta| / (2(k+1))).
/// Throws Error(branch_point_on_path) if the segment passes within 1e-12 of
/// a root of t^{2k} = 1.
double phi_k(int k, double theta, double xi);
/// 2 (k+1) sqrt(pi) Gamma((k+1)/(2k)) phi_k(xi_k) / Gamma(1/(2k)).
double c_k(int k, double theta);

/// log(z + sqrt(z^2-1)) - z sqrt(z^2-1), branch positive for real z > 1.
/// Throws Error(branch_cut) on the real segment [-1, 1].
cplx davies_f(cplx z);
/// c_1 through the Davies-Kuijlaars function: 2 Re f(exp(i theta/4) xi_1).
double c1_davies(double theta);

/// Threshold time c_1(theta) / cos(theta / 2) for m = 2.
double T(double theta);

struct GrowthFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // RMS of the fit residuals
};

/// Least-squares line through (n, log_kappa + log(n) / 2). Throws
/// Error(degenerate_fit) for fewer than 3 points or n not strictly increasing.
GrowthFit fit_growth_rate(const std::vector<std::pair<double, double>>& points);

struct AsymptoticConstants {
  OperatorSpec spec;
  std::optional<AiryConstants> airy;  // m = 1
  std::optional<double> xi;           // m = 2k
  std::optional<double> phi_at_xi;
  std::optional<double> c;
  std::optional<double> T;            // k = 1
};

AsymptoticConstants constants(const OperatorSpec& spec);

}  // namespace anharm::asym
