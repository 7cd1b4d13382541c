#include "anharm/hermite.hpp"

#include <cmath>

namespace anharm::hermite {
namespace {

constexpr double kRescale = 1e150;
const double kLogRescale = std::log(kRescale);
constexpr double kPiQuarterInv = 0.75112554446494248286;  // pi^{-1/4}

template <typename Vec>
Scaled expand(const Vec& coeffs, double scale, cplx z) {
  const cplx y = scale * z;
  const cplx y2 = y * y;
  // polynomial parts p_j, with h_j = p_j exp(-y^2/2)
  cplx p_prev = 0.0;
  cplx p = kPiQuarterInv;
  cplx sum = 0.0;
  double log_scale = 0.0;
  const int n = static_cast<int>(coeffs.size());
  for (int j = 0; j < n; ++j) {
    sum += static_cast<cplx>(coeffs[j]) * p;
    const cplx next = std::sqrt(2.0 / (j + 1)) * y * p - std::sqrt(static_cast<double>(j) / (j + 1)) * p_prev;
    p_prev = p;
    p = next;
    if (std::abs(p) > kRescale) {
      p /= kRescale;
      p_prev /= kRescale;
      sum /= kRescale;
      log_scale += kLogRescale;
    }
  }
  Scaled out;
  out.mantissa = sum * std::exp(cplx(0.0, -0.5 * y2.imag())) * std::sqrt(scale);
  out.log_scale = log_scale - 0.5 * y2.real();
  return out;
}

}  // namespace

Scaled function(int j, cplx z) {
  Eigen::VectorXd unit = Eigen::VectorXd::Zero(j + 1);
  unit[j] = 1.0;
  return expand(unit, 1.0, z);
}

Scaled expansion(const Eigen::VectorXcd& coeffs, double scale, cplx z) { return expand(coeffs, scale, z); }
Scaled expansion(const Eigen::VectorXd& coeffs, double scale, cplx z) { return expand(coeffs, scale, z); }

Eigen::MatrixXd position(int n) {
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j + 1 < n; ++j) {
    x(j, j + 1) = x(j + 1, j) = std::sqrt((j + 1) / 2.0);
  }
  return x;
}

}  // namespace anharm::hermite
