#include "anharm/asym.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "anharm/error.hpp"
#include "anharm/gamma.hpp"
#include "anharm/quad.hpp"

namespace anharm::asym {
namespace {

void require_nonzero(double theta, double bound, const char* what) {
  if (theta == 0.0 || !(std::abs(theta) < bound)) {
    std::ostringstream os;
    os << what << " needs 0 < |theta| < " << bound << ", got " << theta;
    throw Error(ErrorKind::sector_violation, os.str());
  }
}

double ray_bound(int k) { return (k + 1.0) * kPi / (2.0 * k); }

// Distance from the segment [0, b] to the point p.
double segment_distance(cplx b, cplx p) {
  const double s = std::clamp((std::conj(b) * p).real() / std::norm(b), 0.0, 1.0);
  return std::abs(p - s * b);
}

}  // namespace

AiryConstants airy_constants(double theta) {
  require_nonzero(theta, 0.75 * kPi, "airy constants");
  const double t = std::abs(theta);
  const double s = std::sin(t);
  const double s23 = std::sin(2.0 * t / 3.0);
  AiryConstants out;
  out.m_theta = std::sqrt(1.0 + s23 * s23 / (s * s) - 2.0 * std::cos(t / 3.0) * s23 / s);
  out.C = kPi * std::pow(out.m_theta, 1.5) * s;
  out.K = 1.0 / (2.0 * std::sqrt(3.0 * s) * std::pow(out.m_theta, 0.25));
  return out;
}

Prediction airy_kappa_prediction(double theta, int n) {
  const AiryConstants c = airy_constants(theta);
  Prediction p;
  p.log_kappa = c.C * (n - 0.5) + std::log(c.K) - 0.5 * std::log(static_cast<double>(n));
  p.kappa = std::exp(p.log_kappa);
  return p;
}

double xi_k(int k, double theta) {
  if (k < 1) throw Error(ErrorKind::config_error, "k must be >= 1");
  require_nonzero(theta, ray_bound(k), "xi_k");
  const double t = std::abs(theta);
  const double tn = std::tan(t / (k + 1.0));
  const double a = k * t / (k + 1.0);
  return std::pow(tn / (std::sin(a) + std::cos(a) * tn), 1.0 / (2.0 * k));
}

double phi_k(int k, double theta, double xi) {
  if (k < 1) throw Error(ErrorKind::config_error, "k must be >= 1");
  const cplx end = xi * std::polar(1.0, std::abs(theta) / (2.0 * (k + 1.0)));
  if (xi == 0.0) return 0.0;
  for (int j = 0; j < 2 * k; ++j) {
    const cplx root = std::polar(1.0, kPi * j / k);
    if (segment_distance(end, root) < 1e-12) {
      std::ostringstream os;
      os << "segment to " << end << " passes through the branch point " << root;
      throw Error(ErrorKind::branch_point_on_path, os.str());
    }
  }
  // 1 - t^{2k} stays off the negative axis along the segment inside the
  // sector, so the principal root is the continuous branch from 1.
  const quad::QuadResult r =
      quad::integrate_segment([k](cplx t) { return std::sqrt(1.0 - std::pow(t, 2 * k)); }, 0.0, end, 1e-14);
  return r.value.imag();
}

double c_k(int k, double theta) {
  const double phi = phi_k(k, theta, xi_k(k, theta));
  return 2.0 * (k + 1.0) * std::sqrt(kPi) * gamma((k + 1.0) / (2.0 * k)) * phi / gamma(1.0 / (2.0 * k));
}

cplx davies_f(cplx z) {
  if (z.imag() == 0.0 && std::abs(z.real()) <= 1.0) {
    throw Error(ErrorKind::branch_cut, "davies_f is undefined on the cut [-1, 1]");
  }
  const cplx root = std::sqrt(z - 1.0) * std::sqrt(z + 1.0);
  return std::log(z + root) - z * root;
}

double c1_davies(double theta) {
  const double xi = xi_k(1, theta);
  return 2.0 * davies_f(xi * std::polar(1.0, std::abs(theta) / 4.0)).real();
}

double T(double theta) { return c_k(1, theta) / std::cos(theta / 2.0); }

GrowthFit fit_growth_rate(const std::vector<std::pair<double, double>>& points) {
  const std::size_t n = points.size();
  if (n < 3) throw Error(ErrorKind::degenerate_fit, "need at least 3 points");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(points[i].first > points[i - 1].first)) {
      throw Error(ErrorKind::degenerate_fit, "n values must be strictly increasing");
    }
  }
  Eigen::MatrixXd design(n, 2);
  Eigen::VectorXd rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    design(i, 0) = points[i].first;
    design(i, 1) = 1.0;
    rhs[i] = points[i].second + 0.5 * std::log(points[i].first);
  }
  const Eigen::Vector2d beta = design.colPivHouseholderQr().solve(rhs);
  GrowthFit fit;
  fit.slope = beta[0];
  fit.intercept = beta[1];
  fit.residual = std::sqrt((design * beta - rhs).squaredNorm() / static_cast<double>(n));
  return fit;
}

AsymptoticConstants constants(const OperatorSpec& spec) {
  AsymptoticConstants out;
  out.spec = spec;
  if (spec.is_airy()) {
    out.airy = airy_constants(spec.theta);
    return out;
  }
  const int k = *spec.k;
  out.xi = xi_k(k, spec.theta);
  out.phi_at_xi = phi_k(k, spec.theta, *out.xi);
  out.c = c_k(k, spec.theta);
  if (k == 1) out.T = *out.c / std::cos(spec.theta / 2.0);
  return out;
}

}  // namespace anharm::asym
