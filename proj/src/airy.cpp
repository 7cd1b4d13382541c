#include "anharm/airy.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "anharm/error.hpp"

namespace anharm::airy {
namespace {

constexpr double kAi0 = 0.355028053887817239260;   // Ai(0) = 3^{-2/3} / Gamma(2/3)
constexpr double kAip0 = 0.258819403792806798405;  // -Ai'(0) = 3^{-1/3} / Gamma(1/3)
constexpr double kSqrtPi = 1.77245385090551602730;
constexpr int kMaxTerms = 64;

struct Coefficients {
  std::array<double, kMaxTerms> u{};
  std::array<double, kMaxTerms> v{};
};

// u_k, v_k of the Poincare expansions of Ai and Ai'.
const Coefficients& coefficients() {
  static const Coefficients c = [] {
    Coefficients out;
    out.u[0] = 1.0;
    out.v[0] = 1.0;
    for (int k = 1; k < kMaxTerms; ++k) {
      const double kk = k;
      out.u[k] = out.u[k - 1] * (6 * kk - 5) * (6 * kk - 3) * (6 * kk - 1) / ((2 * kk - 1) * 216 * kk);
      out.v[k] = -(6 * kk + 1) / (6 * kk - 1) * out.u[k];
    }
    return out;
  }();
  return c;
}

// Terms c_k zeta^{-k} up to (excluding) the first one that grows, or until
// negligible. Returns the number of terms kept.
template <typename Coef>
int truncated_terms(const Coef& coef, cplx zeta, std::array<cplx, kMaxTerms>& terms) {
  const cplx inv = 1.0 / zeta;
  cplx power = 1.0;
  double previous = INFINITY;
  int count = 0;
  for (int k = 0; k < kMaxTerms; ++k) {
    const cplx t = coef[k] * power;
    const double mag = std::abs(t);
    if (k > 1 && mag > previous) break;
    terms[k] = t;
    count = k + 1;
    if (mag < 1e-18) break;
    previous = mag;
    power *= inv;
  }
  return count;
}

// Single Taylor step of y'' = z y from z0 to z0 + h.
void taylor_step(cplx z0, cplx h, cplx& y, cplx& yp) {
  cplx a3 = 0.0;  // a_{k-3}
  cplx a2 = y;    // a_{k-2}
  cplx a1 = yp;   // a_{k-1}
  cplx sum_y = y + yp * h;
  cplx sum_yp = yp;
  cplx hpow = h;  // h^{k-1}
  const double scale = std::abs(y) + std::abs(yp) * std::max(1.0, std::abs(h));
  int small = 0;
  for (int k = 2; k < 200; ++k) {
    const cplx ak = (z0 * a2 + a3) / (static_cast<double>(k) * (k - 1));
    const cplx dy = ak * hpow * h;
    const cplx dyp = static_cast<double>(k) * ak * hpow;
    sum_y += dy;
    sum_yp += dyp;
    hpow *= h;
    a3 = a2;
    a2 = a1;
    a1 = ak;
    const double mag = std::abs(dy) + std::abs(dyp);
    const double ref = std::max(scale, std::abs(sum_y) + std::abs(sum_yp));
    small = (mag <= 1e-18 * ref) ? small + 1 : 0;
    if (small >= 3) break;
  }
  y = sum_y;
  yp = sum_yp;
}

// Integrates the Airy equation along the straight path from -> to.
AiryValue continue_along(cplx from, AiryValue start, cplx to) {
  cplx y = start.value();
  cplx yp = start.derivative();
  const cplx delta = to - from;
  const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(delta) / 0.75)));
  const cplx h = delta / static_cast<double>(steps);
  cplx z = from;
  for (int s = 0; s < steps; ++s) {
    taylor_step(z, h, y, yp);
    z += h;
  }
  return {y, yp, 0.0};
}

}  // namespace

AiryValue ai_maclaurin(cplx z) {
  const cplx z3 = z * z * z;
  cplx f = 1.0, g = z, fp = 0.0, gp = 1.0;
  cplx tf = 1.0, tg = z;
  cplx tfp = z * z / 2.0, tgp = 1.0;
  fp = tfp;
  for (int k = 0; k < 200; ++k) {
    const double kk = k;
    tf *= z3 / ((3 * kk + 2) * (3 * kk + 3));
    tg *= z3 / ((3 * kk + 3) * (3 * kk + 4));
    tgp *= z3 / ((3 * kk + 1) * (3 * kk + 3));
    tfp *= z3 / ((3 * kk + 3) * (3 * kk + 5));
    f += tf;
    g += tg;
    gp += tgp;
    fp += tfp;
    const double mag = std::abs(tf) + std::abs(tg) + std::abs(tfp) + std::abs(tgp);
    if (mag < 1e-18 * (std::abs(f) + std::abs(g) + std::abs(fp) + std::abs(gp))) break;
  }
  return {kAi0 * f - kAip0 * g, kAi0 * fp - kAip0 * gp, 0.0};
}

AiryValue ai_asymptotic(cplx z) {
  const Coefficients& c = coefficients();
  std::array<cplx, kMaxTerms> tu{}, tv{};
  const double phase = std::arg(z);
  if (std::abs(phase) <= 2.0 * kPi / 3.0) {
    const cplx zeta = 2.0 / 3.0 * std::pow(z, 1.5);
    const int nu = truncated_terms(c.u, zeta, tu);
    const int nv = truncated_terms(c.v, zeta, tv);
    cplx su = 0.0, sv = 0.0;
    for (int k = nu - 1; k >= 0; --k) su += (k % 2 ? -1.0 : 1.0) * tu[k];
    for (int k = nv - 1; k >= 0; --k) sv += (k % 2 ? -1.0 : 1.0) * tv[k];
    const cplx quarter = std::pow(z, 0.25);
    const cplx osc = std::exp(cplx(0.0, -zeta.imag()));
    AiryValue out;
    out.ai = osc * su / (2.0 * kSqrtPi * quarter);
    out.ai_prime = -quarter * osc * sv / (2.0 * kSqrtPi);
    out.log_scale = -zeta.real();
    return out;
  }
  // Oscillatory form around the negative axis: z = -w, |arg w| < pi/3.
  const cplx w = -z;
  const cplx zeta = 2.0 / 3.0 * std::pow(w, 1.5);
  const int nu = truncated_terms(c.u, zeta, tu);
  const int nv = truncated_terms(c.v, zeta, tv);
  cplx pu = 0.0, qu = 0.0, pv = 0.0, qv = 0.0;
  for (int k = nu - 1; k >= 0; --k) {
    const double sign = ((k / 2) % 2) ? -1.0 : 1.0;
    (k % 2 ? qu : pu) += sign * tu[k];
  }
  for (int k = nv - 1; k >= 0; --k) {
    const double sign = ((k / 2) % 2) ? -1.0 : 1.0;
    (k % 2 ? qv : pv) += sign * tv[k];
  }
  const cplx arg = zeta - kPi / 4.0;
  const double s = std::abs(arg.imag());
  const cplx ep = std::exp(cplx(0.0, 1.0) * arg - s);
  const cplx em = std::exp(-cplx(0.0, 1.0) * arg - s);
  const cplx cos_s = 0.5 * (ep + em);
  const cplx sin_s = (ep - em) / cplx(0.0, 2.0);
  const cplx quarter = std::pow(w, 0.25);
  AiryValue out;
  out.ai = (cos_s * pu + sin_s * qu) / (kSqrtPi * quarter);
  out.ai_prime = quarter * (sin_s * pv - cos_s * qv) / kSqrtPi;
  out.log_scale = s;
  return out;
}

AiryValue ai(cplx z) {
  const double r = std::abs(z);
  if (r <= kSeriesRadius) return ai_maclaurin(z);
  if (r > kAsymptoticRadius) return ai_asymptotic(z);
  const cplx unit = z / r;
  if (std::abs(std::arg(z)) < kPi / 3.0) {
    // Ai is recessive here: march inward from the asymptotic circle.
    const cplx start = kAsymptoticRadius * unit;
    return continue_along(start, ai_asymptotic(start), z);
  }
  const cplx start = kSeriesRadius * unit;
  return continue_along(start, ai_maclaurin(start), z);
}

double mu_asymptotic(int n, Boundary kind) {
  const double shift = kind == Boundary::dirichlet ? 0.25 : 0.75;
  return std::pow(1.5 * kPi * (n - shift), 2.0 / 3.0);
}

AiryPoint airy_point(int n, Boundary kind) {
  if (n < 1) throw Error(ErrorKind::config_error, "airy_point index must be >= 1");
  const double seed = -mu_asymptotic(n, kind);
  const double spacing = kPi / std::sqrt(std::max(1.0, -seed));
  auto newton_step = [kind](double x) {
    const AiryValue v = ai(cplx(x, 0.0));
    const double a = v.value().real();
    const double ap = v.derivative().real();
    const double g = kind == Boundary::dirichlet ? a : ap;
    const double gp = kind == Boundary::dirichlet ? ap : x * a;
    return g / gp;
  };
  double x = seed;
  for (int it = 0; it < kNewtonMaxIter; ++it) {
    const double step = newton_step(x);
    x -= step;
    if (std::abs(step) <= 1e-10 * std::max(1.0, std::abs(x))) {
      // quadratic convergence: one more step reaches rounding level
      x -= newton_step(x);
      if (std::abs(x - seed) > 0.5 * spacing) break;
      return {n, x, kind};
    }
  }
  std::ostringstream os;
  os << "Newton for " << to_string(kind) << " point n = " << n << " did not converge from seed " << seed;
  throw Error(ErrorKind::convergence_failure, os.str());
}

}  // namespace anharm::airy
