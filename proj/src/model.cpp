#include "anharm/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "anharm/error.hpp"

namespace anharm {

double sector_bound(double m) {
  return std::min((m + 2.0) * kPi / 4.0, (m + 2.0) * kPi / (2.0 * m));
}

OperatorSpec validate_spec(double m, double theta) {
  if (!std::isfinite(m) || !std::isfinite(theta)) {
    throw Error(ErrorKind::config_error, "m and theta must be finite");
  }
  OperatorSpec spec;
  spec.m = m;
  spec.theta = theta;
  if (m == 1.0) {
    spec.k.reset();
  } else if (m >= 2.0 && m == std::floor(m) && static_cast<long>(m) % 2 == 0) {
    spec.k = static_cast<int>(m / 2.0);
  } else {
    std::ostringstream os;
    os << "m = " << m << " is not supported (expected 1 or an even integer >= 2)";
    throw Error(ErrorKind::unsupported_exponent, os.str());
  }
  const double bound = sector_bound(m);
  if (!(std::abs(theta) < bound)) {
    std::ostringstream os;
    os << "|theta| = " << std::abs(theta) << " must be < " << bound << " for m = " << m;
    throw Error(ErrorKind::sector_violation, os.str());
  }
  return spec;
}

std::string_view to_string(Boundary bc) {
  return bc == Boundary::dirichlet ? "dirichlet" : "neumann";
}

void sort_by_modulus(std::vector<EigenRecord>& records) {
  std::stable_sort(records.begin(), records.end(), [](const EigenRecord& a, const EigenRecord& b) {
    const double ma = std::abs(a.lambda);
    const double mb = std::abs(b.lambda);
    if (ma != mb) return ma < mb;
    return std::arg(a.lambda) < std::arg(b.lambda);
  });
  for (std::size_t i = 0; i < records.size(); ++i) records[i].n = static_cast<int>(i) + 1;
}

std::string_view to_string(Method method) {
  switch (method) {
    case Method::galerkin: return "galerkin";
    case Method::airy: return "airy";
    case Method::harmonic_exact: return "harmonic-exact";
    case Method::ray: return "ray";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  if (name == "galerkin") return Method::galerkin;
  if (name == "airy") return Method::airy;
  if (name == "harmonic-exact" || name == "harmonic_exact") return Method::harmonic_exact;
  if (name == "ray") return Method::ray;
  return std::nullopt;
}

}  // namespace anharm
