#include "anharm/gamma.hpp"

#include <array>
#include <cmath>

#include "anharm/model.hpp"

namespace anharm::asym {
namespace {

constexpr double kG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

}  // namespace

double gamma(double x) {
  if (x < 0.5) return kPi / (std::sin(kPi * x) * gamma(1.0 - x));
  const double z = x - 1.0;
  double a = kLanczos[0];
  const double t = z + kG + 0.5;
  for (int i = 1; i < 9; ++i) a += kLanczos[i] / (z + i);
  return std::sqrt(2.0 * kPi) * std::pow(t, z + 0.5) * std::exp(-t) * a;
}

double log_gamma(double x) {
  if (x < 0.5) return std::log(kPi / std::abs(std::sin(kPi * x))) - log_gamma(1.0 - x);
  const double z = x - 1.0;
  double a = kLanczos[0];
  const double t = z + kG + 0.5;
  for (int i = 1; i < 9; ++i) a += kLanczos[i] / (z + i);
  return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(a);
}

}  // namespace anharm::asym
