#include <gtest/gtest.h>

#include <cmath>

#include "anharm/airy.hpp"
#include "anharm/gamma.hpp"

using namespace anharm;

TEST(Airy, ValuesAtOrigin) {
  const airy::AiryValue v = airy::ai(0.0);
  EXPECT_NEAR(v.value().real(), std::pow(3.0, -2.0 / 3) / asym::gamma(2.0 / 3), 1e-15);
  EXPECT_NEAR(v.value().real(), 0.35502805388781724, 1e-14);
  EXPECT_NEAR(v.derivative().real(), -std::pow(3.0, -1.0 / 3) / asym::gamma(1.0 / 3), 1e-15);
  EXPECT_NEAR(v.derivative().real(), -0.25881940379280680, 1e-14);
}

// Ai'' = z Ai through a five-point derivative of Ai'.
void check_ode(cplx z) {
  const double h = 1e-3;
  auto d = [](cplx w) { return airy::ai(w).derivative(); };
  const cplx second = (-d(z + 2 * h) + 8.0 * d(z + h) - 8.0 * d(z - h) + d(z - 2 * h)) / (12 * h);
  const cplx rhs = z * airy::ai(z).value();
  EXPECT_LT(std::abs(second - rhs), 1e-10 * std::max(1.0, std::abs(rhs))) << z;
}

TEST(Airy, SatisfiesOde) {
  check_ode({2, 3});
  check_ode({0.5, -0.7});
  check_ode({-5, 1});
  check_ode({6, 4});
  check_ode({-9, -2});
}

TEST(Airy, BranchesAgreeOnOverlap) {
  // Maclaurin series stays accurate a little beyond its region away from the positive axis
  for (cplx z : {cplx(0, 3), cplx(-3, 0), cplx(-2, 2)}) {
    const airy::AiryValue a = airy::ai_maclaurin(z);
    const airy::AiryValue b = airy::ai(z);
    EXPECT_LT(std::abs(a.value() - b.value()), 1e-11 * std::abs(b.value())) << z;
  }
  for (cplx z : {cplx(9, 0), cplx(0, 9), cplx(-6, 6)}) {
    const airy::AiryValue a = airy::ai_asymptotic(z);
    const airy::AiryValue b = airy::ai(z);
    EXPECT_LT(std::abs(a.value() - b.value()), 1e-11 * std::abs(b.value())) << z;
  }
}

TEST(Airy, ScaledRepresentationAtLargeArgument) {
  const airy::AiryValue v = airy::ai(200.0);
  const double zeta = 2.0 / 3 * std::pow(200.0, 1.5);
  // log Ai(x) ~ -zeta - log(2 sqrt(pi)) - log(x)/4
  EXPECT_NEAR(v.log_abs(), -zeta - std::log(2 * std::sqrt(kPi)) - 0.25 * std::log(200.0), 1e-4);
}

TEST(Airy, FirstZeros) {
  EXPECT_NEAR(airy::airy_point(1, Boundary::dirichlet).mu, -2.338107410459767, 1e-12);
  EXPECT_NEAR(airy::airy_point(1, Boundary::neumann).mu, -1.018792971647471, 1e-12);
  EXPECT_NEAR(airy::airy_point(2, Boundary::dirichlet).mu, -4.087949444130971, 1e-12);
  EXPECT_NEAR(airy::airy_point(2, Boundary::neumann).mu, -3.248197582179837, 1e-12);
}

TEST(Airy, ZerosInterleave) {
  double prev = 0.0;
  for (int n = 1; n <= 20; ++n) {
    const double nm = airy::airy_point(n, Boundary::neumann).mu;
    const double dm = airy::airy_point(n, Boundary::dirichlet).mu;
    EXPECT_LT(nm, prev);
    EXPECT_LT(dm, nm);
    prev = dm;
  }
}

TEST(Airy, ZerosAreZeros) {
  for (int n : {1, 5, 30}) {
    const double d = airy::airy_point(n, Boundary::dirichlet).mu;
    const double nn = airy::airy_point(n, Boundary::neumann).mu;
    EXPECT_LT(std::abs(airy::ai(d).value()), 1e-13);
    EXPECT_LT(std::abs(airy::ai(nn).derivative()), 1e-12 * std::sqrt(std::abs(nn)));
  }
}

TEST(Airy, AsymptoticMagnitude) {
  EXPECT_NEAR(airy::mu_asymptotic(1, Boundary::dirichlet), 2.3203, 1e-4);
  const double exact = -airy::airy_point(10, Boundary::dirichlet).mu;
  EXPECT_LT(std::abs(airy::mu_asymptotic(10, Boundary::dirichlet) - exact) / exact, 1e-3);
  for (int n : {100, 1000, 10000}) {
    const double mu = -airy::airy_point(n, Boundary::dirichlet).mu;
    EXPECT_NEAR(mu / std::pow(1.5 * kPi * n, 2.0 / 3), 1.0, 0.5 / n) << n;
  }
}
