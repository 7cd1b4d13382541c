#include <gtest/gtest.h>

#include <cmath>

#include "anharm/asym.hpp"
#include "anharm/error.hpp"
#include "anharm/quad.hpp"
#include "anharm/spectra.hpp"

using namespace anharm;

TEST(Asym, AiryConstantsAtPiOverThree) {
  const auto c = asym::airy_constants(kPi / 3);
  EXPECT_NEAR(c.m_theta, 0.394931, 1e-6);
  EXPECT_NEAR(c.C, 0.675246, 1e-6);
  EXPECT_NEAR(c.K, 0.391304, 1e-6);
}

TEST(Asym, SmallThetaLimits) {
  const auto c = asym::airy_constants(1e-4);
  EXPECT_NEAR(c.m_theta, 1.0 / 3, 1e-6);
  EXPECT_LT(c.C, 1e-3);
  EXPECT_LT(asym::c_k(1, 1e-4), 1e-3);
  EXPECT_LT(asym::c_k(2, 1e-4), 1e-3);
}

TEST(Asym, MThetaPositiveOnSector) {
  for (int i = 1; i < 1000; ++i) {
    const double theta = 0.75 * kPi * i / 1000;
    EXPECT_GT(asym::airy_constants(theta).m_theta, 0.0) << theta;
  }
}

TEST(Asym, AiryConstantsRejectSelfadjoint) {
  EXPECT_THROW(asym::airy_constants(0.0), Error);
  EXPECT_THROW(asym::airy_constants(2.4), Error);
}

TEST(Asym, PredictionRatioApproachesLimit) {
  // The prediction is the half-line law; the full-line kappa carries an
  // extra sqrt(2), and the ratio settles on it from above.
  double prev = INFINITY;
  for (int n : {20, 40, 80, 160}) {
    const double ratio = std::exp(spectra::kappa_airy_fullline(kPi / 3, n).log_kappa -
                                  asym::airy_kappa_prediction(kPi / 3, n).log_kappa);
    EXPECT_LT(ratio, prev) << n;
    prev = ratio;
  }
  EXPECT_NEAR(prev, std::sqrt(2.0), 0.01);
}

TEST(Asym, PredictionIncreases) {
  for (int n = 3; n < 200; ++n) {
    EXPECT_GT(asym::airy_kappa_prediction(0.7, n + 1).log_kappa, asym::airy_kappa_prediction(0.7, n).log_kappa);
  }
  EXPECT_TRUE(std::isinf(asym::airy_kappa_prediction(1.0, 5000).kappa));
}

TEST(Asym, XiHarmonicClosedForm) {
  for (int i = 1; i <= 100; ++i) {
    const double theta = 1.9 * i / 101;
    EXPECT_NEAR(asym::xi_k(1, theta), 1 / std::sqrt(2 * std::cos(theta / 2)), 1e-12) << theta;
  }
  EXPECT_NEAR(asym::xi_k(1, 2 * kPi / 3), 1.0, 1e-12);
}

TEST(Asym, XiLimitAtZero) {
  // numerator and denominator both vanish linearly: xi_k -> (k+1)^{-1/(2k)}
  for (int k : {1, 2, 3}) {
    EXPECT_NEAR(asym::xi_k(k, 1e-6), std::pow(k + 1.0, -0.5 / k), 1e-9) << k;
  }
}

TEST(Asym, PhiVanishesOnRealSegment) {
  EXPECT_NEAR(asym::phi_k(2, 1e-10, 0.5), 0.0, 1e-9);
}

TEST(Asym, PhiMonotoneForSmallXi) {
  const double theta = 0.8;
  double prev = 0.0;
  for (int i = 1; i <= 20; ++i) {
    const double v = asym::phi_k(1, theta, 0.03 * i);
    EXPECT_GT(v, prev);
    prev = v;
  }
}

TEST(Asym, PhiRejectsBranchPoint) {
  try {
    asym::phi_k(1, 0.0, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::branch_point_on_path);
  }
}

TEST(Asym, PhiMatchesDaviesIdentity) {
  const double theta = 0.8;
  const double xi = 1 / std::sqrt(2 * std::cos(theta / 2));
  EXPECT_NEAR(asym::phi_k(1, theta, xi), 0.5 * asym::davies_f(std::polar(xi, theta / 4)).real(), 1e-12);
}

TEST(Asym, C1FromBothFormulas) {
  for (double theta : {0.3, 0.8, 1.5}) {
    const double xi = asym::xi_k(1, theta);
    EXPECT_NEAR(4 * asym::phi_k(1, theta, xi), asym::c1_davies(theta), 1e-10) << theta;
    EXPECT_NEAR(asym::c_k(1, theta), 4 * asym::phi_k(1, theta, xi), 1e-13) << theta;
  }
  EXPECT_NEAR(asym::c_k(1, 0.8), 0.4111142199, 1e-9);
  EXPECT_NEAR(asym::c_k(2, 0.5), 0.1871397271, 1e-9);
}

TEST(Asym, CkEvenInTheta) {
  for (int k : {1, 2, 3}) EXPECT_DOUBLE_EQ(asym::c_k(k, 0.4), asym::c_k(k, -0.4));
  EXPECT_LT(asym::c_k(3, 1e-5), 1e-3);
}

TEST(Asym, DaviesFunction) {
  EXPECT_LT(std::abs(asym::davies_f({1 + 1e-8, 0})), 1e-3);
  const cplx z(0.7, 0.9);
  EXPECT_LT(std::abs(asym::davies_f(std::conj(z)) - std::conj(asym::davies_f(z))), 1e-15);
  EXPECT_THROW(asym::davies_f(0.5), Error);
  EXPECT_NEAR(asym::T(0.6), 0.31884470, 1e-8);
}

TEST(Asym, GrowthFitExactLine) {
  std::vector<std::pair<double, double>> pts;
  for (int n = 1; n <= 10; ++n) pts.emplace_back(n, 2.0 * n - 0.5 * std::log(n));
  const auto f = asym::fit_growth_rate(pts);
  EXPECT_NEAR(f.slope, 2.0, 1e-12);
  EXPECT_NEAR(f.residual, 0.0, 1e-12);
  pts.clear();
  for (int n = 1; n <= 10; ++n) pts.emplace_back(n, 3.0 - 0.5 * std::log(n));
  EXPECT_NEAR(asym::fit_growth_rate(pts).slope, 0.0, 1e-12);
}

TEST(Asym, GrowthFitRejectsDegenerateInput) {
  EXPECT_THROW(asym::fit_growth_rate({{1, 0}, {2, 1}}), Error);
  EXPECT_THROW(asym::fit_growth_rate({{1, 0}, {3, 1}, {2, 2}}), Error);
}

TEST(Asym, ConstantsBundle) {
  const auto a = asym::constants(validate_spec(1, 0.5));
  EXPECT_TRUE(a.airy.has_value());
  EXPECT_FALSE(a.c.has_value());
  const auto h = asym::constants(validate_spec(2, 0.8));
  ASSERT_TRUE(h.c && h.T && h.xi);
  EXPECT_NEAR(*h.T, *h.c / std::cos(0.4), 1e-15);
  const auto q = asym::constants(validate_spec(4, 0.5));
  EXPECT_FALSE(q.T.has_value());
}
