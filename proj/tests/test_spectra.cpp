#include <gtest/gtest.h>

#include <cmath>

#include "anharm/airy.hpp"
#include "anharm/asym.hpp"
#include "anharm/error.hpp"
#include "anharm/spectra.hpp"

using namespace anharm;

namespace {

spectra::OperatorMatrix hermite_matrix(double m, double theta, int n, double scale = 1.0) {
  spectra::DiscretizationConfig cfg;
  cfg.basis_size = n;
  cfg.hermite_scale = scale;
  return spectra::build_matrix(validate_spec(m, theta), cfg);
}

std::vector<int> iota(int lo, int hi) {
  std::vector<int> v;
  for (int n = lo; n <= hi; ++n) v.push_back(n);
  return v;
}

}  // namespace

TEST(Spectra, HarmonicMatrixIsDiagonalAtThetaZero) {
  const auto a = hermite_matrix(2, 0, 40);
  const Eigen::MatrixXcd d = a.entries.dense();
  for (int i = 0; i < 40; ++i) {
    for (int j = 0; j < 40; ++j) {
      const double want = i == j ? 2.0 * i + 1 : 0.0;
      // the last row of x^2 feels the truncation
      if (i < 38 && j < 38) EXPECT_NEAR(std::abs(d(i, j) - want), 0.0, 1e-12) << i << "," << j;
    }
  }
}

TEST(Spectra, HermiteMatrixIsComplexSymmetric) {
  for (double m : {2.0, 4.0, 6.0}) {
    const Eigen::MatrixXcd d = hermite_matrix(m, 0.7, 60, 1.3).entries.dense();
    EXPECT_EQ((d - d.transpose()).cwiseAbs().maxCoeff(), 0.0) << m;
  }
}

TEST(Spectra, FiniteDifferenceGroundStateIsNeumann) {
  spectra::DiscretizationConfig cfg;
  cfg.fd_half_width = 20;
  cfg.fd_points = 2000;
  const auto a = spectra::build_matrix(validate_spec(1, 0), cfg);
  const auto r = spectra::eigenpairs(a, 1, false);
  EXPECT_NEAR(r[0].lambda.real(), -airy::airy_point(1, Boundary::neumann).mu, 2e-3);
  EXPECT_NEAR(r[0].lambda.real(), 1.0188, 2e-3);
}

TEST(Spectra, HarmonicEigenvaluesByDilation) {
  const auto a = hermite_matrix(2, 0.6, 300);
  const auto r = spectra::eigenpairs(a, 15, true);
  for (int n = 1; n <= 15; ++n) {
    const cplx want = std::polar(2.0 * n - 1, 0.3);
    EXPECT_LT(std::abs(r[n - 1].lambda - want), 1e-8 * std::abs(want)) << n;
  }
}

TEST(Spectra, AiryEigenvaluesInterleave) {
  const double theta = 0.5;
  const auto r = spectra::airy_eigenpairs(theta, 8);
  for (int n = 1; n <= 8; ++n) {
    const Boundary bc = n % 2 == 1 ? Boundary::neumann : Boundary::dirichlet;
    const double mu = airy::airy_point((n + 1) / 2, bc).mu;
    EXPECT_LT(std::abs(r[n - 1].lambda - std::polar(-mu, 2 * theta / 3)), 1e-13 * std::abs(mu)) << n;
  }
}

TEST(Spectra, FiniteDifferenceMatchesAiryEigenvalues) {
  spectra::DiscretizationConfig cfg;
  cfg.fd_points = 4000;
  const auto a = spectra::build_matrix(validate_spec(1, 0.5), cfg);
  const auto fd = spectra::eigenpairs(a, 6, false);
  const auto exact = spectra::airy_eigenpairs(0.5, 6);
  for (int n = 0; n < 6; ++n) EXPECT_LT(std::abs(fd[n].lambda - exact[n].lambda), 1e-4) << n;
}

TEST(Spectra, QuarticSelfadjointIsRealIncreasing) {
  const auto r = spectra::spectrum(validate_spec(4, 0), 12);
  for (int n = 0; n < 12; ++n) {
    EXPECT_NEAR(r[n].lambda.imag(), 0.0, 1e-10);
    if (n > 0) EXPECT_GT(r[n].lambda.real(), r[n - 1].lambda.real());
  }
  EXPECT_NEAR(r[0].lambda.real(), 1.0603620904841829, 1e-9);
}

TEST(Spectra, WkbEnergyApproximatesQuartic) {
  const auto r = spectra::spectrum(validate_spec(4, 0), 20);
  EXPECT_NEAR(spectra::wkb_energy(2, 20) / r[19].lambda.real(), 1.0, 1e-3);
  EXPECT_NEAR(spectra::wkb_energy(1, 5), 9.0, 1e-12);
}

TEST(Spectra, SelfadjointKappaIsOne) {
  spectra::DiscretizationConfig cfg;
  for (double m : {2.0, 4.0}) {
    for (const auto& r : spectra::kappa_galerkin_range(validate_spec(m, 0), cfg, 1, 10)) {
      EXPECT_NEAR(r.kappa, 1.0, 1e-8) << m << " " << r.n;
    }
  }
  cfg.fd_points = 1000;
  for (const auto& r : spectra::kappa_galerkin_range(validate_spec(1, 0), cfg, 1, 10)) {
    EXPECT_NEAR(r.kappa, 1.0, 1e-8) << r.n;
  }
  for (int n = 1; n <= 10; ++n) {
    EXPECT_EQ(spectra::kappa_harmonic_exact(0, n).kappa, 1.0);
    EXPECT_NEAR(spectra::kappa_airy_fullline(0, n).kappa, 1.0, 1e-8);
    EXPECT_NEAR(spectra::kappa_ray(2, 0, n).kappa, 1.0, 1e-8);
  }
}

TEST(Spectra, GalerkinMatchesHarmonicExact) {
  const auto g = spectra::kappa_galerkin(validate_spec(2, 0.6), {}, 1);
  EXPECT_NEAR(g.kappa / spectra::kappa_harmonic_exact(0.6, 1).kappa, 1.0, 1e-6);
  for (const auto& r : spectra::kappa_galerkin_range(validate_spec(2, 0.6), {}, 1, 10)) {
    EXPECT_NEAR(r.kappa / spectra::kappa_harmonic_exact(0.6, r.n).kappa, 1.0, 1e-6) << r.n;
  }
}

TEST(Spectra, GalerkinAtTwelveUnderflowsOrAgrees) {
  spectra::DiscretizationConfig cfg;
  cfg.basis_size = 128;
  try {
    const auto r = spectra::kappa_galerkin(validate_spec(2, 0.6), cfg, 12);
    EXPECT_NEAR(r.kappa / spectra::kappa_harmonic_exact(0.6, 12).kappa, 1.0, 1e-6);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::denominator_underflow);
  }
}

TEST(Spectra, UnderflowFlaggedInRange) {
  // theta near the sector edge: kappa outgrows double precision quickly
  const auto rows = spectra::kappa_galerkin_range(validate_spec(2, 1.5), {}, 30, 50);
  bool flagged = false;
  for (const auto& r : rows) {
    if (r.denominator_underflow) {
      flagged = true;
      EXPECT_TRUE(std::isnan(r.kappa));
    }
  }
  EXPECT_TRUE(flagged);
}

TEST(Spectra, KappaNearSelfadjointIsQuadratic) {
  const double theta = 1e-3;
  const double d = spectra::kappa_airy_fullline(theta, 1).kappa - 1.0;
  EXPECT_GT(d, 0.0);
  EXPECT_LT(d, 10 * theta * theta);
  const double h = spectra::kappa_harmonic_exact(theta, 1).kappa - 1.0;
  EXPECT_NEAR(h, theta * theta / 16, 1e-9);
}

TEST(Spectra, FiniteDifferenceMatchesAiryKappa) {
  spectra::DiscretizationConfig cfg;
  for (const auto& r : spectra::kappa_galerkin_range(validate_spec(1, 0.5), cfg, 1, 6)) {
    const double exact = spectra::kappa_airy_fullline(0.5, r.n).kappa;
    EXPECT_NEAR(r.kappa / exact, 1.0, 1e-4) << r.n;
  }
}

TEST(Spectra, AiryDenominatorAtFirstDirichletPoint) {
  const double mu = airy::airy_point(1, Boundary::dirichlet).mu;
  const double aip = airy::ai(mu).derivative().real();
  EXPECT_NEAR(aip * aip, 0.4917, 1e-4);
  // at theta = 0 the quotient is exactly 1
  EXPECT_NEAR(spectra::kappa_airy(0.0, 1, Boundary::dirichlet).kappa, 1.0, 1e-12);
}

TEST(Spectra, AiryGrowthMatchesLeadingRate) {
  const double theta = kPi / 3;
  const double c = asym::airy_constants(theta).C;
  double prev = 10.0;
  for (int n : {30, 100, 300}) {
    const double ratio = spectra::kappa_airy_fullline(theta, n).log_kappa / (c * (n - 0.5));
    const double dev = std::abs(ratio - 1.0);
    EXPECT_LT(dev, prev) << n;
    prev = dev;
  }
  EXPECT_LT(prev, 0.02);
}

TEST(Spectra, AiryWorksAtLargeIndex) {
  const auto r = spectra::kappa_airy_fullline(0.5, 1000000);
  const auto p = asym::airy_kappa_prediction(0.5, 1000000);
  EXPECT_TRUE(std::isinf(r.kappa));
  // even-odd structure leaves a sqrt(2) factor between the full line and the half-line law
  EXPECT_NEAR(r.log_kappa - p.log_kappa, std::log(std::sqrt(2.0)), 1e-3);
}

TEST(Spectra, HarmonicKappaOneClosedForm) {
  for (double theta : {0.3, 0.8, 1.5}) {
    EXPECT_NEAR(spectra::kappa_harmonic_exact(theta, 1).kappa, 1.0 / std::sqrt(std::cos(theta / 2)), 1e-12);
  }
}

TEST(Spectra, HarmonicGrowthRate) {
  std::vector<std::pair<double, double>> pts;
  for (int n = 10; n <= 30; ++n) pts.emplace_back(n, spectra::kappa_harmonic_exact(0.8, n).log_kappa);
  EXPECT_NEAR(asym::fit_growth_rate(pts).slope / asym::c_k(1, 0.8), 1.0, 0.03);
}

TEST(Spectra, RayMatchesHarmonicExact) {
  for (const auto& r : spectra::kappa_ray_range(1, 0.6, 1, 15)) {
    EXPECT_NEAR(r.kappa / spectra::kappa_harmonic_exact(0.6, r.n).kappa, 1.0, 1e-8) << r.n;
  }
}

TEST(Spectra, RayMatchesGalerkinForQuartic) {
  const auto ray = spectra::kappa_ray_range(2, 0.5, 1, 8);
  const auto gal = spectra::kappa_galerkin_range(validate_spec(4, 0.5), {}, 1, 8);
  for (int i = 0; i < 8; ++i) EXPECT_NEAR(ray[i].kappa / gal[i].kappa, 1.0, 1e-6) << i + 1;
}

TEST(Spectra, QuarticGrowthApproachesC2) {
  // the n = 8..20 window sits in the preasymptotic range; the slope closes in
  // on c_2 as the window moves up
  const double c2 = asym::c_k(2, 0.5);
  const auto rows = spectra::kappa_ray_range(2, 0.5, 8, 72);
  auto slope_over = [&rows](int lo, int hi) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : rows) {
      if (r.n >= lo && r.n <= hi) pts.emplace_back(r.n, r.log_kappa);
    }
    return asym::fit_growth_rate(pts).slope;
  };
  const double e1 = std::abs(slope_over(8, 20) / c2 - 1);
  const double e2 = std::abs(slope_over(20, 32) / c2 - 1);
  const double e3 = std::abs(slope_over(60, 72) / c2 - 1);
  EXPECT_LT(e2, e1);
  EXPECT_LT(e3, e2);
  EXPECT_LT(e3, 0.005);
}

TEST(Spectra, KappaAutoPicksRoute) {
  EXPECT_EQ(spectra::kappa_auto(validate_spec(1, 0.5), {3})[0].method, Method::airy);
  EXPECT_EQ(spectra::kappa_auto(validate_spec(2, 0.5), {3})[0].method, Method::harmonic_exact);
  EXPECT_EQ(spectra::kappa_auto(validate_spec(4, 0.5), {3})[0].method, Method::ray);
}

TEST(Spectra, ResolveConfigRejectsSmallBasis) {
  spectra::DiscretizationConfig cfg;
  cfg.basis_size = 20;
  try {
    spectra::resolve_config(validate_spec(4, 0.5), cfg, 10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::config_error);
  }
}

TEST(Spectra, KappaSymmetricInThetaSign) {
  for (int n : {1, 4, 9}) {
    EXPECT_NEAR(spectra::kappa_ray(2, 0.5, n).kappa, spectra::kappa_ray(2, -0.5, n).kappa, 1e-10);
    EXPECT_NEAR(spectra::kappa_airy_fullline(0.5, n).kappa, spectra::kappa_airy_fullline(-0.5, n).kappa, 1e-10);
  }
}
