#include <gtest/gtest.h>

#include <cmath>

#include "anharm/error.hpp"
#include "anharm/pseudo.hpp"
#include "anharm/spectra.hpp"

using namespace anharm;

namespace {

spectra::OperatorMatrix harmonic(double theta, int n = 200) {
  spectra::DiscretizationConfig cfg;
  cfg.basis_size = n;
  cfg.hermite_scale = 1.0;
  return spectra::build_matrix(validate_spec(2, theta), cfg);
}

std::vector<cplx> eigenvalues(const spectra::OperatorMatrix& m, int count) {
  std::vector<cplx> out;
  for (const auto& r : spectra::eigenpairs(m, count, false)) out.push_back(r.lambda);
  return out;
}

}  // namespace

TEST(Pseudo, BandedMatchesDenseSvd) {
  const auto m = harmonic(0.6, 120);
  const pseudo::ResolventKernel k(m);
  const Eigen::MatrixXcd d = m.entries.dense();
  for (cplx z : {cplx(1.5, 0.7), cplx(5, 3), cplx(0.5, 2), cplx(-2, -1)}) {
    const double ref = pseudo::sigma_min_dense(d, z);
    EXPECT_NEAR(k.sigma_min(z) / ref, 1.0, 1e-9) << z;
  }
  spectra::DiscretizationConfig cfg;
  cfg.fd_points = 150;
  const auto fd = spectra::build_matrix(validate_spec(1, 0.5), cfg);
  const pseudo::ResolventKernel kf(fd);
  const cplx z(2.0, 0.8);
  EXPECT_NEAR(kf.sigma_min(z) / pseudo::sigma_min_dense(fd.entries.dense(), z), 1.0, 1e-9);
}

TEST(Pseudo, SelfadjointResolventIsInverseDistance) {
  const auto m = harmonic(0.0);
  const pseudo::ResolventKernel k(m);
  EXPECT_NEAR(1.0 / k.sigma_min(1.1), 1.0 / 0.1, 0.5);
}

TEST(Pseudo, ResolventGrowsAlongSpectrum) {
  const auto m = harmonic(0.6);
  const pseudo::ResolventKernel k(m);
  double prev = 0.0;
  for (int n = 1; n <= 6; ++n) {
    const cplx lambda = std::polar(2.0 * n - 1, 0.3);
    const cplx z = lambda + 0.5 * std::polar(1.0, 0.3 - kPi / 2);
    const double norm = 1.0 / k.sigma_min(z);
    EXPECT_GT(norm, prev) << n;
    prev = norm;
  }
}

TEST(Pseudo, ConjugateMirror) {
  const pseudo::Window w{-1, 8, -1, 3};
  const pseudo::Window mirror{-1, 8, -3, 1};
  pseudo::GridOptions opts;
  opts.stability_samples = 0;
  const auto a = pseudo::resolvent_grid(harmonic(0.6, 80), w, 21, 17, opts);
  const auto b = pseudo::resolvent_grid(harmonic(-0.6, 80), mirror, 21, 17, opts);
  for (int iy = 0; iy < 17; ++iy) {
    for (int ix = 0; ix < 21; ++ix) EXPECT_NEAR(a.grid.at(ix, iy), b.grid.at(ix, 16 - iy), 1e-9);
  }
}

TEST(Pseudo, ParallelGridMatchesReference) {
  const auto m = harmonic(0.6, 60);
  const pseudo::Window w{-1, 10, -1, 4};
  pseudo::GridOptions opts;
  opts.stability_samples = 0;
  const auto fast = pseudo::resolvent_grid(m, w, 12, 9, opts);
  const auto ref = pseudo::resolvent_grid_reference(m, w, 12, 9);
  for (std::size_t i = 0; i < ref.grid.values.size(); ++i) {
    EXPECT_NEAR(fast.grid.values[i], ref.grid.values[i], 1e-9) << i;
    EXPECT_TRUE(std::isfinite(fast.grid.values[i]));
  }
}

TEST(Pseudo, StabilityAndTrustedRadiusReported) {
  spectra::DiscretizationConfig cfg;
  cfg.basis_size = 100;
  cfg.hermite_scale = 1.0;
  const auto f = pseudo::resolvent_grid(validate_spec(2, 0.6), cfg, {-1, 10, -1, 4}, 10, 8);
  EXPECT_GE(f.stability, 0.0);
  EXPECT_LT(f.stability, 0.01);
  EXPECT_GT(f.trusted_radius, 20.0);
}

TEST(Pseudo, NestedSuperLevelSets) {
  const auto m = harmonic(0.6, 100);
  pseudo::GridOptions opts;
  opts.stability_samples = 0;
  const auto f = pseudo::resolvent_grid(m, {-1, 8, -1, 4}, 60, 40, opts);
  // every point inside sigma_eps is inside sigma_eps' for eps < eps'
  for (double v : f.grid.values) {
    if (v > 3.0) EXPECT_GT(v, 2.0);
  }
  const auto set = pseudo::contours(f, {1e-2, 1e-1}, eigenvalues(m, 10));
  for (const auto& inner : set.components) {
    if (inner.epsilon != 1e-2 || !inner.line.closed) continue;
    bool inside = false;
    for (const auto& outer : set.components) {
      if (outer.epsilon == 1e-1 && outer.line.closed && contour::encloses(outer.line, inner.line.vertices[0])) {
        inside = true;
      }
    }
    EXPECT_TRUE(inside);
  }
}

TEST(Pseudo, PerimeterBoundAtLambdaFive) {
  const auto m = harmonic(0.6);
  const pseudo::ResolventKernel k(m);
  const auto rec = spectra::kappa_harmonic_exact(0.6, 5);
  const auto r = pseudo::local_perimeter_check(m, k, eigenvalues(m, 20), rec, 1e-4, 120);
  EXPECT_TRUE(r.checked) << r.note;
  EXPECT_TRUE(r.passed);
  EXPECT_GE(r.slack, 0.0);
  EXPECT_GE(r.perimeter, 2 * kPi * 1e-4 * rec.kappa);
}

TEST(Pseudo, SelfadjointPerimeterIsCircle) {
  const auto m = harmonic(0.0);
  const pseudo::ResolventKernel k(m);
  InstabilityRecord rec;
  rec.n = 2;
  const auto r = pseudo::local_perimeter_check(m, k, eigenvalues(m, 20), rec, 1e-3, 120);
  ASSERT_TRUE(r.checked) << r.note;
  EXPECT_NEAR(r.perimeter / (2 * kPi * 1e-3), 1.0, 1e-6);
  EXPECT_NEAR(r.perimeter_grid / (2 * kPi * 1e-3), 1.0, 2e-3);
}

TEST(Pseudo, DoubledKappaLowersSlack) {
  const auto m = harmonic(0.6);
  const pseudo::ResolventKernel k(m);
  auto rec = spectra::kappa_harmonic_exact(0.6, 2);
  const auto ev = eigenvalues(m, 20);
  const auto a = pseudo::local_perimeter_check(m, k, ev, rec, 1e-3, 80);
  rec.kappa *= 2;
  const auto b = pseudo::local_perimeter_check(m, k, ev, rec, 1e-3, 80);
  EXPECT_NEAR(b.bound, 2 * a.bound, 1e-15);
  EXPECT_NEAR(1 + b.slack, (1 + a.slack) / 2, 1e-12);
  EXPECT_FALSE(b.passed);
}

TEST(Pseudo, GlobalGridComponentsAreLabelled) {
  const auto m = harmonic(0.6, 100);
  const pseudo::ResolventKernel k(m);
  pseudo::GridOptions opts;
  opts.stability_samples = 0;
  const auto f = pseudo::resolvent_grid(m, {0, 4, -0.5, 1.5}, 150, 75, opts);
  const auto ev = eigenvalues(m, 10);
  const auto set = pseudo::contours(f, {1e-1}, ev);
  const auto res = pseudo::perimeter_check(set, {spectra::kappa_harmonic_exact(0.6, 1),
                                                 spectra::kappa_harmonic_exact(0.6, 2)}, &k);
  ASSERT_EQ(res.size(), 2u);
  for (const auto& r : res) {
    EXPECT_TRUE(r.checked) << r.note;
    EXPECT_TRUE(r.passed);
    EXPECT_NEAR(r.perimeter_grid / r.perimeter, 1.0, 0.01);
  }
}

TEST(Pseudo, ZeroEpsilonScatterIsSpectrum) {
  const auto m = harmonic(0.6, 40);
  const auto trials = pseudo::perturbation_scatter(m, 0.0, 2, 9);
  const auto ev = band::eigen_general(m.entries.dense(), false).values;
  std::vector<cplx> spectrum(ev.data(), ev.data() + ev.size());
  EXPECT_LT(pseudo::max_spectrum_distance(trials, spectrum), 1e-9);
}

TEST(Pseudo, SelfadjointCloudStaysNear) {
  const auto m = harmonic(0.0, 200);
  const auto ev = band::eigen_general(m.entries.dense(), false).values;
  std::vector<cplx> spectrum(ev.data(), ev.data() + ev.size());
  const auto trials = pseudo::perturbation_scatter(m, 1e-4, 4, 5);
  EXPECT_LE(pseudo::max_spectrum_distance(trials, spectrum), 1e-4 * 1.01);
}

TEST(Pseudo, ScatterDeterministicAndContained) {
  const auto m = harmonic(0.6, 200);
  const auto a = pseudo::perturbation_scatter(m, 1e-4, 4, 42);
  const auto b = pseudo::perturbation_scatter(m, 1e-4, 4, 42);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t t = 0; t < a.size(); ++t) {
    EXPECT_EQ(a[t].eigenvalues, b[t].eigenvalues);
    EXPECT_NEAR(a[t].norm_estimate, b[t].norm_estimate, 0.0);
  }
  const pseudo::ResolventKernel k(m);
  const auto report = pseudo::scatter_containment(k, a, 1e-4);
  EXPECT_EQ(report.points, 800);
  EXPECT_EQ(report.outside, 0);
  const auto c = pseudo::perturbation_scatter(m, 1e-4, 1, 43);
  EXPECT_NE(a[0].eigenvalues, c[0].eigenvalues);
}

TEST(Pseudo, DiskInclusionAroundLowEigenvalues) {
  const auto m = harmonic(0.6, 200);
  const double eps = 1e-5;
  const auto trials = pseudo::perturbation_scatter(m, eps, 6, 3);
  for (const auto& f : pseudo::disk_fit(m, trials, eps, 4)) {
    EXPECT_NEAR(f.kappa / spectra::kappa_harmonic_exact(0.6, f.n).kappa, 1.0, 1e-6);
    EXPECT_LE(f.max_distance, eps * f.kappa + f.c_fit * eps * eps + 1e-18);
    EXPECT_LE(f.max_distance, 1.01 * eps * f.kappa);
  }
}
