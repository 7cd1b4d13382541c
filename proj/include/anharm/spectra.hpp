#pragma once

// Eigenpairs and instability indices kappa_n of A(m, theta).
//
// Routes:
//   galerkin        Hermite-Galerkin matrix (even m) or finite differences
//                   (m = 1); kappa = sum|c|^2 / |sum c^2|
//   airy            m = 1 half-line problems, exact Airy eigenfunctions and
//                   the primitive x Ai^2 - Ai'^2 for the denominator
//   harmonic_exact  m = 2, Hermite function on the rotated line
//   ray             m = 2k, selfadjoint eigenfunction continued to the
//                   rotated line as a finite Hermite sum

#include <vector>

#include "anharm/band.hpp"
#include "anharm/model.hpp"

namespace anharm::spectra {

struct DiscretizationConfig {
  int basis_size = 0;          // 0: automatic
  double hermite_scale = 0.0;  // 0: automatic
  double fd_half_width = 20.0;
  int fd_points = 2000;
};

struct OperatorMatrix {
  band::BandMatrix entries;
  OperatorSpec spec;
  DiscretizationConfig config;  // resolved values
  bool finite_difference = false;

  int size() const { return entries.size(); }
  double grid_spacing() const { return 2.0 * config.fd_half_width / (config.fd_points + 1); }
};

/// WKB estimate of the n-th eigenvalue of -d^2/dx^2 + x^{2k}.
double wkb_energy(int k, int n);
/// Hermite scale balancing the phase-space extent of the n_max-th state;
/// exactly 1 for k = 1.
double default_hermite_scale(int k, int n_max);
/// Fills automatic fields for requested indices up to n_max.
DiscretizationConfig resolve_config(const OperatorSpec& spec, DiscretizationConfig config, int n_max);

/// Hermite-Galerkin (even m) or finite-difference (m = 1) discretization.
OperatorMatrix build_matrix(const OperatorSpec& spec, const DiscretizationConfig& config);

/// Lowest n_max eigenpairs by modulus, eigenvectors with unit 2-norm. With
/// certify, Hermite results are recomputed at basis size 2N and every
/// eigenvalue must agree to 1e-8 relative (Error(not_converged) otherwise).
std::vector<EigenRecord> eigenpairs(const OperatorMatrix& matrix, int n_max, bool certify = true);

/// kappa from Galerkin eigenvectors, n in [n_lo, n_hi]. Error estimate from
/// basis doubling (Hermite) or Richardson extrapolation in h (finite
/// differences). Throws Error(denominator_underflow) when
/// |sum c^2| < 1e-13 sum |c|^2.
std::vector<InstabilityRecord> kappa_galerkin_range(const OperatorSpec& spec, DiscretizationConfig config,
                                                    int n_lo, int n_hi);
InstabilityRecord kappa_galerkin(const OperatorSpec& spec, const DiscretizationConfig& config, int n);

/// Eigenvalue |mu| exp(2 i theta / 3) of the half-line problem at an Airy point.
cplx airy_eigenvalue(double theta, double mu);
/// Full-line index n -> half-line point: odd n neumann (n+1)/2, even n dirichlet n/2.
std::pair<int, Boundary> halfline_index(int n);
std::vector<EigenRecord> airy_eigenpairs(double theta, int n_max);

InstabilityRecord kappa_airy(double theta, int n_halfline, Boundary bc);
InstabilityRecord kappa_airy_fullline(double theta, int n);

InstabilityRecord kappa_harmonic_exact(double theta, int n);

/// Selfadjoint eigenpairs (E_n, psi_n) of -d^2/dx^2 + x^{2k} continued to
/// x -> exp(i theta / (2(k+1))) x. Certified by basis doubling to 1e-8
/// relative (Error(ray_divergence) otherwise).
std::vector<InstabilityRecord> kappa_ray_range(int k, double theta, int n_lo, int n_hi,
                                               DiscretizationConfig config = {});
InstabilityRecord kappa_ray(int k, double theta, int n, const DiscretizationConfig& config = {});

/// Cancellation-free kappa for the spec: airy (m = 1), harmonic_exact (m = 2),
/// ray (m >= 4).
std::vector<InstabilityRecord> kappa_auto(const OperatorSpec& spec, const std::vector<int>& indices,
                                          const DiscretizationConfig& config = {});

/// Eigenvalues for display: exact parametrizations for m = 1, 2, Galerkin otherwise.
std::vector<EigenRecord> spectrum(const OperatorSpec& spec, int n_max, const DiscretizationConfig& config = {});

}  // namespace anharm::spectra
