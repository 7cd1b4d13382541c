#pragma once

// Pseudospectra of the truncated operator matrices: resolvent-norm grids,
// epsilon-level contours, the perimeter inequality
//     |boundary of the component around lambda| >= 2 pi eps kappa(lambda),
// and eigenvalue clouds of random perturbations A + eps B, ||B|| = 1.

#include <cstdint>
#include <string>
#include <vector>

#include "anharm/contour.hpp"
#include "anharm/spectra.hpp"

namespace anharm::pseudo {

struct Window {
  double re_lo = 0.0, re_hi = 1.0;
  double im_lo = 0.0, im_hi = 1.0;
};

/// Smallest singular value of (A - z) for a fixed matrix. Hermite matrices
/// are split by parity first. Each block is factored by banded LU and the
/// largest eigenvalue of (B^* B)^{-1} is found by Lanczos with full
/// reorthogonalization.
class ResolventKernel {
 public:
  explicit ResolventKernel(const spectra::OperatorMatrix& matrix);

  double sigma_min(cplx z) const;
  int size() const { return size_; }

 private:
  std::vector<band::BandMatrix> blocks_;
  int size_ = 0;
};

double sigma_min_banded(const band::BandMatrix& a, cplx z);
/// Reference: full SVD of the dense matrix (A - z).
double sigma_min_dense(const Eigen::MatrixXcd& a, cplx z);

struct GridOptions {
  double cap = 16.0;             // log10 resolvent norm ceiling
  int stability_samples = 64;    // 0 disables the N versus 2N check
};

struct PseudospectrumField {
  OperatorSpec spec;
  contour::Grid grid;            // values: log10 ||(A_N - z)^{-1}||
  int matrix_size = 0;
  double cap = 16.0;
  double trusted_radius = 0.0;   // |lambda_{N/4}|
  double stability = -1.0;       // max relative change of the norm under N -> 2N; < 0 if not run
};

/// Parallel banded kernel over the grid (OpenMP over points).
PseudospectrumField resolvent_grid(const spectra::OperatorMatrix& matrix, const Window& window, int nx, int ny,
                                   const GridOptions& opts = {});
/// Builds A_N from (spec, config) and also runs the N versus 2N stability check.
PseudospectrumField resolvent_grid(const OperatorSpec& spec, const spectra::DiscretizationConfig& config,
                                   const Window& window, int nx, int ny, const GridOptions& opts = {});
/// Serial dense-SVD reference for the same field.
PseudospectrumField resolvent_grid_reference(const spectra::OperatorMatrix& matrix, const Window& window, int nx,
                                             int ny, double cap = 16.0);

struct Component {
  double epsilon = 0.0;
  contour::Polyline line;
  std::vector<int> enclosed;  // 1-based eigenvalue indices inside
};

struct ContourSet {
  std::vector<double> epsilons;
  std::vector<Component> components;
  std::vector<cplx> eigenvalues;  // labels for the enclosure test, sorted by modulus
  bool open_lines = false;        // some level line left the window
};

/// Level lines of the field at -log10(eps) for each eps.
ContourSet contours(const PseudospectrumField& field, const std::vector<double>& eps_list,
                    const std::vector<cplx>& eigenvalues);

struct PerimeterResult {
  int n = 0;
  double epsilon = 0.0;
  double kappa = 0.0;
  double bound = 0.0;           // 2 pi eps kappa
  double perimeter_grid = 0.0;  // marching-squares polyline
  double perimeter = 0.0;       // refined, or the grid value without a kernel
  double slack = 0.0;           // perimeter / bound - 1
  bool checked = false;         // false: hypotheses not met, see note
  bool passed = false;
  std::string note;
};

/// Per (component, record) pair with matching index. Components that are
/// open or contain other than one eigenvalue are reported unchecked. With a
/// kernel, the perimeter is recomputed from a polar parametrization of the
/// level curve (r(phi) by root finding, periodic trapezoid rule).
std::vector<PerimeterResult> perimeter_check(const ContourSet& set, const std::vector<InstabilityRecord>& records,
                                             const ResolventKernel* kernel = nullptr);

/// Perimeter check on zoomed windows around lambda_n: the window half-width
/// starts at 2 eps and doubles until the component around lambda_n is closed.
PerimeterResult local_perimeter_check(const spectra::OperatorMatrix& matrix, const ResolventKernel& kernel,
                                      const std::vector<cplx>& eigenvalues, const InstabilityRecord& record,
                                      double eps, int grid_points);

/// Arc length of the curve sigma_min(A - z) = eps around an eigenvalue, from
/// radii at equispaced angles. [r_lo, r_hi] is a starting bracket per ray;
/// r_lo shrinks towards the centre and r_hi grows by up to 1.25^8 until the
/// crossing is bracketed, else Error(hypothesis_violated).
double level_curve_length(const ResolventKernel& kernel, cplx centre, double eps, double r_lo, double r_hi,
                          int angles = 256);

struct ScatterTrial {
  int trial = 0;
  double norm_estimate = 0.0;  // power-iteration ||B|| before scaling
  std::vector<cplx> eigenvalues;
};

/// Eigenvalues of A_N + eps B for `trials` complex Gaussian B scaled to unit
/// norm. Trial t draws from mt19937_64 seeded by (seed, t).
std::vector<ScatterTrial> perturbation_scatter(const spectra::OperatorMatrix& matrix, double eps, int trials,
                                               std::uint64_t seed);

struct ContainmentReport {
  long points = 0;
  long outside = 0;         // sigma_min(A - z) >= factor * eps
  double worst_ratio = 0.0; // max sigma_min / eps
};

ContainmentReport scatter_containment(const ResolventKernel& kernel, const std::vector<ScatterTrial>& trials,
                                      double eps, double factor = 1.05);

/// Largest distance from any scattered eigenvalue to the unperturbed spectrum.
double max_spectrum_distance(const std::vector<ScatterTrial>& trials, const std::vector<cplx>& spectrum);

struct DiskFit {
  int n = 0;
  double kappa = 0.0;      // matrix instability index of lambda_n
  double max_distance = 0.0;
  double c_fit = 0.0;      // (max_distance - eps kappa) / eps^2
};

/// Small-eps disk inclusion D(lambda_n, eps kappa_n + C eps^2) on the matrix:
/// points are assigned to the nearest eigenvalue, C is fitted per n.
std::vector<DiskFit> disk_fit(const spectra::OperatorMatrix& matrix, const std::vector<ScatterTrial>& trials,
                              double eps, int n_max);

}  // namespace anharm::pseudo
