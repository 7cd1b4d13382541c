#include "anharm/pseudo.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <boost/math/tools/toms748_solve.hpp>

#include "anharm/error.hpp"
#include "anharm/parallel.hpp"

namespace anharm::pseudo {
namespace {

constexpr int kLanczosMax = 80;
constexpr double kLanczosTol = 1e-9;
constexpr int kPowerSteps = 100;

// Largest eigenvalue of the Hermitian positive operator x -> B^{-1} B^{-*} x.
double lanczos_top(const band::ShiftedLU& lu, int n) {
  const int max_steps = std::min(n, kLanczosMax);
  Eigen::MatrixXcd q(n, max_steps + 1);
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i) {
    const double t = (2.0 * i - (n - 1)) / std::max(1, n - 1);
    v[i] = 1.0 + t + 0.5 * std::sin(1.0 + i);
  }
  q.col(0) = v.normalized();
  std::vector<double> alpha, beta;
  double previous = 0.0;
  for (int j = 0; j < max_steps; ++j) {
    Eigen::VectorXcd w = q.col(j);
    lu.solve(w, true);
    lu.solve(w, false);
    alpha.push_back((q.col(j).adjoint() * w)(0).real());
    // full reorthogonalization, twice
    for (int pass = 0; pass < 2; ++pass) {
      const Eigen::VectorXcd coeffs = q.leftCols(j + 1).adjoint() * w;
      w -= q.leftCols(j + 1) * coeffs;
    }
    const double b = w.norm();
    const int m = j + 1;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), m);
    Eigen::VectorXd sub = m > 1 ? Eigen::VectorXd(Eigen::Map<Eigen::VectorXd>(beta.data(), m - 1)) : Eigen::VectorXd();
    tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    const double top = tri.eigenvalues()[m - 1];
    const double residual = b * std::abs(tri.eigenvectors()(m - 1, m - 1));
    if (residual <= kLanczosTol * top || b <= 1e-14 * top || std::abs(top - previous) <= 1e-15 * top ||
        m == max_steps) {
      return top;
    }
    previous = top;
    beta.push_back(b);
    q.col(j + 1) = w / b;
  }
  return previous;
}

std::vector<band::BandMatrix> parity_blocks(const spectra::OperatorMatrix& matrix) {
  if (matrix.finite_difference) return {matrix.entries};
  std::vector<band::BandMatrix> out;
  for (int parity = 0; parity < 2; ++parity) {
    std::vector<int> idx;
    for (int j = parity; j < matrix.size(); j += 2) idx.push_back(j);
    out.push_back(matrix.entries.submatrix(idx));
  }
  return out;
}

double to_log_norm(double sigma, double cap) {
  if (!(sigma > 0.0)) return cap;
  return std::min(cap, -std::log10(sigma));
}

contour::Grid empty_grid(const Window& w, int nx, int ny) {
  if (nx < 2 || ny < 2) throw Error(ErrorKind::config_error, "grid needs at least 2 x 2 points");
  if (!(w.re_lo < w.re_hi) || !(w.im_lo < w.im_hi)) throw Error(ErrorKind::config_error, "empty window");
  contour::Grid g;
  g.re_lo = w.re_lo;
  g.re_hi = w.re_hi;
  g.im_lo = w.im_lo;
  g.im_hi = w.im_hi;
  g.nx = nx;
  g.ny = ny;
  g.values.assign(static_cast<std::size_t>(nx) * ny, 0.0);
  return g;
}

double trusted_radius(const spectra::OperatorMatrix& matrix) {
  if (matrix.finite_difference) return 0.5 * matrix.config.fd_half_width;
  std::vector<double> moduli;
  for (const band::BandMatrix& b : parity_blocks(matrix)) {
    const band::DenseEigen e = band::eigen_general(b.dense(), false);
    for (int i = 0; i < e.values.size(); ++i) moduli.push_back(std::abs(e.values[i]));
  }
  std::sort(moduli.begin(), moduli.end());
  return moduli[std::max<std::size_t>(0, moduli.size() / 4 - 1)];
}

PseudospectrumField sweep(const spectra::OperatorMatrix& matrix, const ResolventKernel& kernel, const Window& window,
                          int nx, int ny, double cap) {
  PseudospectrumField field;
  field.spec = matrix.spec;
  field.grid = empty_grid(window, nx, ny);
  field.matrix_size = matrix.size();
  field.cap = cap;
  contour::Grid& g = field.grid;
  parallel_for(static_cast<long>(nx) * ny, [&](long i) {
    const int ix = static_cast<int>(i % nx);
    const int iy = static_cast<int>(i / nx);
    g.values[i] = to_log_norm(kernel.sigma_min(g.point(ix, iy)), cap);
  });
  return field;
}

// Intersection radius of the ray centre + r e^{i phi} with a closed polyline;
// returns the count of crossings and the largest radius.
std::pair<int, double> ray_hits(const contour::Polyline& line, cplx centre, double phi) {
  const cplx d = std::polar(1.0, phi);
  int count = 0;
  double radius = 0.0;
  for (std::size_t i = 1; i < line.vertices.size(); ++i) {
    const cplx a = line.vertices[i - 1] - centre;
    const cplx b = line.vertices[i] - centre;
    const cplx e = b - a;
    // solve r d = a + s e
    const double det = (std::conj(d) * e).imag();
    if (det == 0.0) continue;
    const double s = -(std::conj(d) * a).imag() / det;
    const double r = (std::conj(e) * a).imag() / det * -1.0;
    if (s >= 0.0 && s < 1.0 && r > 0.0) {
      ++count;
      radius = std::max(radius, r);
    }
  }
  return {count, radius};
}

}  // namespace

ResolventKernel::ResolventKernel(const spectra::OperatorMatrix& matrix)
    : blocks_(parity_blocks(matrix)), size_(matrix.size()) {}

double ResolventKernel::sigma_min(cplx z) const {
  double best = INFINITY;
  for (const band::BandMatrix& b : blocks_) best = std::min(best, sigma_min_banded(b, z));
  return best;
}

double sigma_min_banded(const band::BandMatrix& a, cplx z) {
  const band::ShiftedLU lu(a, z);
  if (lu.singular()) return 0.0;
  return 1.0 / std::sqrt(lanczos_top(lu, a.size()));
}

double sigma_min_dense(const Eigen::MatrixXcd& a, cplx z) {
  Eigen::MatrixXcd shifted = a;
  shifted.diagonal().array() -= z;
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(shifted);
  return svd.singularValues().minCoeff();
}

PseudospectrumField resolvent_grid(const spectra::OperatorMatrix& matrix, const Window& window, int nx, int ny,
                                   const GridOptions& opts) {
  const ResolventKernel kernel(matrix);
  PseudospectrumField field = sweep(matrix, kernel, window, nx, ny, opts.cap);
  field.trusted_radius = trusted_radius(matrix);
  return field;
}

PseudospectrumField resolvent_grid(const OperatorSpec& spec, const spectra::DiscretizationConfig& config,
                                   const Window& window, int nx, int ny, const GridOptions& opts) {
  const spectra::OperatorMatrix matrix = spectra::build_matrix(spec, config);
  PseudospectrumField field = resolvent_grid(matrix, window, nx, ny, opts);
  if (opts.stability_samples <= 0) return field;

  spectra::DiscretizationConfig doubled = matrix.config;
  if (matrix.finite_difference) {
    doubled.fd_points = 2 * doubled.fd_points + 1;
  } else {
    doubled.basis_size *= 2;
  }
  const ResolventKernel fine(spectra::build_matrix(spec, doubled));
  const long total = static_cast<long>(nx) * ny;
  const int samples = static_cast<int>(std::min<long>(opts.stability_samples, total));
  std::vector<double> change(samples, 0.0);
  parallel_for(samples, [&](long k) {
    const long i = k * total / samples;
    if (field.grid.values[i] >= opts.cap) return;
    const cplx z = field.grid.point(static_cast<int>(i % nx), static_cast<int>(i / nx));
    const double coarse_log = field.grid.values[i];
    const double fine_log = to_log_norm(fine.sigma_min(z), opts.cap);
    change[k] = std::abs(std::pow(10.0, fine_log - coarse_log) - 1.0);
  });
  field.stability = *std::max_element(change.begin(), change.end());
  return field;
}

PseudospectrumField resolvent_grid_reference(const spectra::OperatorMatrix& matrix, const Window& window, int nx,
                                             int ny, double cap) {
  PseudospectrumField field;
  field.spec = matrix.spec;
  field.grid = empty_grid(window, nx, ny);
  field.matrix_size = matrix.size();
  field.cap = cap;
  const Eigen::MatrixXcd dense = matrix.entries.dense();
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      field.grid.values[static_cast<std::size_t>(iy) * nx + ix] =
          to_log_norm(sigma_min_dense(dense, field.grid.point(ix, iy)), cap);
    }
  }
  field.trusted_radius = trusted_radius(matrix);
  return field;
}

ContourSet contours(const PseudospectrumField& field, const std::vector<double>& eps_list,
                    const std::vector<cplx>& eigenvalues) {
  ContourSet set;
  set.epsilons = eps_list;
  set.eigenvalues = eigenvalues;
  for (double eps : eps_list) {
    if (!(eps > 0.0)) throw Error(ErrorKind::config_error, "epsilon must be positive");
    for (contour::Polyline& line : contour::level_lines(field.grid, -std::log10(eps))) {
      Component c;
      c.epsilon = eps;
      if (!line.closed) set.open_lines = true;
      for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
        if (contour::encloses(line, eigenvalues[i])) c.enclosed.push_back(static_cast<int>(i) + 1);
      }
      c.line = std::move(line);
      set.components.push_back(std::move(c));
    }
  }
  return set;
}

double level_curve_length(const ResolventKernel& kernel, cplx centre, double eps, double r_lo, double r_hi,
                          int angles) {
  std::vector<double> radius(angles);
  std::vector<std::string> failures(angles);
  parallel_for(angles, [&](long j) {
    const cplx dir = std::polar(1.0, 2.0 * kPi * j / angles);
    auto g = [&](double r) { return kernel.sigma_min(centre + r * dir) - eps; };
    // the grid-derived bracket is a guess: sigma_min vanishes at the centre,
    // so r_lo can always shrink; r_hi grows a little
    double lo = r_lo, hi = r_hi;
    double g_lo = g(lo);
    for (int i = 0; i < 20 && !(g_lo < 0.0); ++i) g_lo = g(lo *= 0.25);
    double g_hi = g(hi);
    for (int i = 0; i < 8 && !(g_hi > 0.0); ++i) g_hi = g(hi *= 1.25);
    if (!(g_lo < 0.0 && g_hi > 0.0)) {
      std::ostringstream os;
      os << "level curve not bracketed in [" << r_lo << ", " << r_hi << "] at angle index " << j;
      throw Error(ErrorKind::hypothesis_violated, os.str());
    }
    std::uintmax_t iterations = 100;
    const auto bracket = boost::math::tools::toms748_solve(g, lo, hi, g_lo, g_hi,
                                                           boost::math::tools::eps_tolerance<double>(50), iterations);
    radius[j] = 0.5 * (bracket.first + bracket.second);
  });
  // spectral derivative of the periodic samples
  const int half = (angles - 1) / 2;
  std::vector<cplx> coeff(2 * half + 1);
  for (int k = -half; k <= half; ++k) {
    cplx sum = 0.0;
    for (int j = 0; j < angles; ++j) sum += radius[j] * std::polar(1.0, -2.0 * kPi * k * j / angles);
    coeff[k + half] = sum / static_cast<double>(angles);
  }
  double length = 0.0;
  for (int j = 0; j < angles; ++j) {
    cplx derivative = 0.0;
    for (int k = -half; k <= half; ++k) {
      derivative += cplx(0.0, k) * coeff[k + half] * std::polar(1.0, 2.0 * kPi * k * j / angles);
    }
    length += std::hypot(radius[j], derivative.real());
  }
  return length * 2.0 * kPi / angles;
}

namespace {

PerimeterResult check_component(const Component& c, const InstabilityRecord& rec, cplx lambda,
                                const ResolventKernel* kernel) {
  PerimeterResult r;
  r.n = rec.n;
  r.epsilon = c.epsilon;
  r.kappa = rec.kappa;
  r.bound = 2.0 * kPi * c.epsilon * rec.kappa;
  r.perimeter_grid = c.line.perimeter;
  r.perimeter = c.line.perimeter;
  if (!c.line.closed) {
    r.note = "level line leaves the window";
    return r;
  }
  if (c.enclosed.size() != 1) {
    r.note = "component contains " + std::to_string(c.enclosed.size()) + " eigenvalues";
    return r;
  }
  if (kernel != nullptr) {
    double r_min = INFINITY, r_max = 0.0;
    bool star = true;
    for (int j = 0; j < 64 && star; ++j) {
      const auto [count, radius] = ray_hits(c.line, lambda, 2.0 * kPi * (j + 0.5) / 64);
      star = count == 1;
      r_min = std::min(r_min, radius);
      r_max = std::max(r_max, radius);
    }
    for (const cplx& v : c.line.vertices) {
      r_min = std::min(r_min, std::abs(v - lambda));
      r_max = std::max(r_max, std::abs(v - lambda));
    }
    if (star) {
      try {
        r.perimeter = level_curve_length(*kernel, lambda, c.epsilon, 0.8 * r_min, 1.2 * r_max);
      } catch (const Error& e) {
        r.note = std::string("grid perimeter used: ") + e.what();
      }
    } else {
      r.note = "grid perimeter used: component not star-shaped about the eigenvalue";
    }
  }
  r.checked = true;
  r.slack = r.perimeter / r.bound - 1.0;
  r.passed = r.perimeter >= r.bound;
  return r;
}

}  // namespace

std::vector<PerimeterResult> perimeter_check(const ContourSet& set, const std::vector<InstabilityRecord>& records,
                                             const ResolventKernel* kernel) {
  std::vector<PerimeterResult> out;
  for (const Component& c : set.components) {
    if (c.enclosed.empty()) continue;
    for (const InstabilityRecord& rec : records) {
      if (std::find(c.enclosed.begin(), c.enclosed.end(), rec.n) == c.enclosed.end()) continue;
      out.push_back(check_component(c, rec, set.eigenvalues[rec.n - 1], kernel));
    }
  }
  return out;
}

PerimeterResult local_perimeter_check(const spectra::OperatorMatrix& matrix, const ResolventKernel& kernel,
                                      const std::vector<cplx>& eigenvalues, const InstabilityRecord& record,
                                      double eps, int grid_points) {
  const cplx lambda = eigenvalues.at(record.n - 1);
  double half = 2.0 * eps;
  for (int attempt = 0; attempt < 40; ++attempt, half *= 2.0) {
    const Window w{lambda.real() - half, lambda.real() + half, lambda.imag() - half, lambda.imag() + half};
    const PseudospectrumField field = sweep(matrix, kernel, w, grid_points, grid_points, 16.0);
    const ContourSet set = contours(field, {eps}, eigenvalues);
    const Component* best = nullptr;
    for (const Component& c : set.components) {
      if (!c.line.closed || !contour::encloses(c.line, lambda)) continue;
      if (best == nullptr || c.line.perimeter > best->line.perimeter) best = &c;
    }
    if (best == nullptr) continue;
    return check_component(*best, record, lambda, &kernel);
  }
  PerimeterResult r;
  r.n = record.n;
  r.epsilon = eps;
  r.kappa = record.kappa;
  r.bound = 2.0 * kPi * eps * record.kappa;
  r.note = "no closed component found";
  return r;
}

std::vector<ScatterTrial> perturbation_scatter(const spectra::OperatorMatrix& matrix, double eps, int trials,
                                               std::uint64_t seed) {
  if (trials < 1) throw Error(ErrorKind::config_error, "trials must be >= 1");
  if (!(eps >= 0.0)) throw Error(ErrorKind::config_error, "eps must be nonnegative");
  const Eigen::MatrixXcd a = matrix.entries.dense();
  const int n = matrix.size();
  std::vector<ScatterTrial> out(trials);
  parallel_for(trials, [&](long t) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(t)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXcd b(n, n);
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        const double re = normal(rng);
        const double im = normal(rng);
        b(i, j) = cplx(re, im) / std::sqrt(2.0);
      }
    }
    Eigen::VectorXcd v = Eigen::VectorXcd::Ones(n).normalized();
    double norm = 0.0;
    for (int step = 0; step < kPowerSteps; ++step) {
      const Eigen::VectorXcd w = b * v;
      norm = w.norm();
      v = (b.adjoint() * w).normalized();
    }
    norm = (b * v).norm();
    out[t].trial = static_cast<int>(t);
    out[t].norm_estimate = norm;
    const band::DenseEigen e = band::eigen_general(a + (eps / norm) * b, false);
    out[t].eigenvalues.assign(e.values.data(), e.values.data() + e.values.size());
  });
  return out;
}

ContainmentReport scatter_containment(const ResolventKernel& kernel, const std::vector<ScatterTrial>& trials,
                                      double eps, double factor) {
  std::vector<cplx> points;
  for (const ScatterTrial& t : trials) points.insert(points.end(), t.eigenvalues.begin(), t.eigenvalues.end());
  std::vector<double> ratio(points.size());
  parallel_for(static_cast<long>(points.size()), [&](long i) { ratio[i] = kernel.sigma_min(points[i]) / eps; });
  ContainmentReport report;
  report.points = static_cast<long>(points.size());
  for (double r : ratio) {
    if (r >= factor) ++report.outside;
    report.worst_ratio = std::max(report.worst_ratio, r);
  }
  return report;
}

double max_spectrum_distance(const std::vector<ScatterTrial>& trials, const std::vector<cplx>& spectrum) {
  double worst = 0.0;
  for (const ScatterTrial& t : trials) {
    for (const cplx& z : t.eigenvalues) {
      double nearest = INFINITY;
      for (const cplx& l : spectrum) nearest = std::min(nearest, std::abs(z - l));
      worst = std::max(worst, nearest);
    }
  }
  return worst;
}

std::vector<DiskFit> disk_fit(const spectra::OperatorMatrix& matrix, const std::vector<ScatterTrial>& trials,
                              double eps, int n_max) {
  const std::vector<EigenRecord> pairs = spectra::eigenpairs(matrix, n_max, false);
  const band::DenseEigen all = band::eigen_general(matrix.entries.dense(), false);
  std::vector<DiskFit> out(n_max);
  for (int i = 0; i < n_max; ++i) {
    const auto* h = std::get_if<HermiteCoeffs>(&pairs[i].representation);
    const Eigen::VectorXcd& c = h != nullptr ? h->coeffs : std::get<GridFunction>(pairs[i].representation).values;
    out[i].n = i + 1;
    out[i].kappa = c.squaredNorm() / std::abs((c.transpose() * c)(0));
  }
  for (const ScatterTrial& t : trials) {
    for (const cplx& z : t.eigenvalues) {
      double nearest = INFINITY;
      for (int i = 0; i < all.values.size(); ++i) nearest = std::min(nearest, std::abs(z - all.values[i]));
      for (int i = 0; i < n_max; ++i) {
        const double d = std::abs(z - pairs[i].lambda);
        if (d <= nearest * (1.0 + 1e-12)) out[i].max_distance = std::max(out[i].max_distance, d);
      }
    }
  }
  for (DiskFit& f : out) f.c_fit = (f.max_distance - eps * f.kappa) / (eps * eps);
  return out;
}

}  // namespace anharm::pseudo
