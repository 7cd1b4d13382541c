#include "anharm/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "anharm/airy.hpp"
#include "anharm/error.hpp"
#include "anharm/gamma.hpp"
#include "anharm/hermite.hpp"
#include "anharm/parallel.hpp"
#include "anharm/quad.hpp"

namespace anharm::spectra {
namespace {

constexpr double kCertifyTol = 1e-8;
constexpr double kUnderflowTol = 1e-13;
constexpr double kQuadTol = 1e-12;
constexpr double kCoefficientFloor = 1e-14;

std::vector<int> parity_indices(int n, int parity) {
  std::vector<int> out;
  for (int j = parity; j < n; j += 2) out.push_back(j);
  return out;
}

// Columns of X^{power} restricted to the first n basis functions; X is
// applied on a basis of size n + power / 2, so entries are the exact
// projections of x^{power}.
Eigen::MatrixXd position_power(int n, int power) {
  const int big = n + power / 2 + 1;
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd v(big), w(big);
  for (int j = 0; j < n; ++j) {
    v.setZero();
    v[j] = 1.0;
    for (int p = 0; p < power; ++p) {
      w.setZero();
      for (int i = 0; i < big; ++i) {
        if (v[i] == 0.0) continue;
        if (i + 1 < big) w[i + 1] += std::sqrt((i + 1) / 2.0) * v[i];
        if (i > 0) w[i - 1] += std::sqrt(i / 2.0) * v[i];
      }
      v.swap(w);
    }
    out.col(j) = v.head(n);
  }
  return out;
}

// Real symmetric Hermite-Galerkin matrices: kinetic part s^2 P^2 and
// potential part s^{-2k} X^{2k}.
struct HermiteParts {
  Eigen::MatrixXd kinetic;
  Eigen::MatrixXd potential;
};

HermiteParts hermite_parts(int k, int n, double scale) {
  HermiteParts parts;
  parts.kinetic = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    parts.kinetic(j, j) = (2.0 * j + 1.0) / 2.0;
    if (j + 2 < n) {
      parts.kinetic(j, j + 2) = parts.kinetic(j + 2, j) = -std::sqrt((j + 1.0) * (j + 2.0)) / 2.0;
    }
  }
  parts.kinetic *= scale * scale;
  parts.potential = position_power(n, 2 * k) * std::pow(scale, -2.0 * k);
  // products of X round differently above and below the diagonal
  parts.potential.triangularView<Eigen::StrictlyLower>() = parts.potential.transpose().triangularView<Eigen::StrictlyLower>();
  return parts;
}

struct ParityEigen {
  std::vector<cplx> values;
  std::vector<Eigen::VectorXcd> vectors;  // full length, empty when not requested
};

// Eigenpairs of an even-m Hermite matrix, solved per parity block.
ParityEigen hermite_eigen(const band::BandMatrix& a, bool want_vectors) {
  const int n = a.size();
  ParityEigen out;
  for (int parity = 0; parity < 2; ++parity) {
    const std::vector<int> idx = parity_indices(n, parity);
    const band::DenseEigen block = band::eigen_general(a.submatrix(idx).dense(), want_vectors);
    for (int i = 0; i < block.values.size(); ++i) {
      out.values.push_back(block.values[i]);
      if (want_vectors) {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(n);
        for (std::size_t r = 0; r < idx.size(); ++r) v[idx[r]] = block.vectors(static_cast<int>(r), i);
        out.vectors.push_back(std::move(v));
      }
    }
  }
  return out;
}

std::vector<int> modulus_order(const std::vector<cplx>& values) {
  std::vector<int> order(values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(), [&values](int a, int b) {
    const double ma = std::abs(values[a]);
    const double mb = std::abs(values[b]);
    if (ma != mb) return ma < mb;
    return std::arg(values[a]) < std::arg(values[b]);
  });
  return order;
}

// Rayleigh quotient iteration for the complex symmetric band matrix, seeded
// near an eigenvalue.
std::pair<cplx, Eigen::VectorXcd> refine_eigenpair(const band::BandMatrix& a, cplx seed, double norm_scale) {
  const int n = a.size();
  // ramp plus constant: both parities are represented
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i) {
    const double t = (2.0 * i - (n - 1)) / std::max(1, n - 1);
    v[i] = 1.0 + t + 0.5 * std::sin(1.0 + i);
  }
  v.normalize();
  cplx sigma = seed;
  const band::ShiftedLU seed_lu(a, sigma);
  for (int it = 0; it < 4; ++it) {
    seed_lu.solve(v);
    v.normalize();
  }
  for (int it = 0; it < 30; ++it) {
    const Eigen::VectorXcd av = a.multiply(v);
    sigma = (v.transpose() * av)(0) / (v.transpose() * v)(0);
    const double residual = (av - sigma * v).norm();
    if (residual <= 1e-12 * norm_scale) return {sigma, v};
    band::ShiftedLU lu(a, sigma);
    if (lu.singular()) return {sigma, v};
    lu.solve(v);
    v.normalize();
  }
  std::ostringstream os;
  os << "Rayleigh iteration near " << seed << " did not converge";
  throw Error(ErrorKind::not_converged, os.str());
}

std::vector<EigenRecord> fd_eigenpairs(const OperatorMatrix& matrix, int n_max) {
  const DiscretizationConfig& cfg = matrix.config;
  // seeds from a coarse grid on the same interval
  DiscretizationConfig coarse_cfg = cfg;
  coarse_cfg.fd_points = std::min(cfg.fd_points, std::max(401, 12 * n_max + 1));
  const OperatorMatrix coarse = build_matrix(matrix.spec, coarse_cfg);
  const band::DenseEigen seeds = band::eigen_general(coarse.entries.dense(), false);
  std::vector<cplx> seed_values(seeds.values.data(), seeds.values.data() + seeds.values.size());
  const std::vector<int> order = modulus_order(seed_values);

  const double h = matrix.grid_spacing();
  const double norm_scale = 4.0 / (h * h) + cfg.fd_half_width;
  std::vector<EigenRecord> records(n_max);
  for (int i = 0; i < n_max; ++i) {
    auto [lambda, v] = refine_eigenpair(matrix.entries, seed_values[order[i]], norm_scale);
    records[i].lambda = lambda;
    records[i].representation = GridFunction{std::move(v), cfg.fd_half_width};
  }
  sort_by_modulus(records);
  for (int i = 1; i < n_max; ++i) {
    if (std::abs(records[i].lambda - records[i - 1].lambda) <= 1e-9 * std::abs(records[i].lambda)) {
      std::ostringstream os;
      os << "two seeds converged to the same eigenvalue at n = " << records[i].n;
      throw Error(ErrorKind::not_converged, os.str());
    }
  }
  return records;
}

// kappa = sum |c|^2 / |sum c^2| for a coefficient vector.
struct RawKappa {
  double kappa = 1.0;
  bool underflow = false;
};

RawKappa kappa_from_vector(const Eigen::VectorXcd& c) {
  const double norm2 = c.squaredNorm();
  const double bilinear = std::abs((c.transpose() * c)(0));
  if (bilinear < kUnderflowTol * norm2) return {INFINITY, true};
  return {norm2 / bilinear, false};
}

const Eigen::VectorXcd& vector_of(const EigenRecord& r) {
  if (const auto* h = std::get_if<HermiteCoeffs>(&r.representation)) return h->coeffs;
  return std::get<GridFunction>(r.representation).values;
}

void finalize(InstabilityRecord& rec) {
  if (rec.kappa < 1.0) {
    rec.kappa = 1.0;
    rec.clipped = true;
  }
  rec.log_kappa = std::log(rec.kappa);
}

struct Peak {
  double x = 0.0;
  double log_value = -INFINITY;
};

// Maximum of log_magnitude on [0, x_end]: sampled, then refined by
// golden-section search around the best sample.
template <typename Fn>
Peak find_peak(Fn&& log_magnitude, double x_end) {
  constexpr int kSamples = 400;
  Peak best;
  int best_i = 0;
  for (int i = 0; i <= kSamples; ++i) {
    const double v = log_magnitude(x_end * i / kSamples);
    if (v > best.log_value) {
      best = {x_end * i / kSamples, v};
      best_i = i;
    }
  }
  double lo = x_end * std::max(0, best_i - 1) / kSamples;
  double hi = x_end * std::min(kSamples, best_i + 1) / kSamples;
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 60; ++it) {
    const double a = hi - ratio * (hi - lo);
    const double b = lo + ratio * (hi - lo);
    if (log_magnitude(a) > log_magnitude(b)) {
      hi = b;
    } else {
      lo = a;
    }
  }
  const double x = 0.5 * (lo + hi);
  const double v = log_magnitude(x);
  if (v > best.log_value) best = {x, v};
  return best;
}

// 2 * int_0^inf |g(x)|^2 dx from log|g|, as (log value, relative error).
// Integration runs outward from the peak of |g| in panels that start at the
// peak width and double, so narrow peaks far from the origin are not missed.
template <typename Fn>
std::pair<double, double> log_square_integral(Fn&& log_abs, double x_end, double tol = kQuadTol) {
  const Peak peak = find_peak(log_abs, x_end);
  const double scale = 2.0 * peak.log_value;
  auto f = [&](double x) { return std::exp(2.0 * log_abs(x) - scale); };

  // width from the curvature of 2 log|g| at the peak
  const double h = x_end / 4000.0;
  const double x0 = std::max(peak.x, h);
  const double curvature = -2.0 * (log_abs(x0 + h) - 2.0 * log_abs(x0) + log_abs(x0 - h)) / (h * h);
  const double width = std::max(1e-6, 1.0 / std::sqrt(std::max(curvature, 1.0 / (x_end * x_end))));

  const quad::QuadResult right =
      quad::integrate_ray([&](double x) { return cplx(f(x), 0.0); }, tol, 1e-16, peak.x, width);
  double total = right.value.real();
  double err = right.err_estimate;
  double hi = peak.x;
  double step = width;
  while (hi > 0.0) {
    const double lo = std::max(0.0, hi - step);
    quad::QuadOptions opts;
    opts.rel_tol = tol;
    opts.abs_tol = tol * total;
    const quad::QuadResult part =
        quad::integrate_interval([&](double x) { return cplx(f(x), 0.0); }, lo, hi, opts);
    total += part.value.real();
    err += part.err_estimate;
    if (part.value.real() <= 1e-16 * total) break;
    hi = lo;
    if (step > width || lo < peak.x - width) step *= 2.0;
  }
  return {std::log(2.0 * total) + scale, err / total};
}

struct SelfadjointSolution {
  Eigen::VectorXd energies;
  std::vector<Eigen::VectorXd> vectors;  // full length, sorted by energy
};

SelfadjointSolution selfadjoint_hermite(int k, int n, double scale, int n_max) {
  const HermiteParts parts = hermite_parts(k, n, scale);
  const Eigen::MatrixXd a = parts.kinetic + parts.potential;
  std::vector<std::pair<double, Eigen::VectorXd>> pairs;
  for (int parity = 0; parity < 2; ++parity) {
    const std::vector<int> idx = parity_indices(n, parity);
    Eigen::MatrixXd block(idx.size(), idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r)
      for (std::size_t c = 0; c < idx.size(); ++c) block(r, c) = a(idx[r], idx[c]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(block);
    for (int i = 0; i < solver.eigenvalues().size(); ++i) {
      Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
      for (std::size_t r = 0; r < idx.size(); ++r) v[idx[r]] = solver.eigenvectors()(static_cast<int>(r), i);
      pairs.emplace_back(solver.eigenvalues()[i], std::move(v));
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  SelfadjointSolution out;
  out.energies.resize(n_max);
  for (int i = 0; i < n_max; ++i) {
    out.energies[i] = pairs[i].first;
    out.vectors.push_back(std::move(pairs[i].second));
  }
  return out;
}

}  // namespace

double wkb_energy(int k, int n) {
  // int_{-x_t}^{x_t} sqrt(E - x^{2k}) dx = pi (n - 1/2)
  const double a = 1.0 / (2.0 * k);
  const double beta = std::sqrt(kPi) * asym::gamma(1.0 + a) / (2.0 * asym::gamma(1.5 + a));
  const double exponent = 2.0 * k / (k + 1.0);
  return std::pow(kPi * (n - 0.5) / (2.0 * beta), exponent);
}

double default_hermite_scale(int k, int n_max) {
  if (k == 1) return 1.0;
  return std::pow(wkb_energy(k, std::max(1, n_max)), (k - 1.0) / (4.0 * k));
}

DiscretizationConfig resolve_config(const OperatorSpec& spec, DiscretizationConfig config, int n_max) {
  if (spec.is_airy()) {
    if (config.fd_points < 16 || config.fd_half_width <= 0.0) {
      throw Error(ErrorKind::config_error, "finite-difference grid needs fd_points >= 16 and L > 0");
    }
    return config;
  }
  if (config.basis_size <= 0) config.basis_size = std::max(128, 8 * n_max);
  config.basis_size += config.basis_size % 2;
  if (config.hermite_scale <= 0.0) config.hermite_scale = default_hermite_scale(*spec.k, n_max);
  if (config.basis_size < 4 * n_max) {
    std::ostringstream os;
    os << "basis size " << config.basis_size << " below 4 * n_max = " << 4 * n_max;
    throw Error(ErrorKind::config_error, os.str());
  }
  return config;
}

OperatorMatrix build_matrix(const OperatorSpec& spec, const DiscretizationConfig& config) {
  OperatorMatrix out;
  out.spec = spec;
  out.config = config;
  const cplx phase = std::polar(1.0, spec.theta);
  if (spec.is_airy()) {
    out.finite_difference = true;
    const int m = config.fd_points;
    if (m < 3 || config.fd_half_width <= 0.0) throw Error(ErrorKind::config_error, "bad finite-difference grid");
    const double h = out.grid_spacing();
    out.entries = band::BandMatrix(m, 1, 1);
    for (int j = 0; j < m; ++j) {
      const double x = -config.fd_half_width + (j + 1) * h;
      out.entries(j, j) = 2.0 / (h * h) + phase * std::abs(x);
      if (j + 1 < m) out.entries(j, j + 1) = out.entries(j + 1, j) = -1.0 / (h * h);
    }
    return out;
  }
  const int k = *spec.k;
  const int n = config.basis_size;
  if (n < 4 || config.hermite_scale <= 0.0) {
    throw Error(ErrorKind::config_error, "Hermite basis needs basis_size >= 4 and a positive scale");
  }
  const HermiteParts parts = hermite_parts(k, n, config.hermite_scale);
  out.entries = band::BandMatrix(n, 2 * k, 2 * k);
  for (int j = 0; j < n; ++j) {
    for (int i = std::max(0, j - 2 * k); i <= std::min(n - 1, j + 2 * k); ++i) {
      out.entries(i, j) = parts.kinetic(i, j) + phase * parts.potential(i, j);
    }
  }
  return out;
}

std::vector<EigenRecord> eigenpairs(const OperatorMatrix& matrix, int n_max, bool certify) {
  if (n_max < 1) throw Error(ErrorKind::config_error, "n_max must be >= 1");
  if (4 * n_max > matrix.size()) {
    std::ostringstream os;
    os << "n_max = " << n_max << " exceeds a quarter of the matrix size " << matrix.size();
    throw Error(ErrorKind::config_error, os.str());
  }
  if (matrix.finite_difference) return fd_eigenpairs(matrix, n_max);

  const ParityEigen eig = hermite_eigen(matrix.entries, true);
  const std::vector<int> order = modulus_order(eig.values);
  std::vector<EigenRecord> records(n_max);
  for (int i = 0; i < n_max; ++i) {
    records[i].lambda = eig.values[order[i]];
    records[i].representation = HermiteCoeffs{eig.vectors[order[i]], matrix.config.hermite_scale};
  }
  sort_by_modulus(records);
  if (!certify) return records;

  DiscretizationConfig fine = matrix.config;
  fine.basis_size *= 2;
  const ParityEigen check = hermite_eigen(build_matrix(matrix.spec, fine).entries, false);
  const std::vector<int> check_order = modulus_order(check.values);
  for (int i = 0; i < n_max; ++i) {
    const cplx fine_value = check.values[check_order[i]];
    if (std::abs(records[i].lambda - fine_value) > kCertifyTol * std::abs(fine_value)) {
      std::ostringstream os;
      os << "eigenvalue n = " << i + 1 << " moved from " << records[i].lambda << " to " << fine_value
         << " when the basis was doubled";
      throw Error(ErrorKind::not_converged, os.str());
    }
  }
  return records;
}

std::vector<InstabilityRecord> kappa_galerkin_range(const OperatorSpec& spec, DiscretizationConfig config, int n_lo,
                                                    int n_hi) {
  if (n_lo < 1 || n_hi < n_lo) throw Error(ErrorKind::config_error, "invalid index range");
  config = resolve_config(spec, config, n_hi);
  DiscretizationConfig fine = config;
  if (spec.is_airy()) {
    fine.fd_points = 2 * config.fd_points + 1;  // halves h, nested grids
  } else {
    fine.basis_size *= 2;
  }
  const std::vector<EigenRecord> coarse = eigenpairs(build_matrix(spec, config), n_hi, false);
  const std::vector<EigenRecord> refined = eigenpairs(build_matrix(spec, fine), n_hi, false);

  std::vector<InstabilityRecord> out;
  for (int n = n_lo; n <= n_hi; ++n) {
    InstabilityRecord rec;
    rec.n = n;
    rec.method = Method::galerkin;
    const RawKappa a = kappa_from_vector(vector_of(coarse[n - 1]));
    const RawKappa b = kappa_from_vector(vector_of(refined[n - 1]));
    if (a.underflow || b.underflow) {
      rec.denominator_underflow = true;
      rec.kappa = NAN;
      rec.log_kappa = NAN;
      rec.lambda = coarse[n - 1].lambda;
      out.push_back(rec);
      continue;
    }
    if (spec.is_airy()) {
      // second-order scheme: Richardson extrapolation in h
      rec.kappa = (4.0 * b.kappa - a.kappa) / 3.0;
      rec.err_estimate = std::abs(b.kappa - a.kappa) / 3.0;
      rec.lambda = (4.0 * refined[n - 1].lambda - coarse[n - 1].lambda) / 3.0;
    } else {
      rec.kappa = a.kappa;
      rec.err_estimate = std::abs(b.kappa - a.kappa);
      rec.lambda = coarse[n - 1].lambda;
    }
    finalize(rec);
    out.push_back(rec);
  }
  return out;
}

InstabilityRecord kappa_galerkin(const OperatorSpec& spec, const DiscretizationConfig& config, int n) {
  InstabilityRecord rec = kappa_galerkin_range(spec, config, n, n).front();
  if (rec.denominator_underflow) {
    std::ostringstream os;
    os << "|sum c^2| below " << kUnderflowTol << " * sum |c|^2 at n = " << n << "; use an exact route";
    throw Error(ErrorKind::denominator_underflow, os.str());
  }
  return rec;
}

cplx airy_eigenvalue(double theta, double mu) { return std::abs(mu) * std::polar(1.0, 2.0 * theta / 3.0); }

std::pair<int, Boundary> halfline_index(int n) {
  if (n % 2 == 1) return {(n + 1) / 2, Boundary::neumann};
  return {n / 2, Boundary::dirichlet};
}

std::vector<EigenRecord> airy_eigenpairs(double theta, int n_max) {
  std::vector<EigenRecord> out;
  for (int n = 1; n <= n_max; ++n) {
    const auto [j, bc] = halfline_index(n);
    const airy::AiryPoint p = airy::airy_point(j, bc);
    out.push_back({n, airy_eigenvalue(theta, p.mu), AiryParam{p.mu, bc}});
  }
  return out;
}

InstabilityRecord kappa_airy(double theta, int n_halfline, Boundary bc) {
  if (!(std::abs(theta) < 0.75 * kPi)) throw Error(ErrorKind::sector_violation, "kappa_airy needs |theta| < 3 pi / 4");
  const airy::AiryPoint point = airy::airy_point(n_halfline, bc);
  const double mu = point.mu;
  InstabilityRecord rec;
  rec.n = n_halfline;
  rec.method = Method::airy;
  rec.lambda = airy_eigenvalue(theta, mu);
  if (theta == 0.0) {
    finalize(rec);
    return rec;
  }
  const cplx direction = std::polar(1.0, theta / 3.0);
  auto log_abs = [&](double x) { return airy::ai(mu + direction * x).log_abs(); };
  const double length = std::abs(mu);
  // half-line integral: log_square_integral doubles, undo that
  // Ai carries a phase of size |mu|^{3/2}, so its relative accuracy is
  // about eps |mu|^{3/2}; ask the quadrature for no more than that
  const double tol = std::max(kQuadTol, 10.0 * std::numeric_limits<double>::epsilon() * std::pow(length, 1.5));
  const auto [log_num2, rel_err] = log_square_integral(log_abs, 4.0 * length + 40.0, tol);
  const double log_num = log_num2 - std::log(2.0);
  // int_mu^inf Ai^2 = Ai'(mu)^2 - mu Ai(mu)^2 (primitive x Ai^2 - Ai'^2)
  const airy::AiryValue at_mu = airy::ai(cplx(mu, 0.0));
  const double a = at_mu.value().real();
  const double ap = at_mu.derivative().real();
  const double denominator = ap * ap - mu * a * a;
  rec.log_kappa = log_num - std::log(denominator);
  rec.kappa = std::exp(rec.log_kappa);
  rec.err_estimate = rec.kappa * (rel_err + 1e-14);
  if (rec.kappa < 1.0) {
    rec.kappa = 1.0;
    rec.log_kappa = 0.0;
    rec.clipped = true;
  }
  return rec;
}

InstabilityRecord kappa_airy_fullline(double theta, int n) {
  const auto [j, bc] = halfline_index(n);
  InstabilityRecord rec = kappa_airy(theta, j, bc);
  rec.n = n;
  return rec;
}

InstabilityRecord kappa_harmonic_exact(double theta, int n) {
  if (!(std::abs(theta) < kPi)) throw Error(ErrorKind::sector_violation, "harmonic_exact needs |theta| < pi");
  if (n < 1) throw Error(ErrorKind::config_error, "index must be >= 1");
  InstabilityRecord rec;
  rec.n = n;
  rec.method = Method::harmonic_exact;
  rec.lambda = (2.0 * n - 1.0) * std::polar(1.0, theta / 2.0);
  if (theta == 0.0) {
    finalize(rec);
    return rec;
  }
  const cplx direction = std::polar(1.0, theta / 4.0);
  auto log_abs = [&](double x) { return hermite::function(n - 1, direction * x).log_abs(); };
  const double turning = std::sqrt(2.0 * n - 1.0);
  const auto [log_value, rel_err] = log_square_integral(log_abs, 2.0 * turning + 12.0);
  rec.log_kappa = log_value;
  rec.kappa = std::exp(log_value);
  rec.err_estimate = rec.kappa * rel_err;
  if (rec.kappa < 1.0) {
    rec.kappa = 1.0;
    rec.log_kappa = 0.0;
    rec.clipped = true;
  }
  return rec;
}

std::vector<InstabilityRecord> kappa_ray_range(int k, double theta, int n_lo, int n_hi, DiscretizationConfig config) {
  if (k < 1) throw Error(ErrorKind::config_error, "ray method needs k >= 1");
  const OperatorSpec spec = validate_spec(2.0 * k, theta);
  if (n_lo < 1 || n_hi < n_lo) throw Error(ErrorKind::config_error, "invalid index range");
  config = resolve_config(spec, config, n_hi);
  const double scale = config.hermite_scale;
  const SelfadjointSolution coarse = selfadjoint_hermite(k, config.basis_size, scale, n_hi);
  const SelfadjointSolution fine = selfadjoint_hermite(k, 2 * config.basis_size, scale, n_hi);
  const double alpha = theta / (2.0 * (k + 1));
  const cplx direction = std::polar(1.0, alpha);
  const cplx rotation = std::polar(1.0, theta / (k + 1.0));

  std::vector<InstabilityRecord> out(n_hi - n_lo + 1);
  parallel_for(static_cast<long>(out.size()), [&](long i) {
    const int n = n_lo + static_cast<int>(i);
    InstabilityRecord& rec = out[i];
    rec.n = n;
    rec.method = Method::ray;
    const double energy = coarse.energies[n - 1];
    rec.lambda = rotation * energy;
    if (theta == 0.0) {
      finalize(rec);
      return;
    }
    const double turning = std::pow(energy, 1.0 / (2.0 * k));
    auto integrate = [&](const Eigen::VectorXd& full) {
      // coefficients at the rounding floor only add noise, and h_j grows fast
      // off the real axis
      const double floor = kCoefficientFloor * full.cwiseAbs().maxCoeff();
      int last = static_cast<int>(full.size()) - 1;
      while (last > 0 && std::abs(full[last]) < floor) --last;
      const Eigen::VectorXd c = full.head(last + 1);
      auto log_abs = [&](double x) { return hermite::expansion(c, scale, direction * x).log_abs(); };
      return log_square_integral(log_abs, 2.0 * turning + 8.0);
    };
    const auto [log_a, err_a] = integrate(coarse.vectors[n - 1]);
    const auto [log_b, err_b] = integrate(fine.vectors[n - 1]);
    const double rel_change = std::abs(std::expm1(log_b - log_a));
    if (rel_change > kCertifyTol) {
      std::ostringstream os;
      os << "kappa_" << n << " changed by " << rel_change << " (relative) when the basis was doubled from "
         << config.basis_size << "; raise the basis size or lower n";
      throw Error(ErrorKind::ray_divergence, os.str());
    }
    rec.log_kappa = log_a;
    rec.kappa = std::exp(log_a);
    rec.err_estimate = rec.kappa * (rel_change + err_a);
    if (rec.kappa < 1.0) {
      rec.kappa = 1.0;
      rec.log_kappa = 0.0;
      rec.clipped = true;
    }
  });
  return out;
}

InstabilityRecord kappa_ray(int k, double theta, int n, const DiscretizationConfig& config) {
  return kappa_ray_range(k, theta, n, n, config).front();
}

std::vector<InstabilityRecord> kappa_auto(const OperatorSpec& spec, const std::vector<int>& indices,
                                          const DiscretizationConfig& config) {
  std::vector<InstabilityRecord> out(indices.size());
  if (indices.empty()) return out;
  if (spec.is_airy()) {
    parallel_for(static_cast<long>(indices.size()),
                 [&](long i) { out[i] = kappa_airy_fullline(spec.theta, indices[i]); });
  } else if (*spec.k == 1) {
    parallel_for(static_cast<long>(indices.size()),
                 [&](long i) { out[i] = kappa_harmonic_exact(spec.theta, indices[i]); });
  } else {
    const auto [lo, hi] = std::minmax_element(indices.begin(), indices.end());
    const std::vector<InstabilityRecord> all = kappa_ray_range(*spec.k, spec.theta, *lo, *hi, config);
    for (std::size_t i = 0; i < indices.size(); ++i) out[i] = all[indices[i] - *lo];
  }
  return out;
}

std::vector<EigenRecord> spectrum(const OperatorSpec& spec, int n_max, const DiscretizationConfig& config) {
  if (spec.is_airy()) return airy_eigenpairs(spec.theta, n_max);
  if (*spec.k == 1) {
    std::vector<EigenRecord> out;
    for (int n = 1; n <= n_max; ++n) {
      out.push_back({n, (2.0 * n - 1.0) * std::polar(1.0, spec.theta / 2.0), ClosedFormHarmonic{n}});
    }
    return out;
  }
  return eigenpairs(build_matrix(spec, resolve_config(spec, config, n_max)), n_max, true);
}

}  // namespace anharm::spectra
