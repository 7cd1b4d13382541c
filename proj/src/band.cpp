#include "anharm/band.hpp"

#include <algorithm>

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "anharm/error.hpp"

namespace anharm::band {

BandMatrix::BandMatrix(int n, int lower, int upper)
    : n_(n), lower_(lower), upper_(upper), ab_(Eigen::MatrixXcd::Zero(lower + upper + 1, n)) {}

Eigen::VectorXcd BandMatrix::multiply(const Eigen::VectorXcd& v) const {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n_);
  for (int j = 0; j < n_; ++j) {
    const int lo = std::max(0, j - upper_);
    const int hi = std::min(n_ - 1, j + lower_);
    for (int i = lo; i <= hi; ++i) out[i] += ab_(upper_ + i - j, j) * v[j];
  }
  return out;
}

Eigen::MatrixXcd BandMatrix::dense() const {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n_, n_);
  for (int j = 0; j < n_; ++j) {
    const int lo = std::max(0, j - upper_);
    const int hi = std::min(n_ - 1, j + lower_);
    for (int i = lo; i <= hi; ++i) out(i, j) = ab_(upper_ + i - j, j);
  }
  return out;
}

BandMatrix BandMatrix::submatrix(const std::vector<int>& indices) const {
  const int m = static_cast<int>(indices.size());
  // index sets used here are arithmetic progressions, so the band narrows
  const int stride = m > 1 ? indices[1] - indices[0] : 1;
  const int lo = (lower_ + stride - 1) / stride;
  const int up = (upper_ + stride - 1) / stride;
  BandMatrix out(m, lo, up);
  for (int a = 0; a < m; ++a) {
    for (int b = std::max(0, a - lo); b <= std::min(m - 1, a + up); ++b) {
      out(a, b) = (*this)(indices[a], indices[b]);
    }
  }
  return out;
}

ShiftedLU::ShiftedLU(const BandMatrix& a, cplx shift)
    : n_(a.size()), kl_(a.lower()), ku_(a.upper()),
      ab_(Eigen::MatrixXcd::Zero(2 * a.lower() + a.upper() + 1, a.size())), pivots_(a.size()) {
  for (int j = 0; j < n_; ++j) {
    const int lo = std::max(0, j - ku_);
    const int hi = std::min(n_ - 1, j + kl_);
    for (int i = lo; i <= hi; ++i) {
      ab_(kl_ + ku_ + i - j, j) = a(i, j) - (i == j ? shift : cplx(0.0));
    }
  }
  const lapack_int info = LAPACKE_zgbtrf(LAPACK_COL_MAJOR, n_, n_, kl_, ku_, ab_.data(),
                                          static_cast<lapack_int>(ab_.rows()), pivots_.data());
  if (info < 0) throw Error(ErrorKind::config_error, "zgbtrf rejected its arguments");
  singular_ = info > 0;
}

void ShiftedLU::solve(Eigen::VectorXcd& b, bool adjoint) const {
  const lapack_int info = LAPACKE_zgbtrs(LAPACK_COL_MAJOR, adjoint ? 'C' : 'N', n_, kl_, ku_, 1,
                                          const_cast<cplx*>(ab_.data()), static_cast<lapack_int>(ab_.rows()),
                                          pivots_.data(), b.data(), n_);
  if (info != 0) throw Error(ErrorKind::config_error, "zgbtrs failed");
}

DenseEigen eigen_general(const Eigen::MatrixXcd& a, bool want_vectors) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  Eigen::MatrixXcd work = a;
  DenseEigen out;
  out.values.resize(n);
  if (want_vectors) out.vectors.resize(n, n);
  cplx dummy;
  const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', want_vectors ? 'V' : 'N', n, work.data(), n,
                                         out.values.data(), &dummy, 1,
                                         want_vectors ? out.vectors.data() : &dummy, want_vectors ? n : 1);
  if (info != 0) throw Error(ErrorKind::not_converged, "zgeev failed to converge");
  return out;
}

}  // namespace anharm::band
