#pragma once

// Square complex band matrices in LAPACK band storage, with LU solves and
// dense eigenvalue helpers backed by LAPACK.

#include <vector>

#include <Eigen/Dense>

#include "anharm/model.hpp"

namespace anharm::band {

class BandMatrix {
 public:
  BandMatrix() = default;
  BandMatrix(int n, int lower, int upper);

  int size() const { return n_; }
  int lower() const { return lower_; }
  int upper() const { return upper_; }

  bool in_band(int i, int j) const { return j - i <= upper_ && i - j <= lower_; }
  cplx& operator()(int i, int j) { return ab_(upper_ + i - j, j); }
  cplx operator()(int i, int j) const { return in_band(i, j) ? ab_(upper_ + i - j, j) : cplx(0.0); }

  Eigen::VectorXcd multiply(const Eigen::VectorXcd& v) const;
  Eigen::MatrixXcd dense() const;
  /// Rows/columns with the given indices, as a band matrix of the same width.
  BandMatrix submatrix(const std::vector<int>& indices) const;

 private:
  int n_ = 0;
  int lower_ = 0;
  int upper_ = 0;
  Eigen::MatrixXcd ab_;  // (lower + upper + 1) x n
};

// LU factorization of (A - shift I) with partial pivoting.
class ShiftedLU {
 public:
  ShiftedLU(const BandMatrix& a, cplx shift);

  bool singular() const { return singular_; }
  /// Solves (A - shift) x = b, or its conjugate transpose, in place.
  void solve(Eigen::VectorXcd& b, bool adjoint = false) const;

 private:
  int n_, kl_, ku_;
  Eigen::MatrixXcd ab_;  // (2 kl + ku + 1) x n
  std::vector<int> pivots_;
  bool singular_ = false;
};

struct DenseEigen {
  Eigen::VectorXcd values;
  Eigen::MatrixXcd vectors;  // columns, unit 2-norm; empty when not requested
};

/// General complex eigendecomposition (LAPACK zgeev).
DenseEigen eigen_general(const Eigen::MatrixXcd& a, bool want_vectors);

}  // namespace anharm::band
