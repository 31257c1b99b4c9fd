// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <vector>

namespace satrrm {

using Complex = std::complex<double>;

/// Minimal dense complex matrix, row-major. Sized for the handful-of-beams
/// systems this project works with; no blocking, no expression templates.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(int rows, int cols)
      : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols) {}

  static CMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Complex& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
  const Complex& operator()(int i, int j) const {
    return a_[static_cast<std::size_t>(i) * cols_ + j];
  }

  CMatrix adjoint() const;
  CMatrix operator*(const CMatrix& rhs) const;

  /// this + s*I (square only).
  CMatrix plus_scaled_identity(double s) const;

  double frobenius_norm() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Complex> a_;
};

/// Solves A X = B by Gaussian elimination with partial pivoting; A square.
/// Throws ValidationError("matrix", ...) when a pivot underflows (singular A).
CMatrix solve(CMatrix a, CMatrix b);

CMatrix inverse(const CMatrix& a);

}  // namespace satrrm
