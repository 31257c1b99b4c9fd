// SPDX-License-Identifier: Apache-2.0
#include "satrrm/linalg.hpp"

#include <cmath>
#include <utility>

#include "satrrm/errors.hpp"

namespace satrrm {

CMatrix CMatrix::identity(int n) {
  CMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::adjoint() const {
  CMatrix m(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
  return m;
}

CMatrix CMatrix::operator*(const CMatrix& rhs) const {
  if (cols_ != rhs.rows_)
    throw ValidationError("matrix", "shape mismatch in product");
  CMatrix m(rows_, rhs.cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int k = 0; k < cols_; ++k) {
      Complex aik = (*this)(i, k);
      if (aik == Complex{}) continue;
      for (int j = 0; j < rhs.cols_; ++j) m(i, j) += aik * rhs(k, j);
    }
  }
  return m;
}

CMatrix CMatrix::plus_scaled_identity(double s) const {
  if (rows_ != cols_)
    throw ValidationError("matrix", "plus_scaled_identity needs a square matrix");
  CMatrix m = *this;
  for (int i = 0; i < rows_; ++i) m(i, i) += s;
  return m;
}

double CMatrix::frobenius_norm() const {
  double acc = 0.0;
  for (const Complex& v : a_) acc += std::norm(v);
  return std::sqrt(acc);
}

CMatrix solve(CMatrix a, CMatrix b) {
  if (a.rows() != a.cols())
    throw ValidationError("matrix", "solve needs a square matrix");
  if (a.rows() != b.rows())
    throw ValidationError("matrix", "shape mismatch in solve");
  const int n = a.rows();
  const int m = b.cols();

  double scale = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) scale = std::max(scale, std::abs(a(i, j)));
  const double tiny = (scale > 0.0 ? scale : 1.0) * 1e-14 * n;

  for (int col = 0; col < n; ++col) {
    int pivot = col;
    double best = std::abs(a(col, col));
    for (int r = col + 1; r < n; ++r) {
      double v = std::abs(a(r, col));
      if (v > best) {
        best = v;
        pivot = r;
      }
    }
    if (best <= tiny) throw ValidationError("matrix", "singular matrix");
    if (pivot != col) {
      for (int j = 0; j < n; ++j) std::swap(a(col, j), a(pivot, j));
      for (int j = 0; j < m; ++j) std::swap(b(col, j), b(pivot, j));
    }
    const Complex inv = 1.0 / a(col, col);
    for (int r = col + 1; r < n; ++r) {
      Complex f = a(r, col) * inv;
      if (f == Complex{}) continue;
      a(r, col) = 0.0;
      for (int j = col + 1; j < n; ++j) a(r, j) -= f * a(col, j);
      for (int j = 0; j < m; ++j) b(r, j) -= f * b(col, j);
    }
  }
  for (int col = n - 1; col >= 0; --col) {
    const Complex inv = 1.0 / a(col, col);
    for (int j = 0; j < m; ++j) {
      Complex acc = b(col, j);
      for (int k = col + 1; k < n; ++k) acc -= a(col, k) * b(k, j);
      b(col, j) = acc * inv;
    }
  }
  return b;
}

CMatrix inverse(const CMatrix& a) { return solve(a, CMatrix::identity(a.rows())); }

}  // namespace satrrm
