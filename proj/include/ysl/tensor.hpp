// SPDX-License-Identifier: Apache-2.0

#ifndef YSL_TENSOR_HPP
#define YSL_TENSOR_HPP

#include <array>
#include <cmath>
#include <utility>

#include "ysl/errors.hpp"

namespace ysl {

/// Small dense d x d real matrix, d in {2,3}, with the symmetric /
/// antisymmetric split used by every constitutive formula. Row-major
/// storage, value semantics.
struct MatD {
  int dim = 3;
  std::array<double, 9> e{};  // first dim*dim entries are used

  MatD() = default;
  explicit MatD(int d) : dim(d) {
    check_dim(d);
    e.fill(0.0);
  }

  static void check_dim(int d) {
    if (d != 2 && d != 3) throw DimensionMismatch("matrix dimension must be 2 or 3");
  }

  static MatD zero(int d) { return MatD(d); }

  static MatD identity(int d) {
    MatD m(d);
    for (int i = 0; i < d; ++i) m(i, i) = 1.0;
    return m;
  }

  double& operator()(int i, int j) { return e[static_cast<size_t>(i * dim + j)]; }
  double operator()(int i, int j) const { return e[static_cast<size_t>(i * dim + j)]; }

  int size() const { return dim * dim; }

  MatD& operator+=(const MatD& o) {
    require_same_dim(o);
    for (int k = 0; k < size(); ++k) e[static_cast<size_t>(k)] += o.e[static_cast<size_t>(k)];
    return *this;
  }
  MatD& operator-=(const MatD& o) {
    require_same_dim(o);
    for (int k = 0; k < size(); ++k) e[static_cast<size_t>(k)] -= o.e[static_cast<size_t>(k)];
    return *this;
  }
  MatD& operator*=(double s) {
    for (int k = 0; k < size(); ++k) e[static_cast<size_t>(k)] *= s;
    return *this;
  }

  void require_same_dim(const MatD& o) const {
    if (dim != o.dim) throw DimensionMismatch("matrix dimension mismatch");
  }
};

inline MatD operator+(MatD a, const MatD& b) { return a += b; }
inline MatD operator-(MatD a, const MatD& b) { return a -= b; }
inline MatD operator*(double s, MatD a) { return a *= s; }
inline MatD operator*(MatD a, double s) { return a *= s; }
inline MatD operator-(MatD a) { return a *= -1.0; }

inline MatD transpose(const MatD& x) {
  MatD t(x.dim);
  for (int i = 0; i < x.dim; ++i)
    for (int j = 0; j < x.dim; ++j) t(i, j) = x(j, i);
  return t;
}

/// Frobenius inner product X : Y = sum_ij X_ij Y_ij.
inline double inner(const MatD& x, const MatD& y) {
  x.require_same_dim(y);
  double s = 0.0;
  for (int k = 0; k < x.size(); ++k)
    s += x.e[static_cast<size_t>(k)] * y.e[static_cast<size_t>(k)];
  return s;
}

inline double norm_sq(const MatD& x) { return inner(x, x); }
inline double norm(const MatD& x) { return std::sqrt(norm_sq(x)); }

/// Symmetric part (X + X^T)/2.
inline MatD sym(const MatD& x) {
  MatD s(x.dim);
  for (int i = 0; i < x.dim; ++i)
    for (int j = 0; j < x.dim; ++j) s(i, j) = 0.5 * (x(i, j) + x(j, i));
  return s;
}

/// Antisymmetric part (X - X^T)/2.
inline MatD skew(const MatD& x) {
  MatD a(x.dim);
  for (int i = 0; i < x.dim; ++i)
    for (int j = 0; j < x.dim; ++j) a(i, j) = 0.5 * (x(i, j) - x(j, i));
  return a;
}

/// Orthogonal split X = X_s + X_a.
inline std::pair<MatD, MatD> decompose(const MatD& x) { return {sym(x), skew(x)}; }

bool is_antisymmetric(const MatD& x, double tol = 1e-12);

/// 2d antisymmetric matrix [[0, w], [-w, 0]].
MatD antisym2(double w);

/// 3d antisymmetric matrix with independent entries (w12, w13, w23)
/// above the diagonal.
MatD antisym3(double w12, double w13, double w23);

}  // namespace ysl

#endif
