// SPDX-License-Identifier: Apache-2.0

#include "ysl/tensor.hpp"

namespace ysl {

bool is_antisymmetric(const MatD& x, double tol) {
  double scale = std::max(1.0, norm(x));
  for (int i = 0; i < x.dim; ++i)
    for (int j = 0; j <= i; ++j)
      if (std::abs(x(i, j) + x(j, i)) > tol * scale) return false;
  return true;
}

MatD antisym2(double w) {
  MatD m(2);
  m(0, 1) = w;
  m(1, 0) = -w;
  return m;
}

MatD antisym3(double w12, double w13, double w23) {
  MatD m(3);
  m(0, 1) = w12;
  m(1, 0) = -w12;
  m(0, 2) = w13;
  m(2, 0) = -w13;
  m(1, 2) = w23;
  m(2, 1) = -w23;
  return m;
}

}  // namespace ysl
