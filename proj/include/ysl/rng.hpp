// SPDX-License-Identifier: Apache-2.0

#ifndef YSL_RNG_HPP
#define YSL_RNG_HPP

#include <cstdint>
#include <random>

#include "ysl/tensor.hpp"

namespace ysl {

/// Seeded generator with a fixed uniform mapping. std::mt19937_64 is
/// specified bit-exactly by the standard; the distributions are not, so
/// the mapping to doubles is done here to keep outputs reproducible
/// across toolchains.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  /// Uniform in [0, 1) with 53-bit resolution.
  double canonical() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * canonical(); }

  uint64_t integer() { return gen_(); }

  /// Matrix with i.i.d. uniform entries.
  MatD matrix(int dim, double lo = -2.0, double hi = 2.0) {
    MatD m(dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) m(i, j) = uniform(lo, hi);
    return m;
  }

  MatD antisymmetric(int dim, double lo = -2.0, double hi = 2.0) {
    if (dim == 2) return antisym2(uniform(lo, hi));
    return antisym3(uniform(lo, hi), uniform(lo, hi), uniform(lo, hi));
  }

  MatD symmetric(int dim, double lo = -2.0, double hi = 2.0) {
    MatD m(dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j <= i; ++j) m(i, j) = m(j, i) = uniform(lo, hi);
    return m;
  }

  /// Unit-norm matrix with random direction.
  MatD unit_matrix(int dim) {
    for (;;) {
      MatD m = matrix(dim, -1.0, 1.0);
      double n = norm(m);
      if (n > 1e-8) return m * (1.0 / n);
    }
  }

  MatD unit_symmetric(int dim) {
    for (;;) {
      MatD m = symmetric(dim, -1.0, 1.0);
      double n = norm(m);
      if (n > 1e-8) return m * (1.0 / n);
    }
  }

  MatD unit_antisymmetric(int dim) {
    for (;;) {
      MatD m = antisymmetric(dim, -1.0, 1.0);
      double n = norm(m);
      if (n > 1e-8) return m * (1.0 / n);
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace ysl

#endif
