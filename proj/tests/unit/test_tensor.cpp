// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "ysl/rng.hpp"
#include "ysl/tensor.hpp"

using namespace ysl;

TEST_CASE("decompose: identity is purely symmetric") {
  MatD i3 = MatD::identity(3);
  auto [s, a] = decompose(i3);
  CHECK(norm(s - i3) == 0.0);
  CHECK(norm(a) == 0.0);
}

TEST_CASE("decompose: rotation generator is purely antisymmetric") {
  MatD r = antisym2(1.0);
  auto [s, a] = decompose(r);
  CHECK(norm(s) == 0.0);
  CHECK(norm(a - r) == 0.0);
}

TEST_CASE("decompose reconstructs and splits the norm") {
  Rng rng(42);
  for (int dim : {2, 3}) {
    for (int t = 0; t < 2000; ++t) {
      MatD x = rng.matrix(dim);
      auto [s, a] = decompose(x);
      CHECK(norm(s + a - x) <= 1e-14 * std::max(1.0, norm(x)));
      double lhs = norm_sq(x);
      double rhs = norm_sq(s) + norm_sq(a);
      CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, lhs));
    }
  }
}

TEST_CASE("inner products and footnote identities") {
  CHECK(inner(MatD::identity(3), MatD::identity(3)) == doctest::Approx(3.0));

  Rng rng(7);
  for (int t = 0; t < 2000; ++t) {
    MatD x = rng.matrix(3), y = rng.matrix(3);
    auto [xs, xa] = decompose(x);
    auto [ys, ya] = decompose(y);
    CHECK(std::abs(inner(xs, y) - inner(xs, ys)) <= 1e-12 * std::max(1.0, norm(x) * norm(y)));
    CHECK(std::abs(inner(xa, x) - norm_sq(xa)) <= 1e-12 * std::max(1.0, norm_sq(x)));
  }
}

TEST_CASE("orthogonality of the split over 1e5 random pairs") {
  Rng rng(123);
  double worst = 0.0;
  for (int t = 0; t < 100000; ++t) {
    int dim = (t % 2) ? 2 : 3;
    MatD x = rng.matrix(dim), y = rng.matrix(dim);
    double v = std::abs(inner(sym(x), skew(y)));
    double scale = norm(x) * norm(y);
    if (scale > 0) worst = std::max(worst, v / scale);
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("dimension mismatch is rejected") {
  MatD a(2), b(3);
  CHECK_THROWS_AS(inner(a, b), DimensionMismatch);
  CHECK_THROWS_AS(a + b, DimensionMismatch);
  CHECK_THROWS_AS(MatD(4), DimensionMismatch);
}

TEST_CASE("antisymmetry checker") {
  CHECK(is_antisymmetric(antisym3(0.3, -0.2, 1.5)));
  MatD m = antisym3(0.3, -0.2, 1.5);
  m(0, 0) = 1e-6;
  CHECK_FALSE(is_antisymmetric(m));
}
