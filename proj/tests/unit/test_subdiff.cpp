// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "ysl/rng.hpp"
#include "ysl/subdiff.hpp"

using namespace ysl;

namespace {

FluidParams make_params(double nu, double tau, double q, double mu2 = 0.5, double p = 2.2) {
  FluidParams fp;
  fp.mu1 = 1.0;
  fp.mu2 = nu == 0.0 ? 0.0 : mu2;
  fp.nu = nu;
  fp.tau_star = tau;
  fp.p = p;
  fp.q = q;
  return fp;
}

}  // namespace

TEST_CASE("r_star illustration cases at q=2") {
  FluidParams a = make_params(1.0, 1.0, 2.0);
  CHECK(r_star(a) == doctest::Approx(1.0));  // nu = 1: r* = tau*

  FluidParams b = make_params(0.25, 1.0, 2.0);
  CHECK(b.tau_hat() == doctest::Approx(1.0));  // max(1, nu^(1/2)) = 1
  CHECK(r_star(b) == doctest::Approx(0.5));

  // q=2 reduction r* = tau* min(1,sqrt(nu))/max(1,sqrt(nu)) (the
  // inscribed radius of the ellipse with semi-axes tau_hat, tau_hat sqrt(nu))
  for (double nu : {0.3, 1.0, 2.0, 5.0}) {
    FluidParams c = make_params(nu, 0.7, 2.0);
    double snu = std::sqrt(nu);
    CHECK(r_star(c) ==
          doctest::Approx(0.7 * std::min(1.0, snu) / std::max(1.0, snu)).epsilon(1e-12));
  }
}

TEST_CASE("r_q closed form equals the 1d minimization oracle") {
  for (double q : {2.0, 2.2, 2.5, 3.0, 4.0, 6.0}) {
    for (double nu : {0.0, 0.1, 0.25, 0.5, 1.0, 2.0, 4.0}) {
      FluidParams fp = make_params(nu, 1.0, q);
      CHECK(std::abs(r_q(fp) - r_q_numeric(q, nu)) <= 1e-10);
    }
  }
  // q near 2 must stay finite and approach the q=2 branch
  for (double nu : {0.25, 4.0}) {
    FluidParams fp = make_params(nu, 1.0, 2.0 + 1e-9);
    CHECK(std::isfinite(r_q(fp)));
    CHECK(r_q(fp) == doctest::Approx(std::min(1.0, std::sqrt(nu))).epsilon(1e-4));
  }
}

TEST_CASE("r_q is non-decreasing in nu at fixed q") {
  for (double q : {2.0, 2.5, 3.0, 4.0}) {
    double prev = -1.0;
    for (int i = 0; i <= 40; ++i) {
      double nu = 0.1 * i;
      FluidParams fp = make_params(nu, 1.0, q);
      double r = r_q(fp);
      CHECK(r >= prev - 1e-13);
      prev = r;
    }
  }
}

TEST_CASE("membership: zero is always a subgradient; ball sandwich by sampling") {
  Rng rng(31);
  for (double q : {2.0, 3.0}) {
    for (double nu : {0.3, 1.0, 4.0}) {
      FluidParams fp = make_params(nu, 0.9, q);
      MatD omega = rng.antisymmetric(3);
      CHECK(in_subdifferential_at_plug(MatD::zero(3), omega, fp));

      double rs = r_star(fp);
      for (int t = 0; t < 2000; ++t) {
        MatD inside = (rs * (1.0 - 1e-9) * rng.canonical()) * rng.unit_matrix(3);
        CHECK(in_subdifferential_at_plug(inside, omega, fp));
        MatD outside = (fp.tau_star * rng.uniform(1.0 + 1e-6, 3.0)) * rng.unit_matrix(3);
        CHECK_FALSE(in_subdifferential_at_plug(outside, omega, fp));
      }
    }
  }
}

TEST_CASE("membership at q=2 cross-checks the explicit ellipse") {
  Rng rng(32);
  FluidParams fp = make_params(0.6, 0.8, 2.0);
  MatD omega = rng.antisymmetric(3);
  double th = fp.tau_hat();
  for (int t = 0; t < 3000; ++t) {
    MatD xs = rng.uniform(0.5, 1.8) * rng.unit_matrix(3);
    auto [s, a] = decompose(xs);
    bool explicit_ellipse = norm_sq(s) + norm_sq(a) / fp.nu <= th * th * (1.0 + 1e-10);
    bool got = in_subdifferential_at_plug(xs, omega, fp);
    // skip the boundary band where the two tolerances may disagree
    double e = norm_sq(s) + norm_sq(a) / fp.nu;
    if (std::abs(e - th * th) < 1e-6 * th * th) continue;
    CHECK(got == explicit_ellipse);
  }
}

TEST_CASE("membership for nu=0 uses the shifted symmetric ball and needs the plug matrix") {
  Rng rng(33);
  FluidParams fp = make_params(0.0, 0.7, 2.0);
  fp.mu2 = 0.0;
  MatD omega = rng.antisymmetric(3);
  MatD plug_x = rng.antisymmetric(3);  // X_s = 0

  CHECK_THROWS_AS(in_subdifferential_at_plug(MatD::zero(3), omega, fp), std::invalid_argument);

  for (int t = 0; t < 500; ++t) {
    MatD good = rng.uniform(0.0, fp.tau_star * (1 - 1e-9)) * rng.unit_symmetric(3);
    CHECK(in_subdifferential_at_plug(good, omega, fp, plug_x));
    MatD bad_sym = rng.uniform(fp.tau_star * (1 + 1e-6), 3.0) * rng.unit_symmetric(3);
    CHECK_FALSE(in_subdifferential_at_plug(bad_sym, omega, fp, plug_x));
    MatD bad_asym = good + 0.1 * rng.unit_antisymmetric(3);
    CHECK_FALSE(in_subdifferential_at_plug(bad_asym, omega, fp, plug_x));
  }

  // with mu2 > 0 the admissible set is shifted by mu2 |R|^(p-2) R; the
  // membership test works there even though no stress law matches V
  FluidParams fp2 = make_params(0.0, 0.7, 2.0);
  fp2.mu2 = 0.4;
  fp2.nu = 0.0;
  MatD r = skew(plug_x) - omega;
  MatD shift = fp2.mu2 * pow_m2(norm(r), fp2.p) * r;
  for (int t = 0; t < 200; ++t) {
    MatD member = shift + rng.uniform(0.0, fp2.tau_star * (1 - 1e-9)) * rng.unit_symmetric(3);
    CHECK(in_subdifferential_at_plug(member, omega, fp2, plug_x));
    MatD unshifted = rng.uniform(0.2, 0.9) * fp2.tau_star * rng.unit_symmetric(3);
    if (norm(shift) > 1e-3)  // without the shift the antisymmetric part is wrong
      CHECK_FALSE(in_subdifferential_at_plug(unshifted + 0.5 * shift, omega, fp2, plug_x));
  }
}

TEST_CASE("violation witness certifies outside points and refuses inside ones") {
  Rng rng(34);
  for (double q : {2.0, 3.0}) {
    for (double nu : {0.4, 1.0, 3.0}) {
      FluidParams fp = make_params(nu, 0.8, q);

      // slightly-outside symmetric direction
      MatD unit_s = rng.unit_symmetric(3);
      MatD xs = (1.0 + 1e-3) * fp.tau_hat() * unit_s;
      auto w = violation_witness(xs, fp);
      REQUIRE(w.has_value());
      CHECK(w->lhs > w->rhs);

      // inside: no witness
      MatD inside = 0.5 * r_star(fp) * rng.unit_matrix(3);
      CHECK_FALSE(violation_witness(inside, fp).has_value());

      // on the boundary at tolerance: no witness
      auto [us, ua] = decompose(rng.unit_matrix(3));
      double qp = q / (q - 1.0);
      double e = std::pow(norm(us), qp) + std::pow(nu, 1.0 - qp) * std::pow(norm(ua), qp);
      MatD boundary = std::pow(std::pow(fp.tau_hat(), qp) / e, 1.0 / qp) * (us + ua);
      CHECK_FALSE(violation_witness(boundary, fp).has_value());

      // random strictly-outside points always certify
      for (int t = 0; t < 1000; ++t) {
        MatD out_pt = (fp.tau_star * rng.uniform(1.01, 4.0)) * rng.unit_matrix(3);
        auto ww = violation_witness(out_pt, fp);
        REQUIRE(ww.has_value());
        CHECK(ww->lhs > ww->rhs);
      }
    }
  }
  FluidParams nu0 = make_params(0.0, 0.8, 2.0);
  CHECK_THROWS_AS(violation_witness(MatD::identity(3), nu0), std::invalid_argument);
}

TEST_CASE("classify_plug matches the definition in both nu regimes") {
  Rng rng(35);
  MatD omega = rng.antisymmetric(3);
  FluidParams fp = make_params(0.7, 0.5, 2.0);
  CHECK(classify_plug(omega, omega, fp, 1e-10) == PlugClass::Plug);
  CHECK(classify_plug(omega + 0.1 * rng.unit_symmetric(3), omega, fp, 1e-10) == PlugClass::Flow);

  FluidParams nu0 = make_params(0.0, 0.5, 2.0);
  for (int t = 0; t < 200; ++t) {
    MatD b = rng.antisymmetric(3);  // B_s = 0, B_a arbitrary
    CHECK(classify_plug(b, omega, nu0, 1e-10) == PlugClass::Plug);
    CHECK(classify_plug(b + 0.2 * rng.unit_symmetric(3), omega, nu0, 1e-10) == PlugClass::Flow);
  }
}

TEST_CASE("est_DW ratio: special values and the global bound") {
  Rng rng(36);
  for (double q : {2.0, 2.5, 3.0}) {
    for (double nu : {0.2, 1.0, 5.0}) {
      FluidParams fp = make_params(nu, 0.5, q);
      MatD omega = rng.antisymmetric(3);

      // X_s = 0, R != 0: ratio = nu^(1/q)
      MatD x_rot = omega + rng.unit_antisymmetric(3);
      CHECK(check_est_dw(x_rot, omega, fp) == doctest::Approx(std::pow(nu, 1.0 / q)).epsilon(1e-10));

      // X_a = Omega, X_s != 0: ratio = 1
      MatD x_sym = omega + rng.unit_symmetric(3);
      CHECK(check_est_dw(x_sym, omega, fp) == doctest::Approx(1.0).epsilon(1e-10));

      double bound = std::max(1.0, std::pow(nu, 1.0 / q));
      for (int t = 0; t < 12000; ++t)
        CHECK(check_est_dw(rng.matrix(3), omega, fp) <= bound + 1e-12);

      CHECK_THROWS_AS(check_est_dw(omega, omega, fp), AtPlugPoint);
    }
  }
}

TEST_CASE("membership oracle agrees with the ellipsoid test near the boundary") {
  Rng rng(37);
  for (double q : {2.0, 3.0}) {
    for (double nu : {0.5, 2.0}) {
      FluidParams fp = make_params(nu, 0.9, q);
      MatD omega = rng.antisymmetric(3);
      double qp = q / (q - 1.0);
      for (int t = 0; t < 20; ++t) {
        MatD dir = rng.unit_matrix(3);
        auto [ds, da] = decompose(dir);
        double e = std::pow(norm(ds), qp) + std::pow(nu, 1.0 - qp) * std::pow(norm(da), qp);
        double on_b = std::pow(std::pow(fp.tau_hat(), qp) / e, 1.0 / qp);
        double factor = (t % 2 == 0) ? 1.01 : 0.99;
        MatD x_star = (factor * on_b) * dir;
        bool member = in_subdifferential_at_plug(x_star, omega, fp);
        MembershipProbe probe = membership_oracle(x_star, omega, fp, 1000 + t, 2000, 6, 300);
        CHECK(member == (factor < 1.0));
        CHECK(probe.member == member);
      }
    }
  }
}
