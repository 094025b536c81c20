// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <limits>

#include "ysl/rng.hpp"
#include "ysl/spectral.hpp"

using namespace ysl;

TEST_CASE("leray projection: kills gradients, fixes divergence-free fields, idempotent") {
  const int K = 6, M = 20;
  SpectralState grad_field;
  grad_field.modes = K;
  grad_field.grid = M;
  size_t nspec = static_cast<size_t>(M) * (M / 2 + 1);
  grad_field.uhat.assign(nspec, 0.0);
  grad_field.vhat.assign(nspec, 0.0);
  Rng rng(5);
  // u = ikx phi, v = iky phi for random phi: a pure gradient
  auto at = [&](int j, int i) { return static_cast<size_t>(j) * (M / 2 + 1) + i; };
  for (int j = 0; j < M; ++j) {
    for (int i = 0; i <= M / 2; ++i) {
      int kx = i, ky = j <= M / 2 ? j : j - M;
      if (std::abs(kx) > K || std::abs(ky) > K || (kx == 0 && ky == 0)) continue;
      std::complex<double> phi(rng.uniform(-1, 1), rng.uniform(-1, 1));
      grad_field.uhat[at(j, i)] = std::complex<double>(0, kx) * phi;
      grad_field.vhat[at(j, i)] = std::complex<double>(0, ky) * phi;
    }
  }
  leray_project(grad_field);
  double mx = 0.0;
  for (size_t s = 0; s < nspec; ++s)
    mx = std::max({mx, std::abs(grad_field.uhat[s]), std::abs(grad_field.vhat[s])});
  CHECK(mx <= 1e-14);

  SpectralState tg = taylor_green_state(K, M, 1.0);
  SpectralState tg2 = tg;
  leray_project(tg2);
  double diff = 0.0;
  for (size_t s = 0; s < nspec; ++s)
    diff = std::max({diff, std::abs(tg.uhat[s] - tg2.uhat[s]),
                     std::abs(tg.vhat[s] - tg2.vhat[s])});
  CHECK(diff <= 1e-15);
  CHECK(divergence_residual(tg) <= 1e-14);
}

TEST_CASE("taylor-green newtonian decay matches exp(-2 mu1 t / 2 |k|^2) to 1%") {
  SpectralConfig cfg;
  cfg.modes = 8;
  cfg.params.mu1 = 1.0;
  cfg.params.tau_star = 0.0;
  cfg.t_end = 0.5;
  SpectralResult res = integrate(cfg);
  // effective viscosity mu1/2, |k|^2 = 2: energy decays at rate 2 mu1
  double expected = res.energy0 * std::exp(-2.0 * cfg.params.mu1 * cfg.t_end);
  CHECK(std::abs(res.final_energy - expected) <= 0.01 * expected);
  CHECK(res.max_div_residual <= 1e-12);
  CHECK(res.max_energy_residual <= 1e-9 * res.energy0);
}

TEST_CASE("yield stress dissipates: energy non-increasing without forcing") {
  SpectralConfig cfg;
  cfg.modes = 8;
  cfg.params.mu1 = 0.5;
  cfg.params.tau_star = 0.4;
  cfg.params.nu = 0.5;
  cfg.params.mu2 = 0.2;
  cfg.reg_n = 100;
  cfg.t_end = 0.3;
  SpectralResult res = integrate(cfg);
  double prev = std::numeric_limits<double>::infinity();
  for (const SpectralRecord& r : res.records) {
    CHECK(r.energy <= prev + 1e-12 * res.energy0);
    prev = r.energy;
  }
  CHECK(res.sup_energy == doctest::Approx(res.energy0));
  CHECK(res.apriori_ok);
  CHECK(res.coercivity_ok);
}

TEST_CASE("a-priori bound holds with a random micro-rotation field") {
  SpectralConfig cfg;
  cfg.modes = 8;
  cfg.params.mu1 = 1.0;
  cfg.params.mu2 = 0.4;
  cfg.params.nu = 0.8;
  cfg.params.tau_star = 0.3;
  cfg.params.p = 2.0;
  cfg.reg_n = 100;
  cfg.t_end = 0.3;
  cfg.omega.type = OmegaSpec::Type::Expression;
  cfg.omega.expr = "0.3*sin(x)*cos(2*y)";
  SpectralResult res = integrate(cfg);
  CHECK(res.c0_rate > 0.0);
  CHECK(res.apriori_ok);
  CHECK(res.coercivity_ok);
  CHECK(res.max_div_residual <= 1e-11);
}

TEST_CASE("energy identity residual shrinks at RK4 order under dt halving") {
  double residual[2];
  int idx = 0;
  for (double dt : {4e-3, 2e-3}) {
    SpectralConfig cfg;
    cfg.modes = 6;
    cfg.params.mu1 = 1.0;
    cfg.params.tau_star = 0.5;
    cfg.reg_n = 100;
    cfg.dt = dt;
    cfg.t_end = 0.2;
    cfg.record_stride = 1000000;  // only endpoint
    SpectralResult res = integrate(cfg);
    residual[idx++] = res.records.back().energy_residual;
  }
  REQUIRE(residual[0] > 1e-14);  // above roundoff
  double order = std::log2(residual[0] / residual[1]);
  CHECK(order >= 3.0);
}

TEST_CASE("zero field with zero omega is a fixed point") {
  SpectralConfig cfg;
  cfg.modes = 6;
  cfg.params.mu1 = 1.0;
  cfg.params.tau_star = 0.5;
  cfg.reg_n = 100;
  cfg.t_end = 0.05;
  cfg.dt = 1e-3;
  cfg.init.amplitude = 0.0;
  SpectralResult res = integrate(cfg);
  CHECK(res.energy0 == 0.0);
  CHECK(res.final_energy == 0.0);
  CHECK(res.max_energy_residual == 0.0);
}

TEST_CASE("constant omega ingestion and antisymmetry-checked file path") {
  SpectralConfig cfg;
  cfg.modes = 6;
  cfg.params.mu1 = 1.0;
  cfg.params.mu2 = 0.3;
  cfg.params.nu = 1.0;
  cfg.params.tau_star = 0.2;
  cfg.reg_n = 50;
  cfg.t_end = 0.1;
  cfg.omega.type = OmegaSpec::Type::Constant;
  cfg.omega.value = 0.25;
  SpectralResult res = integrate(cfg);
  CHECK(res.c0_rate > 0.0);
  CHECK(std::isfinite(res.final_energy));
}
