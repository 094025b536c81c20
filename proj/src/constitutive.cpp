// SPDX-License-Identifier: Apache-2.0

#include "ysl/constitutive.hpp"

#include <algorithm>

namespace ysl {

namespace {

// x^e with fast paths for the e=1,2 exponents that dominate solver loops.
inline double pow_e(double x, double e) {
  if (e == 2.0) return x * x;
  if (e == 1.0) return x;
  return std::pow(x, e);
}

}  // namespace

BuildingBlocks building_blocks(const MatD& x, const MatD& omega, const FluidParams& params) {
  x.require_same_dim(omega);
  BuildingBlocks bb;
  auto [xs, xa] = decompose(x);
  bb.x_s = xs;
  bb.r = xa - omega;
  bb.norm_s = norm(bb.x_s);
  bb.norm_r = norm(bb.r);

  const double cps = pow_m2(bb.norm_s, params.p);
  const double cpr = pow_m2(bb.norm_r, params.p);
  const double cqs = pow_m2(bb.norm_s, params.q);
  const double cqr = pow_m2(bb.norm_r, params.q);

  bb.b_mu_p = params.mu1 * cps * bb.x_s + params.mu2 * cpr * bb.r;
  bb.b_nu_q = cqs * bb.x_s + params.nu * cqr * bb.r;
  // |X_s|^((q-2)/2) X_s + sqrt(nu) |R|^((q-2)/2) R; the factor is 1 at q=2.
  const double hs = params.q == 2.0 ? 1.0 : std::pow(bb.norm_s, 0.5 * (params.q - 2.0));
  const double hr = params.q == 2.0 ? 1.0 : std::pow(bb.norm_r, 0.5 * (params.q - 2.0));
  bb.b_hat_nu_q = hs * bb.x_s + std::sqrt(params.nu) * hr * bb.r;
  bb.b_nu = bb.x_s + params.nu * bb.r;
  bb.hat_sq = pow_e(bb.norm_s, params.q) + params.nu * pow_e(bb.norm_r, params.q);
  return bb;
}

double potential_U(const MatD& x, const MatD& omega, const FluidParams& params) {
  auto [xs, xa] = decompose(x);
  MatD r = xa - omega;
  return params.mu1 / params.p * std::pow(norm(xs), params.p) +
         params.mu2 / params.p * std::pow(norm(r), params.p);
}

double potential_V(const MatD& x, const MatD& omega, const FluidParams& params) {
  params.require_potentials();
  auto [xs, xa] = decompose(x);
  MatD r = xa - omega;
  double hat_sq = std::pow(norm(xs), params.q) + params.nu * std::pow(norm(r), params.q);
  return potential_U(x, omega, params) + params.tau_hat() * std::pow(hat_sq, 1.0 / params.q);
}

double potential_Vn(const MatD& x, const MatD& omega, const FluidParams& params, int64_t n) {
  params.require_potentials();
  if (n < 1) throw std::invalid_argument("regularization parameter n must be >= 1");
  auto [xs, xa] = decompose(x);
  MatD r = xa - omega;
  double hat_sq = std::pow(norm(xs), params.q) + params.nu * std::pow(norm(r), params.q);
  return potential_U(x, omega, params) +
         params.tau_hat() * std::pow(hat_sq + 1.0 / static_cast<double>(n), 1.0 / params.q);
}

MatD grad_U(const MatD& x, const MatD& omega, const FluidParams& params) {
  auto [xs, xa] = decompose(x);
  MatD r = xa - omega;
  return params.mu1 * pow_m2(norm(xs), params.p) * xs +
         params.mu2 * pow_m2(norm(r), params.p) * r;
}

namespace {

// |B_hat|^(2(q-1)/q) = hat_sq^((q-1)/q); sqrt at q=2
inline double dual_power(double hat_sq, double q) {
  if (q == 2.0) return std::sqrt(hat_sq);
  return std::pow(hat_sq, (q - 1.0) / q);
}

}  // namespace

MatD grad_V(const MatD& x, const MatD& omega, const FluidParams& params, const Tolerances& tol) {
  params.require_potentials();
  BuildingBlocks bb = building_blocks(x, omega, params);
  if (norm(bb.b_nu) <= plug_threshold(x, tol.plug_rel)) throw AtPlugPoint();
  return bb.b_mu_p + (params.tau_hat() / dual_power(bb.hat_sq, params.q)) * bb.b_nu_q;
}

double dir_deriv_V(const MatD& x, const MatD& y, const MatD& omega, const FluidParams& params,
                   const Tolerances& tol) {
  params.require_potentials();
  BuildingBlocks bb = building_blocks(x, omega, params);
  if (norm(bb.b_nu) > plug_threshold(x, tol.plug_rel)) {
    const double denom = dual_power(bb.hat_sq, params.q);
    return inner(bb.b_mu_p + (params.tau_hat() / denom) * bb.b_nu_q, y);
  }
  // Plug point: W'(X;Y) = (|Y_s|^q + nu |Y_a|^q)^(1/q) covers both the
  // nu>0 case (X = Omega) and the nu=0 case (X_s = 0, arbitrary X_a).
  auto [ys, ya] = decompose(y);
  double w_dir = std::pow(
      std::pow(norm(ys), params.q) + params.nu * std::pow(norm(ya), params.q), 1.0 / params.q);
  return inner(grad_U(x, omega, params), y) + params.tau_hat() * w_dir;
}

StressResult stress_exact(const MatD& x, const MatD& omega, const FluidParams& params,
                          double tol_plug) {
  BuildingBlocks bb = building_blocks(x, omega, params);
  if (norm(bb.b_nu) <= tol_plug) return StressResult::plug(x.dim, params.tau_star);
  const double denom = dual_power(bb.hat_sq, params.q);
  return StressResult::flow(bb.b_mu_p + (params.tau_hat() / denom) * bb.b_nu_q);
}

StressResult stress_exact(const MatD& x, const MatD& omega, const FluidParams& params) {
  return stress_exact(x, omega, params, plug_threshold(x, Tolerances::defaults().plug_rel));
}

MatD stress_regularized(const MatD& x, const MatD& omega, const FluidParams& params, int64_t n) {
  if (n < 1) throw std::invalid_argument("regularization parameter n must be >= 1");
  x.require_same_dim(omega);
  // S^n = alpha X_s + beta R with scalar coefficients; written out flat
  // because this sits in every solver's per-node loop.
  const int d = x.dim;
  double xs[9], r[9];
  double ns_sq = 0.0, nr_sq = 0.0;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const double s = 0.5 * (x(i, j) + x(j, i));
      const double a = 0.5 * (x(i, j) - x(j, i)) - omega(i, j);
      xs[i * d + j] = s;
      r[i * d + j] = a;
      ns_sq += s * s;
      nr_sq += a * a;
    }
  }
  const double ns = std::sqrt(ns_sq), nr = std::sqrt(nr_sq);
  const double hat_sq = pow_e(ns, params.q) + params.nu * pow_e(nr, params.q);
  const double tau_term =
      params.tau_hat() / dual_power(hat_sq + 1.0 / static_cast<double>(n), params.q);
  const double alpha = params.mu1 * pow_m2(ns, params.p) + tau_term * pow_m2(ns, params.q);
  const double beta =
      params.mu2 * pow_m2(nr, params.p) + tau_term * params.nu * pow_m2(nr, params.q);
  MatD out(d);
  for (int k = 0; k < d * d; ++k)
    out.e[static_cast<size_t>(k)] = alpha * xs[k] + beta * r[k];
  return out;
}

double stress_bound(const MatD& x, const MatD& omega, const FluidParams& params) {
  auto [xs, xa] = decompose(x);
  MatD r = xa - omega;
  return params.mu1 * std::pow(norm(xs), params.p - 1.0) +
         params.mu2 * std::pow(norm(r), params.p - 1.0) + params.tau_star;
}

CoercivityBounds coercivity_bounds(const MatD& x, const MatD& omega, const FluidParams& params) {
  const double p = params.p;
  const double two_pm2 = std::pow(2.0, p - 2.0);
  const double c1 = params.mu1 + two_pm2 * params.mu2 * (1.0 + 1.0 / p);
  const double c2 = two_pm2 * params.mu2 * (1.0 - 1.0 / p);
  const double nx = norm(x);
  const double ns = norm(sym(x));
  const double nw = norm(omega);
  CoercivityBounds b;
  b.lower = params.mu1 * std::pow(ns, p) - params.mu2 * two_pm2 * std::pow(nw, p) -
            params.tau_star * nw;
  b.upper = c1 * std::pow(nx, p) + c2 * std::pow(nw, p) + params.tau_star * nx;
  return b;
}

MatD plastic_operator(const MatD& x_s, const MatD& r, const FluidParams& params) {
  const double ns = norm(x_s);
  const double nr = norm(r);
  MatD b = pow_m2(ns, params.q) * x_s + params.nu * pow_m2(nr, params.q) * r;
  const double nb = norm(b);
  if (nb == 0.0) throw UndefinedAtPlug();
  return (1.0 / nb) * b;
}

MatD modified_plastic_operator(const MatD& x_s, const MatD& r, const FluidParams& params) {
  const double ns = norm(x_s);
  const double nr = norm(r);
  const double hat_sq = std::pow(ns, params.q) + params.nu * std::pow(nr, params.q);
  if (hat_sq == 0.0) throw UndefinedAtPlug();
  MatD b = pow_m2(ns, params.q) * x_s + params.nu * pow_m2(nr, params.q) * r;
  return (1.0 / std::pow(hat_sq, (params.q - 1.0) / params.q)) * b;
}

namespace {

// mu1 (a1+|B_s|)^(p-2) B_s + mu2 (a2+|R|)^(p-2) R: the viscous part of
// the explicit law, equal to mu1 (a1+|B_s|)^(p-2) B_0. Working with it
// directly avoids forming epsilon, which blows up when a1 = 0, B_s = 0.
MatD cb_viscous_part(const MatD& b_s, const MatD& r, const FluidParams& params) {
  const double cs = pow_m2(params.a1 + norm(b_s), params.p);
  const double cr = pow_m2(params.a2 + norm(r), params.p);
  return params.mu1 * cs * b_s + params.mu2 * cr * r;
}

}  // namespace

StressResult cb_explicit_stress(const MatD& b, const MatD& omega, const FluidParams& params,
                                const Tolerances& tol) {
  if (!(params.mu1 > 0.0 && params.mu2 > 0.0 && params.tau_star > 0.0))
    throw std::invalid_argument("implicit law requires mu1, mu2, tau_star > 0");
  auto [bs, ba] = decompose(b);
  MatD r = ba - omega;
  // B_0 = 0 iff B_s = 0 and R = 0 (the parts are orthogonal and eps > 0).
  const double thr = plug_threshold(b, tol.plug_rel);
  if (norm(bs) <= thr && norm(r) <= thr) return StressResult::plug(b.dim, params.tau_star);
  MatD m = cb_viscous_part(bs, r, params);
  return StressResult::flow(m + (params.tau_star / norm(m)) * m);
}

double cb_implicit_residual(const MatD& s, const MatD& b, const MatD& omega,
                            const FluidParams& params) {
  auto [bs, ba] = decompose(b);
  MatD r = ba - omega;
  const double pos = std::max(norm(s) - params.tau_star, 0.0);
  // (pos + tau) * [mu1 (a1+|B_s|)^(p-2) B_s + mu2 (a2+|R|)^(p-2) R] - pos * S
  MatD lhs = (pos + params.tau_star) * cb_viscous_part(bs, r, params);
  return norm(lhs - pos * s);
}

}  // namespace ysl
