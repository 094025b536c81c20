// SPDX-License-Identifier: Apache-2.0

#include "ysl/subdiff.hpp"

#include <algorithm>
#include <cmath>

#include "ysl/rng.hpp"

namespace ysl {

double r_q(const FluidParams& params) {
  params.require_potentials();
  const double q = params.q;
  const double nu = params.nu;
  if (nu == 0.0) return 0.0;
  if (q == 2.0) return std::min(1.0, std::sqrt(nu));
  // log-space evaluation of nu^(1/q) (1 + nu^(2/(q-2)))^(-(q-2)/(2q));
  // nu^(2/(q-2)) overflows for q near 2, ln(1+e^L) does not.
  const double ln_nu = std::log(nu);
  const double big = (2.0 / (q - 2.0)) * ln_nu;
  const double log1pexp = std::max(big, 0.0) + std::log1p(std::exp(-std::abs(big)));
  return std::exp(ln_nu / q - (q - 2.0) / (2.0 * q) * log1pexp);
}

double r_star(const FluidParams& params) { return params.tau_hat() * r_q(params); }

double r_q_numeric(double q, double nu, int grid) {
  auto alpha = [&](double t) {
    return std::pow(1.0 - t, 0.5 * q) + nu * std::pow(t, 0.5 * q);
  };
  // coarse grid seed
  double best_t = 0.0, best = alpha(0.0);
  for (int i = 1; i <= grid; ++i) {
    double t = static_cast<double>(i) / grid;
    double v = alpha(t);
    if (v < best) {
      best = v;
      best_t = t;
    }
  }
  // golden-section refinement on the bracketing interval (alpha is convex)
  double a = std::max(0.0, best_t - 2.0 / grid);
  double b = std::min(1.0, best_t + 2.0 / grid);
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = alpha(c), fd = alpha(d);
  for (int it = 0; it < 200 && (b - a) > 1e-15; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = alpha(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = alpha(d);
    }
  }
  best = std::min({best, fc, fd});
  return std::pow(best, 1.0 / q);
}

namespace {

// |M|^e * M with the continuous extension to 0 for e > -1.
MatD scaled_power(const MatD& m, double e) {
  double n = norm(m);
  if (n == 0.0) return MatD::zero(m.dim);
  return std::pow(n, e) * m;
}

}  // namespace

bool in_subdifferential_at_plug(const MatD& x_star, const MatD& omega, const FluidParams& params,
                                const std::optional<MatD>& plug_point, const Tolerances& tol) {
  // V is convex for every nu >= 0 (also nu=0 with mu2>0, where only the
  // stress identification fails), so membership has no admissibility gate.
  auto [ss, sa] = decompose(x_star);
  if (params.nu > 0.0) {
    const double qp = params.q / (params.q - 1.0);
    const double lhs =
        std::pow(norm(ss), qp) + std::pow(params.nu, 1.0 - qp) * std::pow(norm(sa), qp);
    const double rhs = std::pow(params.tau_hat(), qp);
    return lhs <= rhs * (1.0 + tol.membership_rel) + tol.membership_rel;
  }
  // nu = 0: subdifferential is mu2 |R|^(p-2) R + {symmetric, |.| <= tau_star};
  // needs the plug matrix X for R = X_a - Omega.
  if (!plug_point)
    throw std::invalid_argument("nu=0 membership test needs the plug matrix for R");
  MatD r = skew(*plug_point) - omega;
  MatD shift = params.mu2 * pow_m2(norm(r), params.p) * r;
  double scale = std::max({1.0, norm(x_star), norm(shift)});
  if (norm(sa - shift) > tol.membership_rel * scale) return false;
  return norm(ss) <= params.tau_star * (1.0 + tol.membership_rel) + tol.membership_rel;
}

std::optional<Witness> violation_witness(const MatD& x_star, const FluidParams& params,
                                         const Tolerances& tol) {
  params.require_potentials();
  if (!(params.nu > 0.0))
    throw std::invalid_argument("violation witness is defined for nu > 0");
  auto [ss, sa] = decompose(x_star);
  const double qp = params.q / (params.q - 1.0);
  const double nu_pow = std::pow(params.nu, 1.0 - qp);
  const double lhs = std::pow(norm(ss), qp) + nu_pow * std::pow(norm(sa), qp);
  const double rhs = std::pow(params.tau_hat(), qp);
  if (lhs <= rhs * (1.0 + tol.membership_rel) + tol.membership_rel) return std::nullopt;

  // Y_s = |X*_s|^(q'-2) X*_s, Y_a = nu^(1-q') |X*_a|^(q'-2) X*_a makes
  // X*:Y = lhs and W(Y+Omega) = lhs^(1/q); strict violation follows.
  MatD y = scaled_power(ss, qp - 2.0) + nu_pow * scaled_power(sa, qp - 2.0);
  double ny = norm(y);
  if (ny == 0.0) return std::nullopt;
  y *= 1.0 / ny;
  Witness w;
  w.y = y;
  w.lhs = inner(x_star, y);
  auto [ys, ya] = decompose(y);
  w.rhs = params.tau_hat() *
          std::pow(std::pow(norm(ys), params.q) + params.nu * std::pow(norm(ya), params.q),
                   1.0 / params.q);
  if (w.lhs <= w.rhs) return std::nullopt;  // boundary at rounding level
  return w;
}

PlugClass classify_plug(const MatD& b, const MatD& omega, const FluidParams& params, double tol) {
  auto [bs, ba] = decompose(b);
  MatD b_nu = bs + params.nu * (ba - omega);
  return norm(b_nu) <= tol ? PlugClass::Plug : PlugClass::Flow;
}

double check_est_dw(const MatD& x, const MatD& omega, const FluidParams& params,
                    const Tolerances& tol) {
  BuildingBlocks bb = building_blocks(x, omega, params);
  if (norm(bb.b_nu) <= plug_threshold(x, tol.plug_rel)) throw AtPlugPoint();
  return norm(bb.b_nu_q) / std::pow(bb.hat_sq, (params.q - 1.0) / params.q);
}

MembershipProbe membership_oracle(const MatD& x_star, const MatD& omega,
                                  const FluidParams& params, uint64_t seed, int samples,
                                  int ascent_starts, int ascent_iters) {
  params.require_potentials();
  (void)omega;  // W(. + Omega) shifted to the origin is Omega-free
  const int dim = x_star.dim;
  const double tau = params.tau_hat();

  auto w_shift = [&](const MatD& z) {
    auto [zs, za] = decompose(z);
    return std::pow(std::pow(norm(zs), params.q) + params.nu * std::pow(norm(za), params.q),
                    1.0 / params.q);
  };
  auto h = [&](const MatD& z) { return inner(x_star, z) - tau * w_shift(z); };

  MembershipProbe probe;
  probe.direction = MatD::zero(dim);

  Rng rng(seed);
  for (int i = 0; i < samples; ++i) {
    MatD z = rng.unit_matrix(dim);
    double v = h(z);
    if (v > probe.max_gap) {
      probe.max_gap = v;
      probe.direction = z;
    }
  }

  // Projected supgradient ascent of the concave 1-homogeneous h over the
  // unit ball; global max is found from any start.
  auto supgrad = [&](const MatD& z) {
    auto [zs, za] = decompose(z);
    double ns = norm(zs), na = norm(za);
    double hat = std::pow(ns, params.q) + params.nu * std::pow(na, params.q);
    MatD g = x_star;
    if (hat > 0.0) {
      double denom = std::pow(hat, (params.q - 1.0) / params.q);
      MatD wgrad = pow_m2(ns, params.q) * zs + params.nu * pow_m2(na, params.q) * za;
      g -= (tau / denom) * wgrad;
    }
    return g;
  };
  for (int s = 0; s < ascent_starts; ++s) {
    MatD z = (s == 0 && norm(probe.direction) > 0.0) ? probe.direction : rng.unit_matrix(dim);
    double step = 0.5;
    for (int it = 0; it < ascent_iters; ++it) {
      MatD g = supgrad(z);
      MatD znew = z + step * g;
      double n = norm(znew);
      if (n > 1.0) znew *= 1.0 / n;
      if (h(znew) >= h(z)) {
        z = znew;
      } else {
        step *= 0.5;
        if (step < 1e-12) break;
      }
    }
    double v = h(z);
    if (v > probe.max_gap) {
      probe.max_gap = v;
      probe.direction = z;
    }
  }

  double scale = std::max(1.0, tau);
  probe.member = probe.max_gap <= 1e-9 * scale;
  return probe;
}

}  // namespace ysl
