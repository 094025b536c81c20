// SPDX-License-Identifier: Apache-2.0

#ifndef YSL_CONSTITUTIVE_HPP
#define YSL_CONSTITUTIVE_HPP

#include <cstdint>

#include "ysl/params.hpp"
#include "ysl/tensor.hpp"

namespace ysl {

/// x^(e-2) with the continuous extension 0^(positive) = 0 and the exact
/// value 1 when e = 2, so that |X|^(p-2) X behaves as the formulas
/// intend through the origin.
inline double pow_m2(double x, double e) {
  if (e == 2.0) return 1.0;
  return std::pow(x, e - 2.0);
}

/// Stress evaluation outcome: either a definite stress matrix (flow
/// branch) or a plug marker carrying only the admissible bound |S| <= tau_star.
struct StressResult {
  enum class Tag { Flow, Plug };
  Tag tag = Tag::Plug;
  MatD stress;   // meaningful iff tag == Flow
  double bound = 0.0;  // meaningful iff tag == Plug; equals tau_star

  bool is_flow() const { return tag == Tag::Flow; }

  static StressResult flow(const MatD& s) {
    StressResult r;
    r.tag = Tag::Flow;
    r.stress = s;
    return r;
  }
  static StressResult plug(int dim, double tau_star) {
    StressResult r;
    r.tag = Tag::Plug;
    r.stress = MatD::zero(dim);
    r.bound = tau_star;
    return r;
  }
};

/// The four tensors every stress formula is assembled from, for a given
/// gradient X and micro-rotation omega (R = X_a - omega):
///   b_mu_p  = mu1 |X_s|^(p-2) X_s + mu2 |R|^(p-2) R
///   b_nu_q  = |X_s|^(q-2) X_s + nu |R|^(q-2) R
///   b_hat   = |X_s|^((q-2)/2) X_s + sqrt(nu) |R|^((q-2)/2) R
///   b_nu    = X_s + nu R
/// By orthogonality of the symmetric/antisymmetric parts,
/// |b_hat|^2 = |X_s|^q + nu |R|^q; `hat_sq` carries that value computed
/// directly from the norms.
struct BuildingBlocks {
  MatD x_s, r;
  double norm_s = 0.0, norm_r = 0.0;
  MatD b_mu_p, b_nu_q, b_hat_nu_q, b_nu;
  double hat_sq = 0.0;
};

BuildingBlocks building_blocks(const MatD& x, const MatD& omega, const FluidParams& params);

/// Scale-aware plug threshold: tol_rel * max(1, |X|).
inline double plug_threshold(const MatD& x, double tol_rel) {
  return tol_rel * std::max(1.0, norm(x));
}

/// U(X) = (mu1/p)|X_s|^p + (mu2/p)|R|^p  (the smooth part of V).
double potential_U(const MatD& x, const MatD& omega, const FluidParams& params);

/// V(X) = U(X) + tau_hat (|X_s|^q + nu |R|^q)^(1/q).
/// Throws PotentialUnavailable when nu = 0 and mu2 > 0.
double potential_V(const MatD& x, const MatD& omega, const FluidParams& params);

/// V^n(X) = U(X) + tau_hat (|X_s|^q + nu |R|^q + 1/n)^(1/q).
double potential_Vn(const MatD& x, const MatD& omega, const FluidParams& params, int64_t n);

MatD grad_U(const MatD& x, const MatD& omega, const FluidParams& params);

/// Gradient of V off the plug set. Throws AtPlugPoint when |B_nu| is
/// below the plug threshold, PotentialUnavailable in the nu=0, mu2>0 regime.
MatD grad_V(const MatD& x, const MatD& omega, const FluidParams& params,
            const Tolerances& tol = Tolerances::defaults());

/// One-sided directional derivative V'(X; Y). Defined everywhere:
/// at plug points it evaluates grad_U(X):Y + tau_hat (|Y_s|^q + nu |Y_a|^q)^(1/q).
double dir_deriv_V(const MatD& x, const MatD& y, const MatD& omega, const FluidParams& params,
                   const Tolerances& tol = Tolerances::defaults());

/// Exact stress law: flow branch B_mu_p + tau_hat B_nu_q / |B_hat|^(2(q-1)/q),
/// plug marker when |B_nu| <= tol_plug. Valid for every parameter set
/// (also nu=0 with mu2>0, where no potential exists).
StressResult stress_exact(const MatD& x, const MatD& omega, const FluidParams& params,
                          double tol_plug);
StressResult stress_exact(const MatD& x, const MatD& omega, const FluidParams& params);

/// Regularized stress S^n = B_mu_p + tau_hat B_nu_q / (|B_hat|^2 + 1/n)^((q-1)/q).
/// Single-valued and smooth for every X; gradient of V^n.
MatD stress_regularized(const MatD& x, const MatD& omega, const FluidParams& params, int64_t n);

/// Upper bound mu1 |X_s|^(p-1) + mu2 |R|^(p-1) + tau_star satisfied by
/// every S^n; exposed for the verification suites.
double stress_bound(const MatD& x, const MatD& omega, const FluidParams& params);

/// Coercivity envelope for V'(X;X) (same constants for V and V^n):
/// lower = mu1 |X_s|^p - mu2 2^(p-2) |Omega|^p - tau_star |Omega|
/// upper = c1 |X|^p + c2 |Omega|^p + tau_star |X|,
/// c1 = mu1 + 2^(p-2) mu2 (1 + 1/p), c2 = 2^(p-2) mu2 (1 - 1/p).
struct CoercivityBounds {
  double lower = 0.0;
  double upper = 0.0;
};
CoercivityBounds coercivity_bounds(const MatD& x, const MatD& omega, const FluidParams& params);

/// Plastic operator B_nu_q / |B_nu_q| (monotone only for q=2, nu in {0,1}).
/// Throws UndefinedAtPlug when the denominator vanishes.
MatD plastic_operator(const MatD& x_s, const MatD& r, const FluidParams& params);

/// Modified plastic operator B_nu_q / (|X_s|^q + nu |R|^q)^((q-1)/q)
/// (monotone for every nu >= 0, q >= 2).
MatD modified_plastic_operator(const MatD& x_s, const MatD& r, const FluidParams& params);

/// Explicit resolution of the implicit Cosserat-Bingham law. Requires
/// mu1, mu2, tau_star > 0.
StressResult cb_explicit_stress(const MatD& b, const MatD& omega, const FluidParams& params,
                                const Tolerances& tol = Tolerances::defaults());

/// Frobenius norm of LHS - RHS of the implicit law
///   mu1 (a1+|B_s|)^(p-2) ((|S|-tau)_+ + tau) B_0 = (|S|-tau)_+ S,
/// evaluated in the product form that stays finite when B_s = 0.
double cb_implicit_residual(const MatD& s, const MatD& b, const MatD& omega,
                            const FluidParams& params);

}  // namespace ysl

#endif
