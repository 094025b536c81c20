// SPDX-License-Identifier: Apache-2.0

#ifndef YSL_SUBDIFF_HPP
#define YSL_SUBDIFF_HPP

#include <optional>

#include "ysl/constitutive.hpp"
#include "ysl/params.hpp"
#include "ysl/tensor.hpp"

namespace ysl {

/// Radius of the largest Euclidean ball inside the subdifferential of W
/// at the plug:
///   q > 2: nu^(1/q) / (1 + nu^(2/(q-2)))^((q-2)/(2q))
///   q = 2: min(1, sqrt(nu))
/// Equals the minimum over t in [0,1] of ((1-t)^(q/2) + nu t^(q/2))^(1/q).
/// Evaluated in log space so q near 2 stays finite.
double r_q(const FluidParams& params);

/// tau_hat * r_q: largest ball inside the subdifferential of V at the plug.
double r_star(const FluidParams& params);

/// Independent oracle: minimizes alpha(t) = (1-t)^(q/2) + nu t^(q/2)
/// over [0,1] by grid seeding plus golden-section refinement and returns
/// the minimum to ~1e-12. Test-side cross-check for r_q.
double r_q_numeric(double q, double nu, int grid = 4096);

/// Membership in the subdifferential of V at a plug point.
/// nu > 0 (plug matrix is Omega itself): the ellipsoid test
///   |X*_s|^q' + nu^(1-q') |X*_a|^q' <= tau_hat^q',  q' = q/(q-1).
/// nu = 0: the plug matrix X (with X_s = 0) must be supplied; tests
/// that X* - mu2 |R|^(p-2) R has vanishing antisymmetric part and
/// symmetric part bounded by tau_star.
bool in_subdifferential_at_plug(const MatD& x_star, const MatD& omega, const FluidParams& params,
                                const std::optional<MatD>& plug_point = std::nullopt,
                                const Tolerances& tol = Tolerances::defaults());

/// Certificate that x_star lies outside the subdifferential at the plug:
/// a direction y with x_star : y > tau_hat * W(y + Omega).
struct Witness {
  MatD y;        // unit-norm violating direction
  double lhs = 0.0;  // x_star : y
  double rhs = 0.0;  // tau_hat * (|y_s|^q + nu |y_a|^q)^(1/q)
};

/// Construct a violation witness for nu > 0. Returns nullopt when
/// x_star is inside (or on) the ellipsoid at tolerance.
std::optional<Witness> violation_witness(const MatD& x_star, const FluidParams& params,
                                         const Tolerances& tol = Tolerances::defaults());

enum class PlugClass { Plug, Flow };

/// Plug iff |B_s + nu (B_a - Omega)| <= tol.
PlugClass classify_plug(const MatD& b, const MatD& omega, const FluidParams& params, double tol);

/// Ratio |X_nu_q| / |X_hat_nu_q|^(2(q-1)/q); bounded by max(1, nu^(1/q)).
/// Throws AtPlugPoint when X_nu = 0.
double check_est_dw(const MatD& x, const MatD& omega, const FluidParams& params,
                    const Tolerances& tol = Tolerances::defaults());

/// Sampling/ascent oracle for plug membership, independent of the
/// ellipsoid formula: maximizes h(Z) = X*:Z - tau_hat W(Z + Omega) over
/// the unit ball (h is concave and 1-homogeneous, so membership is
/// equivalent to max h <= 0). Uniform sampling catches gross violations;
/// projected supgradient ascent resolves marginal ones.
struct MembershipProbe {
  bool member = false;
  double max_gap = 0.0;  // max of h found; > 0 certifies non-membership
  MatD direction;        // argmax
};
MembershipProbe membership_oracle(const MatD& x_star, const MatD& omega,
                                  const FluidParams& params, uint64_t seed, int samples = 10000,
                                  int ascent_starts = 8, int ascent_iters = 400);

}  // namespace ysl

#endif
