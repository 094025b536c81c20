// SPDX-License-Identifier: Apache-2.0

#ifndef YSL_PARAMS_HPP
#define YSL_PARAMS_HPP

#include <cmath>

#include "ysl/errors.hpp"

namespace ysl {

/// Numerical tolerances shared across the library. Every scale-aware
/// threshold is derived from these; keep them in one place.
struct Tolerances {
  /// Plug classification: |B_nu| <= plug_rel * max(1, |B|).
  double plug_rel = 1e-12;
  /// Relative tolerance on the q'-norm membership inequality.
  double membership_rel = 1e-10;
  /// Central finite-difference step for gradient checks.
  double fd_step = 1e-6;

  static const Tolerances& defaults() {
    static const Tolerances t{};
    return t;
  }
};

/// Model constants of the stress family. mu1/mu2 are the viscosity
/// coefficients, nu the plug parameter, tau_star the yield stress, and
/// p,q >= 2 the power-law exponents. a1/a2 appear only in the implicit
/// Cosserat-Bingham law.
struct FluidParams {
  double mu1 = 1.0;
  double mu2 = 0.0;
  double nu = 0.0;
  double tau_star = 0.0;
  double p = 2.0;
  double q = 2.0;
  double a1 = 0.0;
  double a2 = 0.0;

  void validate() const {
    if (!(mu1 > 0.0)) throw std::invalid_argument("mu1 must be > 0");
    if (!(mu2 >= 0.0)) throw std::invalid_argument("mu2 must be >= 0");
    if (!(nu >= 0.0)) throw std::invalid_argument("nu must be >= 0");
    if (!(tau_star >= 0.0)) throw std::invalid_argument("tau_star must be >= 0");
    if (!(p >= 2.0)) throw std::invalid_argument("p must be >= 2");
    if (!(q >= 2.0)) throw std::invalid_argument("q must be >= 2");
    if (!(a1 >= 0.0)) throw std::invalid_argument("a1 must be >= 0");
    if (!(a2 >= 0.0)) throw std::invalid_argument("a2 must be >= 0");
  }

  /// Effective yield coefficient tau_star / max(1, nu^(1/q)).
  double tau_hat() const { return tau_star / std::max(1.0, std::pow(nu, 1.0 / q)); }

  /// The potential V (and everything derived from its convexity) exists
  /// only when nu > 0, or nu = 0 together with mu2 = 0.
  bool potentials_admissible() const { return nu > 0.0 || mu2 == 0.0; }

  void require_potentials() const {
    if (!potentials_admissible()) throw PotentialUnavailable();
  }
};

}  // namespace ysl

#endif
