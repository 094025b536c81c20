// SPDX-License-Identifier: Apache-2.0

#ifndef YSL_CHANNEL_HPP
#define YSL_CHANNEL_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "ysl/params.hpp"
#include "ysl/tensor.hpp"

namespace ysl {

/// Plane-shear transient solver configuration. The channel occupies
/// y in [-h, h] with N cells; u(y,t) is driven by the body force G and
/// closed at both walls by the Navier friction condition
/// S12 n + alpha u = 0 (no-slip is the alpha -> infinity limit, realized
/// as alpha = 1e8).
struct ChannelConfig {
  double half_width = 1.0;
  int cells = 400;
  double dt = 0.0;          // 0 = auto from the probed stability bound
  double t_end = 10.0;
  double body_force = 1.0;  // G
  double alpha = 1e8;
  FluidParams params;
  int64_t reg_n = 0;        // 0 = auto from the coupling rule
  std::string omega_expr = "0";  // micro-rotation scalar w(y)
  /// Gradient of the boundary function g as an expression in the wall
  /// velocity u. Empty selects the built-in g = alpha |u|^2 / 2, i.e.
  /// grad g = alpha u. Must satisfy grad_g(u) u >= 0 and be
  /// nondecreasing (g convex).
  std::string friction_expr;
  double steady_tol = 1e-6;
  double plug_tol_scale = 2.6;   // C in tol_plug = max(1e-8, C/sqrt(reg_n))
  int ledger_stride = 0;         // 0 = auto (~2000 rows)
  double cfl_safety = 0.9;

  /// reg_n >= (tau_eff / (mu_eff dy G))^2 keeps the regularized plug
  /// boundary layer below one cell (tau_eff = tau_hat/sqrt(2),
  /// mu_eff = mu1/2 in the scalar shear reduction).
  int64_t coupling_rule_n() const;

  double dy() const { return 2.0 * half_width / cells; }
};

/// One emitted energy-ledger row; all integrals are cumulative from t=0.
struct LedgerRow {
  double t = 0.0;
  double kinetic = 0.0;
  double dissipation = 0.0;
  double boundary_work = 0.0;
  double forcing_work = 0.0;
  double residual = 0.0;  // |K - K0 + dissipation + boundary_work - forcing_work|
};

struct PlugInterval {
  double lo = 0.0, hi = 0.0;
};

struct ChannelResult {
  std::vector<double> y;        // cell centers
  std::vector<double> u;        // final profile
  std::vector<double> s12;      // face stresses (cells+1 of them)
  std::vector<int> plug_flag;   // per cell
  std::vector<PlugInterval> plug_intervals;
  std::vector<LedgerRow> ledger;
  double t_final = 0.0;
  int64_t steps = 0;
  bool steady = false;
  double max_step_residual = 0.0;  // max over steps of the per-step identity residual
  double min_dissipation_rate = 0.0;
  double wall_velocity_left = 0.0, wall_velocity_right = 0.0;
  double dt = 0.0;
  int64_t reg_n = 0;
};

/// S12 component of the regularized stress for the shear gradient u_y,
/// built from the full tensor law (B has the single nonzero entry
/// B_01 = u_y; w is the scalar micro-rotation).
double assemble_shear_stress(double u_y, double w, const FluidParams& params, int64_t reg_n);

/// Cell velocities plus the wall velocities closed by the friction
/// condition; one explicit conservative update advances it by dt.
struct ChannelState {
  std::vector<double> u;
  double wall_left = 0.0, wall_right = 0.0;
  double t = 0.0;
};

/// One step of the explicit conservative scheme
///   u_i <- u_i + dt ((S_{i+1/2} - S_{i-1/2})/dy + G),
/// wall faces closed by S12 n + grad g(u_w) = 0. Convenience API; the
/// marching loop in run_to_steady applies the identical update.
ChannelState channel_step(const ChannelState& state, const ChannelConfig& config, double dt);

/// March the explicit conservative scheme to steady state (or t_end).
ChannelResult run_to_steady(const ChannelConfig& config);

/// Maximal plug intervals of a steady profile, classified per face with
/// tol_plug = max(1e-8, C/sqrt(reg_n)). Empty when tau_star = 0.
std::vector<PlugInterval> extract_plug(const std::vector<double>& u, const ChannelConfig& config);

/// Piecewise steady Bingham profile (p=q=2, nu=0, mu2=0, no slip):
/// plug core |y| <= y_c = tau_eff/G, parabolic flanks. Test oracle.
double bingham_channel_analytic(double y, double G, double h, double mu_eff, double tau_eff);

}  // namespace ysl

#endif
