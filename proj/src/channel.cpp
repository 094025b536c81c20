// SPDX-License-Identifier: Apache-2.0

#include "ysl/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ysl/constitutive.hpp"
#include "ysl/expr.hpp"
#include "ysl/subdiff.hpp"

namespace ysl {

namespace {

// Face-stress evaluator. The acceptance-scale runs sit in the
// p=q=2, nu=0, mu2=0 corner where the tensor law collapses to
//   S12(g) = mu1 g / 2 + tau_star (g/2) / sqrt(g^2/2 + 1/n),
// which the hot loop uses directly; everything else goes through the
// full MatD path. The two paths agree to rounding (unit-tested).
struct ShearLaw {
  FluidParams params;
  int64_t n = 1;
  bool fast = false;
  double inv_n = 1.0;

  ShearLaw(const FluidParams& p, int64_t reg_n) : params(p), n(reg_n) {
    inv_n = 1.0 / static_cast<double>(n);
    fast = (p.p == 2.0 && p.q == 2.0 && p.nu == 0.0 && p.mu2 == 0.0);
  }

  double operator()(double g, double w) const {
    if (fast) {
      const double half = 0.5 * g;
      return params.mu1 * half + params.tau_star * half / std::sqrt(half * g + inv_n);
    }
    return assemble_shear_stress_impl(g, w);
  }

  double assemble_shear_stress_impl(double g, double w) const {
    MatD b(2);
    b(0, 1) = g;
    return stress_regularized(b, antisym2(w), params, n)(0, 1);
  }
};

// Root of the strictly monotone wall-closure function by bracket
// expansion + bisection.
template <typename F>
double solve_monotone(F&& f, double guess, double scale) {
  double r = std::max(1e-9 * scale, 0.5 * std::abs(guess) + 1e-12 * scale);
  double lo = guess - r, hi = guess + r;
  double flo = f(lo), fhi = f(hi);
  int tries = 0;
  while (flo * fhi > 0.0 && tries++ < 200) {
    r *= 8.0;
    lo = guess - r;
    hi = guess + r;
    flo = f(lo);
    fhi = f(hi);
  }
  if (flo * fhi > 0.0) throw DivergedError("wall closure failed to bracket a root");
  for (int it = 0; it < 90; ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (fhi > 0.0)) {
      hi = mid;
      fhi = fm;
    } else {
      lo = mid;
      flo = fm;
    }
    if (hi - lo <= 1e-16 * (1.0 + std::abs(mid))) break;
  }
  return 0.5 * (lo + hi);
}

double probe_max_slope(const ShearLaw& law, const std::vector<double>& w_faces, double g_max) {
  // probe the rotation extremes plus a few interior values
  double w_min = 0.0, w_max = 0.0;
  for (double w : w_faces) {
    w_min = std::min(w_min, w);
    w_max = std::max(w_max, w);
  }
  std::vector<double> w_probe = {0.0, w_min, w_max, 0.5 * w_min, 0.5 * w_max};
  if (!w_faces.empty()) w_probe.push_back(w_faces[w_faces.size() / 2]);

  double max_slope = 0.0;
  for (double w : w_probe) {
    for (int k = -60; k <= 20; ++k) {
      double g = (k == -60) ? 0.0 : g_max * std::pow(10.0, 0.25 * k);
      for (double sign : {1.0, -1.0}) {
        double gg = sign * g;
        double h = std::max(1e-9, 1e-6 * std::abs(gg));
        double slope = (law(gg + h, w) - law(gg - h, w)) / (2.0 * h);
        max_slope = std::max(max_slope, std::abs(slope));
      }
    }
  }
  return max_slope;
}

}  // namespace

int64_t ChannelConfig::coupling_rule_n() const {
  const double tau_eff = params.tau_hat() / std::sqrt(2.0);
  const double mu_eff = params.mu1 / 2.0;
  const double g = std::abs(body_force);
  if (tau_eff <= 0.0 || g <= 0.0) return 1;
  double n = std::pow(tau_eff / (mu_eff * dy() * g), 2.0);
  return static_cast<int64_t>(std::clamp(std::ceil(n), 1.0, 1e12));
}

double assemble_shear_stress(double u_y, double w, const FluidParams& params, int64_t reg_n) {
  MatD b(2);
  b(0, 1) = u_y;
  return stress_regularized(b, antisym2(w), params, reg_n)(0, 1);
}

double bingham_channel_analytic(double y, double G, double h, double mu_eff, double tau_eff) {
  const double yc = tau_eff / G;
  if (yc >= h) return 0.0;  // below yield: no flow
  const double ya = std::min(std::abs(y), h);
  const double u_plug = G * (h - yc) * (h - yc) / (2.0 * mu_eff);
  if (ya <= yc) return u_plug;
  return u_plug - G * (ya - yc) * (ya - yc) / (2.0 * mu_eff);
}

namespace {

// Wall friction grad g(u): the built-in Navier case alpha u, or a
// user-supplied convex g via an expression for grad g in u.
struct WallFriction {
  bool linear = true;
  double alpha = 0.0;
  Expr expr;

  static WallFriction make(const ChannelConfig& config) {
    WallFriction f;
    if (config.friction_expr.empty()) {
      f.alpha = config.alpha;
      return f;
    }
    f.linear = false;
    f.expr = Expr::parse(config.friction_expr);
    // (condition for g): grad g(u) u >= 0 and |grad g(u)| <= c |u|
    double c_bound = 0.0;
    for (int e = -6; e <= 2; ++e) {
      for (double sgn : {1.0, -1.0}) {
        double u = sgn * std::pow(10.0, e);
        double g = f.expr.eval({{"u", u}});
        if (g * u < -1e-12 * std::abs(u))
          throw ConfigError("/friction", "grad g(u) u must be non-negative");
        c_bound = std::max(c_bound, std::abs(g) / std::abs(u));
      }
    }
    if (std::abs(f.expr.eval({{"u", 0.0}})) > 0.0)
      throw ConfigError("/friction", "grad g(0) must vanish (|grad g(u)| <= c|u|)");
    if (!std::isfinite(c_bound))
      throw ConfigError("/friction", "grad g grows faster than linearly on the probe range");
    return f;
  }

  double operator()(double u) const {
    if (linear) return alpha * u;
    return expr.eval({{"u", u}});
  }
};

// Shared update kernel: face stresses, wall closures and the explicit
// conservative step, with the energy tallies of the pre-step state.
struct Stepper {
  ShearLaw law;
  WallFriction friction;
  std::vector<double> w_face;
  double dy;
  double g_force;

  struct Rates {
    double d_rate = 0.0, b_rate = 0.0, f_rate = 0.0;
    double k_old = 0.0, k_new = 0.0, max_du = 0.0;
  };

  Rates advance(std::vector<double>& u, double& uw_left, double& uw_right,
                std::vector<double>& s_face, double dt) const {
    const size_t nc = u.size();
    for (size_t j = 1; j < nc; ++j) {
      double g = (u[j] - u[j - 1]) / dy;
      s_face[j] = law(g, w_face[j]);
    }
    // wall closures: S(g_w) + grad g(u_w) = 0 (right), -S(g_w) + grad g(u_w) = 0 (left)
    const double half = 0.5 * dy;
    uw_right = solve_monotone(
        [&](double uw) { return law((uw - u[nc - 1]) / half, w_face[nc]) + friction(uw); },
        uw_right, 1.0 + std::abs(u[nc - 1]));
    uw_left = solve_monotone(
        [&](double uw) { return -law((u[0] - uw) / half, w_face[0]) + friction(uw); },
        uw_left, 1.0 + std::abs(u[0]));
    s_face[nc] = law((uw_right - u[nc - 1]) / half, w_face[nc]);
    s_face[0] = law((u[0] - uw_left) / half, w_face[0]);

    Rates r;
    r.d_rate = s_face[nc] * (uw_right - u[nc - 1]) + s_face[0] * (u[0] - uw_left);
    r.b_rate = friction(uw_right) * uw_right + friction(uw_left) * uw_left;

    // explicit conservative update (energy tallies fused in)
    double usum = 0.0;
    double u_prev = u[0];
    for (size_t i = 0; i < nc; ++i) {
      if (i > 0) {
        r.d_rate += s_face[i] * (u[i] - u_prev);
        u_prev = u[i];
      }
      usum += u[i];
      double du = dt * ((s_face[i + 1] - s_face[i]) / dy + g_force);
      r.k_old += u[i] * u[i];
      u[i] += du;
      r.k_new += u[i] * u[i];
      r.max_du = std::max(r.max_du, std::abs(du));
    }
    r.f_rate = g_force * usum * dy;
    r.k_old *= 0.5 * dy;
    r.k_new *= 0.5 * dy;
    return r;
  }
};

Stepper make_stepper(const ChannelConfig& config, int64_t reg_n) {
  Expr omega = Expr::parse(config.omega_expr);
  std::vector<double> w_face(static_cast<size_t>(config.cells) + 1);
  const double h = config.half_width;
  const double dy = config.dy();
  for (int j = 0; j <= config.cells; ++j)
    w_face[static_cast<size_t>(j)] = omega.eval({{"y", -h + j * dy}});
  return Stepper{ShearLaw(config.params, reg_n), WallFriction::make(config), std::move(w_face),
                 dy, config.body_force};
}

double stable_dt(const ChannelConfig& config, const Stepper& stepper) {
  // Gershgorin bound on the diffusion Jacobian (walls included):
  // eigenvalues <= 4 S'max/dy^2, explicit Euler stable for
  // dt <= dy^2 / (2 S'max)
  double g_scale =
      std::abs(config.body_force) * config.half_width /
          std::max(config.params.mu1 / 2.0, 1e-12) +
      1.0;
  const double slope = probe_max_slope(stepper.law, stepper.w_face, g_scale);
  return config.dy() * config.dy() / (2.0 * std::max(slope, 1e-300));
}

}  // namespace

ChannelState channel_step(const ChannelState& state, const ChannelConfig& config, double dt) {
  config.params.validate();
  if (static_cast<int>(state.u.size()) != config.cells)
    throw std::invalid_argument("state size does not match config.cells");
  const int64_t reg_n = config.reg_n > 0 ? config.reg_n : config.coupling_rule_n();
  Stepper stepper = make_stepper(config, reg_n);
  if (dt > stable_dt(config, stepper))
    throw ConfigError("/dt", "violates the stability bound dt <= dy^2/(2 max dS/du_y)");
  ChannelState next = state;
  std::vector<double> s_face(state.u.size() + 1, 0.0);
  stepper.advance(next.u, next.wall_left, next.wall_right, s_face, dt);
  next.t = state.t + dt;
  return next;
}

ChannelResult run_to_steady(const ChannelConfig& config) {
  config.params.validate();
  const int n_cells = config.cells;
  if (n_cells < 4) throw ConfigError("/cells", "need at least 4 cells");
  const double h = config.half_width;
  const double dy = config.dy();
  const int64_t reg_n = config.reg_n > 0 ? config.reg_n : config.coupling_rule_n();
  Stepper stepper = make_stepper(config, reg_n);

  const double dt_stable = stable_dt(config, stepper);
  double dt = config.dt;
  if (dt <= 0.0) {
    dt = config.cfl_safety * dt_stable;
  } else if (dt > dt_stable) {
    throw ConfigError("/dt", "violates the stability bound dt <= dy^2/(2 max dS/du_y) = " +
                                 std::to_string(dt_stable));
  }

  std::vector<double> u(static_cast<size_t>(n_cells), 0.0);
  std::vector<double> s_face(static_cast<size_t>(n_cells) + 1, 0.0);

  ChannelResult res;
  res.dt = dt;
  res.reg_n = reg_n;
  res.y.resize(static_cast<size_t>(n_cells));
  for (int i = 0; i < n_cells; ++i) res.y[static_cast<size_t>(i)] = -h + (i + 0.5) * dy;

  int64_t max_steps = static_cast<int64_t>(std::ceil(config.t_end / dt));
  int stride = config.ledger_stride > 0
                   ? config.ledger_stride
                   : std::max<int64_t>(1, max_steps / 2000);

  double uw_left = 0.0, uw_right = 0.0;
  double kinetic0 = 0.0, diss = 0.0, bwork = 0.0, fwork = 0.0;
  double kinetic = 0.0;
  res.min_dissipation_rate = 0.0;
  double min_diss_rate = std::numeric_limits<double>::infinity();

  auto emit = [&](double t, double residual_cum) {
    res.ledger.push_back({t, kinetic, diss, bwork, fwork, residual_cum});
  };
  emit(0.0, 0.0);

  bool steady = false;
  int64_t step_count = 0;
  double t = 0.0;

  while (step_count < max_steps) {
    Stepper::Rates r = stepper.advance(u, uw_left, uw_right, s_face, dt);

    diss += dt * r.d_rate;
    bwork += dt * r.b_rate;
    fwork += dt * r.f_rate;
    min_diss_rate = std::min(min_diss_rate, r.d_rate);
    double step_residual =
        std::abs((r.k_new - r.k_old) + dt * (r.d_rate + r.b_rate - r.f_rate));
    res.max_step_residual = std::max(res.max_step_residual, step_residual);
    kinetic = r.k_new;

    ++step_count;
    t = static_cast<double>(step_count) * dt;

    if (step_count % stride == 0 || step_count == max_steps)
      emit(t, std::abs(kinetic - kinetic0 + diss + bwork - fwork));

    if (step_count % 512 == 0 && !std::isfinite(r.k_new))
      throw DivergedError("channel solver produced a non-finite state");

    if (r.max_du / dt < config.steady_tol) {
      steady = true;
      emit(t, std::abs(kinetic - kinetic0 + diss + bwork - fwork));
      break;
    }
  }
  if (!std::isfinite(kinetic)) throw DivergedError("channel solver produced a non-finite state");

  res.u = u;
  res.s12 = s_face;
  res.t_final = t;
  res.steps = step_count;
  res.steady = steady;
  res.min_dissipation_rate = std::isfinite(min_diss_rate) ? min_diss_rate : 0.0;
  res.wall_velocity_left = uw_left;
  res.wall_velocity_right = uw_right;

  ChannelConfig cfg_n = config;
  cfg_n.reg_n = reg_n;
  res.plug_intervals = extract_plug(u, cfg_n);
  const size_t nc = static_cast<size_t>(n_cells);
  res.plug_flag.assign(nc, 0);
  for (size_t i = 0; i < nc; ++i) {
    double yc = res.y[i];
    for (const PlugInterval& iv : res.plug_intervals)
      if (yc >= iv.lo && yc <= iv.hi) res.plug_flag[i] = 1;
  }
  return res;
}

std::vector<PlugInterval> extract_plug(const std::vector<double>& u,
                                       const ChannelConfig& config) {
  std::vector<PlugInterval> out;
  if (config.params.tau_star == 0.0) return out;  // no yield stress, no plug
  const int n_cells = config.cells;
  const double dy = config.dy();
  const double h = config.half_width;
  const int64_t reg_n = config.reg_n > 0 ? config.reg_n : config.coupling_rule_n();
  const double tol =
      std::max(1e-8, config.plug_tol_scale / std::sqrt(static_cast<double>(reg_n)));

  Expr omega = Expr::parse(config.omega_expr);
  // classify interior faces; wall faces are attributed the adjacent state
  std::vector<int> face_plug(static_cast<size_t>(n_cells) + 1, 0);
  for (int j = 1; j < n_cells; ++j) {
    double y = -h + j * dy;
    double g = (u[static_cast<size_t>(j)] - u[static_cast<size_t>(j) - 1]) / dy;
    MatD b(2);
    b(0, 1) = g;
    face_plug[static_cast<size_t>(j)] =
        classify_plug(b, antisym2(omega.eval({{"y", y}})), config.params, tol) == PlugClass::Plug;
  }
  face_plug[0] = face_plug[1];
  face_plug[static_cast<size_t>(n_cells)] = face_plug[static_cast<size_t>(n_cells) - 1];

  int start = -1;
  for (int j = 0; j <= n_cells; ++j) {
    bool plug = face_plug[static_cast<size_t>(j)] != 0;
    if (plug && start < 0) start = j;
    if ((!plug || j == n_cells) && start >= 0) {
      int end = plug ? j : j - 1;
      if (end > start)  // ignore single-face artifacts
        out.push_back({-h + start * dy, -h + end * dy});
      start = -1;
    }
  }
  return out;
}

}  // namespace ysl
