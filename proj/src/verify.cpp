// SPDX-License-Identifier: Apache-2.0

#include "ysl/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ysl/constitutive.hpp"
#include "ysl/field.hpp"
#include "ysl/rng.hpp"
#include "ysl/subdiff.hpp"

namespace ysl::verify {

using nlohmann::json;

json matrix_json(const MatD& m) {
  json out = json::array();
  for (int i = 0; i < m.dim; ++i)
    for (int j = 0; j < m.dim; ++j) out.push_back(m(i, j));
  return out;
}

json params_json(const FluidParams& p) {
  return json{{"mu1", p.mu1}, {"mu2", p.mu2},           {"nu", p.nu}, {"tau_star", p.tau_star},
              {"p", p.p},     {"q", p.q},               {"a1", p.a1}, {"a2", p.a2}};
}

json SuiteReport::to_json() const {
  return json{{"suite", suite},   {"seed", seed},       {"samples", samples},
              {"pass", pass},     {"params", params},   {"worst_margin", worst_margin},
              {"details", details}, {"failures", failures}};
}

namespace {

// Matrix entries i.i.d. uniform[-2,2] plus curated near-plug samples
// (|X_nu| in [1e-8, 1e-2]); violations concentrate near the plug manifold.
MatD sample_x(Rng& rng, const MatD& omega, const FluidParams& params, int dim) {
  if (rng.canonical() < 0.85) return rng.matrix(dim);
  double delta = std::pow(10.0, rng.uniform(-8.0, -2.0));
  if (params.nu > 0.0) return omega + delta * rng.unit_matrix(dim);
  // nu = 0 plug manifold is X_s = 0
  return rng.antisymmetric(dim) + delta * rng.unit_symmetric(dim);
}

struct ParamGridPoint {
  FluidParams params;
  MatD omega;
};

json grid_params_json(const std::vector<ParamGridPoint>& grid) {
  json out = json::array();
  for (const auto& gp : grid) out.push_back(params_json(gp.params));
  return out;
}

std::vector<ParamGridPoint> standard_grid(Rng& rng, int dim) {
  std::vector<ParamGridPoint> grid;
  for (double p : {2.0, 2.2, 3.0}) {
    for (double q : {2.0, 3.0}) {
      for (double nu : {0.0, 0.5, 1.0, 4.0}) {
        FluidParams fp;
        fp.mu1 = 1.0;
        fp.mu2 = (nu == 0.0) ? 0.0 : 0.7;  // potentials need mu2=0 when nu=0
        fp.nu = nu;
        fp.tau_star = 0.8;
        fp.p = p;
        fp.q = q;
        grid.push_back({fp, rng.antisymmetric(dim, -1.0, 1.0)});
      }
    }
  }
  return grid;
}

}  // namespace

SuiteReport suite_coercivity(const SuiteOptions& opt) {
  SuiteReport rep;
  rep.suite = "coercivity";
  rep.seed = opt.seed;
  const int64_t n_samples = opt.samples > 0 ? opt.samples : 100000;
  const int dim = 3;
  Rng rng(opt.seed);
  auto grid = standard_grid(rng, dim);
  rep.params = grid_params_json(grid);

  double worst = std::numeric_limits<double>::infinity();
  json per_grid = json::array();
  for (const auto& gp : grid) {
    double grid_worst = std::numeric_limits<double>::infinity();
    for (int64_t s = 0; s < n_samples; ++s) {
      MatD x = sample_x(rng, gp.omega, gp.params, dim);
      CoercivityBounds b = coercivity_bounds(x, gp.omega, gp.params);
      double upper = b.upper;
      if (opt.c1_scale != 1.0) {
        // mutation control: scaling c1 by f shifts the upper bound by
        // (f-1) c1 |X|^p
        double p = gp.params.p;
        double c1 = gp.params.mu1 +
                    std::pow(2.0, p - 2.0) * gp.params.mu2 * (1.0 + 1.0 / p);
        upper = b.upper - (1.0 - opt.c1_scale) * c1 * std::pow(norm(x), p);
      }

      double scale = std::max({1.0, std::abs(b.lower), std::abs(upper)});
      // V'(X;X)
      double v_val = dir_deriv_V(x, x, gp.omega, gp.params);
      // V^n'(X;X) = S^n(X) : X at a sampled regularization level
      int64_t n = (s % 3 == 0) ? 1 : (s % 3 == 1 ? 1000 : 1000000000LL);
      double vn_val = inner(stress_regularized(x, gp.omega, gp.params, n), x);

      for (double val : {v_val, vn_val}) {
        double m = std::min(val - b.lower, upper - val) / scale;
        grid_worst = std::min(grid_worst, m);
        if (m < -1e-9) {
          rep.pass = false;
          if (rep.failures.size() < 16)
            rep.failures.push_back(json{{"x", matrix_json(x)},
                                        {"omega", matrix_json(gp.omega)},
                                        {"params", params_json(gp.params)},
                                        {"value", val},
                                        {"lower", b.lower},
                                        {"upper", upper},
                                        {"n", n}});
        }
      }
      rep.samples += 2;
    }
    worst = std::min(worst, grid_worst);
    per_grid.push_back(json{{"params", params_json(gp.params)}, {"worst_margin", grid_worst}});
  }
  rep.worst_margin = worst;
  rep.details = json{{"per_grid", per_grid}, {"c1_scale", opt.c1_scale}};
  return rep;
}

SuiteReport suite_subgradient(const SuiteOptions& opt) {
  SuiteReport rep;
  rep.suite = "subgradient";
  rep.seed = opt.seed;
  const int64_t n_samples = opt.samples > 0 ? opt.samples : 20000;
  const int dim = 3;
  Rng rng(opt.seed + 1);
  auto grid = standard_grid(rng, dim);
  rep.params = grid_params_json(grid);

  double worst = std::numeric_limits<double>::infinity();
  for (const auto& gp : grid) {
    for (int64_t s = 0; s < n_samples; ++s) {
      MatD x = sample_x(rng, gp.omega, gp.params, dim);
      MatD y = sample_x(rng, gp.omega, gp.params, dim);
      double vx = potential_V(x, gp.omega, gp.params);
      double vy = potential_V(y, gp.omega, gp.params);
      double scale = std::max({1.0, std::abs(vx), std::abs(vy)});

      StressResult sr = stress_exact(x, gp.omega, gp.params);
      if (sr.is_flow()) {
        double gap = vy - vx - inner(sr.stress, y - x);
        worst = std::min(worst, gap / scale);
        if (gap / scale < -1e-9) {
          rep.pass = false;
          if (rep.failures.size() < 16)
            rep.failures.push_back(json{{"kind", "exact"},
                                        {"x", matrix_json(x)},
                                        {"y", matrix_json(y)},
                                        {"omega", matrix_json(gp.omega)},
                                        {"params", params_json(gp.params)},
                                        {"gap", gap}});
        }
      }
      // regularized subgradient inequality V^n(Y) - V^n(X) >= S^n : (Y-X)
      int64_t n = (s % 3 == 0) ? 1 : (s % 3 == 1 ? 1000 : 100000000LL);
      double gap_n = potential_Vn(y, gp.omega, gp.params, n) -
                     potential_Vn(x, gp.omega, gp.params, n) -
                     inner(stress_regularized(x, gp.omega, gp.params, n), y - x);
      worst = std::min(worst, gap_n / scale);
      if (gap_n / scale < -1e-9) {
        rep.pass = false;
        if (rep.failures.size() < 16)
          rep.failures.push_back(json{{"kind", "regularized"},
                                      {"x", matrix_json(x)},
                                      {"y", matrix_json(y)},
                                      {"omega", matrix_json(gp.omega)},
                                      {"params", params_json(gp.params)},
                                      {"n", n},
                                      {"gap", gap_n}});
      }
      rep.samples += 2;
    }
  }

  // Plug membership: ellipsoid test against the sampled VI oracle on
  // boundary-straddling points (margins beyond +-1%).
  int agree = 0, checked = 0;
  for (const auto& gp : grid) {
    if (gp.params.nu == 0.0) continue;
    FluidParams params = gp.params;
    for (int t = 0; t < 6; ++t) {
      double factor = (t % 2 == 0) ? rng.uniform(1.02, 1.6) : rng.uniform(0.4, 0.98);
      MatD dir = rng.unit_matrix(dim);
      // scale dir onto the ellipsoid boundary, then push in/out
      auto [ds, da] = decompose(dir);
      double qp = params.q / (params.q - 1.0);
      double e = std::pow(norm(ds), qp) +
                 std::pow(params.nu, 1.0 - qp) * std::pow(norm(da), qp);
      double on_boundary = std::pow(std::pow(params.tau_hat(), qp) / e, 1.0 / qp);
      MatD x_star = (factor * on_boundary) * dir;
      bool member = in_subdifferential_at_plug(x_star, gp.omega, params);
      MembershipProbe probe =
          membership_oracle(x_star, gp.omega, params, rng.integer(), 2000, 6, 300);
      ++checked;
      if (member == probe.member) {
        ++agree;
      } else {
        rep.pass = false;
        if (rep.failures.size() < 16)
          rep.failures.push_back(json{{"kind", "membership"},
                                      {"x_star", matrix_json(x_star)},
                                      {"omega", matrix_json(gp.omega)},
                                      {"params", params_json(params)},
                                      {"ellipsoid_member", member},
                                      {"oracle_gap", probe.max_gap}});
      }
      rep.samples += 1;
    }
  }

  // nu = 0 classical description: members are exactly the shifted
  // symmetric ball.
  {
    FluidParams params;
    params.mu1 = 1.0;
    params.mu2 = 0.0;
    params.nu = 0.0;
    params.tau_star = 0.8;
    MatD omega = rng.antisymmetric(dim);
    MatD plug_x = rng.antisymmetric(dim);  // X_s = 0
    for (int t = 0; t < 200; ++t) {
      MatD m = rng.unit_symmetric(dim);
      double r = rng.uniform(0.0, 2.0) * params.tau_star;
      MatD x_star = r * m;
      bool inside = r <= params.tau_star;
      bool got = in_subdifferential_at_plug(x_star, omega, params, plug_x);
      if (std::abs(r - params.tau_star) < 1e-6 * params.tau_star) continue;  // boundary band
      if (got != inside) {
        rep.pass = false;
        rep.failures.push_back(json{{"kind", "bingham_sd"},
                                    {"x_star", matrix_json(x_star)},
                                    {"r", r}});
      }
      // any antisymmetric contamination must reject
      MatD bad = x_star + 0.05 * rng.unit_antisymmetric(dim);
      if (in_subdifferential_at_plug(bad, omega, params, plug_x)) {
        rep.pass = false;
        rep.failures.push_back(json{{"kind", "bingham_sd_asym"}, {"x_star", matrix_json(bad)}});
      }
      rep.samples += 2;
    }
  }

  rep.worst_margin = worst;
  rep.details = json{{"membership_checked", checked}, {"membership_agree", agree}};
  return rep;
}

SuiteReport suite_monotonicity(const SuiteOptions& opt) {
  SuiteReport rep;
  rep.suite = "monotonicity";
  rep.seed = opt.seed;
  rep.params = json::array();
  const int64_t n_pairs = opt.samples > 0 ? opt.samples : 100000;
  const int dim = 3;
  Rng rng(opt.seed + 2);

  double worst = std::numeric_limits<double>::infinity();
  double worst_sn = std::numeric_limits<double>::infinity();
  json per_grid = json::array();
  for (double nu : {0.0, 0.3, 1.0, 5.0}) {
    for (double q : {2.0, 2.5, 4.0}) {
      FluidParams params;
      params.nu = nu;
      params.q = q;
      params.tau_star = 0.8;
      MatD omega = rng.antisymmetric(dim, -1.0, 1.0);
      rep.params.push_back(params_json(params));
      double grid_worst = std::numeric_limits<double>::infinity();
      for (int64_t s = 0; s < n_pairs; ++s) {
        MatD x = sample_x(rng, omega, params, dim);
        MatD y = sample_x(rng, omega, params, dim);
        MatD gx, gy;
        try {
          gx = modified_plastic_operator(sym(x), skew(x) - omega, params);
          gy = modified_plastic_operator(sym(y), skew(y) - omega, params);
        } catch (const UndefinedAtPlug&) {
          continue;
        }
        double v = inner(gx - gy, x - y);
        grid_worst = std::min(grid_worst, v);
        if (v < -1e-12) {
          rep.pass = false;
          if (rep.failures.size() < 16)
            rep.failures.push_back(json{{"kind", "mpo"},
                                        {"x", matrix_json(x)},
                                        {"y", matrix_json(y)},
                                        {"omega", matrix_json(omega)},
                                        {"params", params_json(params)},
                                        {"inner", v}});
        }
        // the regularized stress is the gradient of the convex V^n and
        // must itself be a monotone map
        if (s % 8 == 0) {
          int64_t n = (s % 16 == 0) ? 1000 : 1000000;
          MatD sx = stress_regularized(x, omega, params, n);
          MatD sy = stress_regularized(y, omega, params, n);
          double vsn = inner(sx - sy, x - y);
          worst_sn = std::min(worst_sn, vsn);
          if (vsn < -1e-12) {
            rep.pass = false;
            if (rep.failures.size() < 16)
              rep.failures.push_back(json{{"kind", "sn_monotone"},
                                          {"x", matrix_json(x)},
                                          {"y", matrix_json(y)},
                                          {"omega", matrix_json(omega)},
                                          {"params", params_json(params)},
                                          {"n", n},
                                          {"inner", vsn}});
          }
          rep.samples += 1;
        }
        rep.samples += 1;
      }
      worst = std::min(worst, grid_worst);
      per_grid.push_back(
          json{{"nu", nu}, {"q", q}, {"worst_inner", grid_worst}});
    }
  }

  // Counterexample search for the unmodified operator at q=2, nu=0.5:
  // pairs in a random symmetric/antisymmetric section with log-spread
  // radii hit violations at a few-percent rate.
  FluidParams po_params;
  po_params.q = 2.0;
  po_params.nu = 0.5;
  bool found = false;
  json cx;
  MatD zero3 = MatD::zero(dim);
  for (int trial = 0; trial < 50000 && !found; ++trial) {
    MatD us = rng.unit_symmetric(dim);
    MatD ua = rng.unit_antisymmetric(dim);
    double t1 = rng.uniform(0.0, 2.0 * M_PI), t2 = rng.uniform(0.0, 2.0 * M_PI);
    double r1 = std::pow(10.0, rng.uniform(-2.0, 1.0));
    double r2 = std::pow(10.0, rng.uniform(-2.0, 1.0));
    MatD x = r1 * (std::cos(t1) * us + std::sin(t1) * ua);
    MatD y = r2 * (std::cos(t2) * us + std::sin(t2) * ua);
    MatD d = x - y;
    try {
      double po_inner =
          inner(plastic_operator(sym(x), skew(x), po_params) -
                    plastic_operator(sym(y), skew(y), po_params),
                d);
      if (po_inner < -1e-10) {
        double mpo_inner =
            inner(modified_plastic_operator(sym(x), skew(x), po_params) -
                      modified_plastic_operator(sym(y), skew(y), po_params),
                  d);
        found = true;
        cx = json{{"x", matrix_json(x)},         {"y", matrix_json(y)},
                  {"po_inner", po_inner},        {"mpo_inner", mpo_inner},
                  {"omega", matrix_json(zero3)}, {"trial", trial}};
      }
    } catch (const UndefinedAtPlug&) {
      continue;
    }
  }
  if (!found) {
    rep.pass = false;
    rep.failures.push_back(json{{"kind", "po_counterexample_not_found"}});
  }
  rep.worst_margin = worst;
  rep.details = json{{"per_grid", per_grid},
                     {"worst_sn_inner", worst_sn},
                     {"po_counterexample", cx}};
  return rep;
}

SuiteReport suite_korn(const SuiteOptions& opt) {
  SuiteReport rep;
  rep.suite = "korn";
  rep.seed = opt.seed;
  rep.params = json{{"p", {2.0, 2.5, 3.0}}};
  Rng rng(opt.seed + 3);
  const int n_fields = opt.samples > 0 ? static_cast<int>(opt.samples) : 8;

  json fields = json::array();
  double max_ratio = 0.0;
  double worst_stab = 0.0;
  for (double p : {2.0, 2.5, 3.0}) {
    for (int f = 0; f < n_fields; ++f) {
      uint64_t seed = rng.integer();
      Field2D coarse = random_smooth_field(seed, 6, 64);
      Field2D fine = random_smooth_field(seed, 6, 128);
      double r64 = korn_ratio(coarse, p);
      double r128 = korn_ratio(fine, p);
      double stab = std::abs(r128 - r64) / std::max(r64, 1e-12);
      max_ratio = std::max(max_ratio, std::max(r64, r128));
      worst_stab = std::max(worst_stab, stab);
      if (stab > 0.10) {
        rep.pass = false;
        rep.failures.push_back(
            json{{"kind", "stabilization"}, {"seed", seed}, {"p", p}, {"r64", r64},
                 {"r128", r128}});
      }
      fields.push_back(json{{"p", p}, {"seed", seed}, {"r64", r64}, {"r128", r128}});
      rep.samples += 1;
    }
  }

  // special fields on a [-pi,pi) window (non-periodic quadrature)
  auto window = [&](auto&& fill) {
    int n = 96;
    Field2D f = Field2D::zeros(n, n, 2.0 * M_PI / n, 2.0 * M_PI / n, false);
    f.x0 = -M_PI;
    f.y0 = -M_PI;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        double x = f.x0 + i * f.dx, y = f.y0 + j * f.dy;
        auto [uu, vv] = fill(x, y);
        f.u[f.idx(i, j)] = uu;
        f.v[f.idx(i, j)] = vv;
      }
    return f;
  };
  Field2D rigid = window([](double x, double y) { return std::pair{-y, x}; });
  double r_rigid = korn_ratio(rigid, 2.0);
  Field2D shear = window([](double, double y) { return std::pair{y, 0.0}; });
  double r_shear = korn_ratio(shear, 2.0);
  Field2D zero = Field2D::zeros(16, 16, 0.1, 0.1, true);
  double r_zero = korn_ratio(zero, 2.0);
  if (!std::isfinite(r_rigid) || r_rigid <= 0.0) rep.pass = false;
  if (r_shear > std::sqrt(2.0) + 1e-9) rep.pass = false;
  if (r_zero != 0.0) rep.pass = false;
  rep.samples += 3;

  rep.worst_margin = 0.10 - worst_stab;
  rep.details = json{{"max_ratio", max_ratio},
                     {"worst_stabilization", worst_stab},
                     {"rigid_rotation_ratio", r_rigid},
                     {"pure_shear_ratio", r_shear},
                     {"zero_field_ratio", r_zero},
                     {"fields", fields}};
  return rep;
}

SuiteReport suite_regularization(const SuiteOptions& opt) {
  SuiteReport rep;
  rep.suite = "regularization";
  rep.seed = opt.seed;
  rep.params = json::array();
  const int dim = 3;
  const int n_points = opt.samples > 0 ? static_cast<int>(opt.samples) : 50;
  Rng rng(opt.seed + 4);
  const std::vector<int64_t> n_list = {100, 10000, 1000000, 100000000};

  json grids = json::array();
  double worst = std::numeric_limits<double>::infinity();
  for (double q : {2.0, 3.0}) {
    for (double nu : {0.0, 0.5, 2.0}) {
      FluidParams params;
      params.mu1 = 1.0;
      params.mu2 = (nu == 0.0) ? 0.0 : 0.5;
      params.nu = nu;
      params.tau_star = 0.8;
      params.p = 2.2;
      params.q = q;
      MatD omega = rng.antisymmetric(dim, -1.0, 1.0);
      rep.params.push_back(params_json(params));
      double tau_hat = params.tau_hat();

      double rate_sum = 0.0;
      int rate_count = 0;
      for (int pt = 0; pt < n_points; ++pt) {
        // flow-branch point: resample until |X_nu| > 0.1
        MatD x = rng.matrix(dim);
        while (norm(sym(x) + params.nu * (skew(x) - omega)) <= 0.1) x = rng.matrix(dim);
        MatD grad = grad_V(x, omega, params);
        double gnorm = norm(grad);
        double v_exact = potential_V(x, omega, params);

        double prev = std::numeric_limits<double>::infinity();
        std::vector<double> errs;
        for (int64_t n : n_list) {
          double err = norm(stress_regularized(x, omega, params, n) - grad);
          errs.push_back(err);
          double mono_margin = prev - err;
          worst = std::min(worst, mono_margin);
          if (mono_margin < 0.0) {
            rep.pass = false;
            if (rep.failures.size() < 16)
              rep.failures.push_back(json{{"kind", "monotone_decay"},
                                          {"x", matrix_json(x)},
                                          {"omega", matrix_json(omega)},
                                          {"params", params_json(params)},
                                          {"n", n},
                                          {"err", err},
                                          {"prev", prev}});
          }
          prev = err;
          // gap bound: V^n - V in (0, tau_hat n^(-1/q)]
          double gap = potential_Vn(x, omega, params, n) - v_exact;
          double bound = tau_hat * std::pow(static_cast<double>(n), -1.0 / params.q);
          if (!(gap > 0.0) || gap > bound * (1.0 + 1e-12)) {
            rep.pass = false;
            if (rep.failures.size() < 16)
              rep.failures.push_back(json{{"kind", "gap_bound"},
                                          {"x", matrix_json(x)},
                                          {"omega", matrix_json(omega)},
                                          {"params", params_json(params)},
                                          {"n", n},
                                          {"gap", gap},
                                          {"bound", bound}});
          }
          rep.samples += 2;
        }
        if (errs.back() > 1e-3 * (1.0 + gnorm)) {
          rep.pass = false;
          if (rep.failures.size() < 16)
            rep.failures.push_back(json{{"kind", "final_error"},
                                        {"x", matrix_json(x)},
                                        {"omega", matrix_json(omega)},
                                        {"params", params_json(params)},
                                        {"err", errs.back()},
                                        {"grad_norm", gnorm}});
        }
        // empirical decay rate (recorded, not asserted)
        if (errs.front() > 0.0 && errs.back() > 0.0) {
          double slope = (std::log(errs.front()) - std::log(errs.back())) /
                         (std::log(static_cast<double>(n_list.back())) -
                          std::log(static_cast<double>(n_list.front())));
          rate_sum += slope;
          ++rate_count;
        }
      }
      grids.push_back(json{{"q", q},
                           {"nu", nu},
                           {"mean_empirical_rate", rate_count ? rate_sum / rate_count : 0.0}});
    }
  }
  rep.worst_margin = worst;
  rep.details = json{{"grids", grids}, {"n_list", n_list}};
  return rep;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"coercivity", "subgradient", "monotonicity",
                                                 "korn", "regularization"};
  return names;
}

SuiteReport run_suite(const std::string& name, const SuiteOptions& opt) {
  if (name == "coercivity") return suite_coercivity(opt);
  if (name == "subgradient") return suite_subgradient(opt);
  if (name == "monotonicity") return suite_monotonicity(opt);
  if (name == "korn") return suite_korn(opt);
  if (name == "regularization") return suite_regularization(opt);
  throw std::invalid_argument("unknown suite '" + name + "'");
}

}  // namespace ysl::verify
