// SPDX-License-Identifier: Apache-2.0

#include "ysl/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>

#include "ysl/channel.hpp"
#include "ysl/constitutive.hpp"
#include "ysl/expr.hpp"
#include "ysl/rng.hpp"
#include "ysl/tensor.hpp"

namespace ysl {

namespace {

constexpr double kDomain = 2.0 * M_PI;

std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}

/// r2c/c2r transform pair on an M x M grid with normalized coefficients.
class Fft2 {
 public:
  explicit Fft2(int m) : m_(m), nspec_(static_cast<size_t>(m) * (m / 2 + 1)) {
    real_.resize(static_cast<size_t>(m) * m);
    spec_ = fftw_alloc_complex(nspec_);
    std::lock_guard<std::mutex> lock(fftw_mutex());
    // MEASURE pays ~0.1 s of planning once per grid size and roughly
    // halves the per-transform cost against ESTIMATE on these sizes
    fwd_ = fftw_plan_dft_r2c_2d(m, m, real_.data(), spec_, FFTW_MEASURE);
    bwd_ = fftw_plan_dft_c2r_2d(m, m, spec_, real_.data(), FFTW_MEASURE);
  }
  ~Fft2() {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
    fftw_free(spec_);
  }
  Fft2(const Fft2&) = delete;
  Fft2& operator=(const Fft2&) = delete;

  void forward(const std::vector<double>& phys, std::vector<std::complex<double>>& out) {
    std::copy(phys.begin(), phys.end(), real_.begin());
    fftw_execute(fwd_);
    out.resize(nspec_);
    const double scale = 1.0 / (static_cast<double>(m_) * m_);
    for (size_t k = 0; k < nspec_; ++k)
      out[k] = std::complex<double>(spec_[k][0], spec_[k][1]) * scale;
  }

  void backward(const std::vector<std::complex<double>>& in, std::vector<double>& phys) {
    for (size_t k = 0; k < nspec_; ++k) {
      spec_[k][0] = in[k].real();
      spec_[k][1] = in[k].imag();
    }
    fftw_execute(bwd_);
    phys.assign(real_.begin(), real_.end());
  }

 private:
  int m_;
  size_t nspec_;
  std::vector<double> real_;
  fftw_complex* spec_;
  fftw_plan fwd_, bwd_;
};

struct Layout {
  int m = 0, k = 0;
  int cols() const { return m / 2 + 1; }
  size_t nspec() const { return static_cast<size_t>(m) * cols(); }
  int kx(int i) const { return i; }
  int ky(int j) const { return j <= m / 2 ? j : j - m; }
  size_t at(int j, int i) const { return static_cast<size_t>(j) * cols() + i; }
  bool kept(int j, int i) const { return kx(i) <= k && std::abs(ky(j)) <= k; }
};

void apply_mask(const Layout& lay, std::vector<std::complex<double>>& a) {
  for (int j = 0; j < lay.m; ++j)
    for (int i = 0; i < lay.cols(); ++i)
      if (!lay.kept(j, i)) a[lay.at(j, i)] = 0.0;
}

void project_pair(const Layout& lay, std::vector<std::complex<double>>& u,
                  std::vector<std::complex<double>>& v) {
  for (int j = 0; j < lay.m; ++j) {
    for (int i = 0; i < lay.cols(); ++i) {
      const double kx = lay.kx(i), ky = lay.ky(j);
      const double k2 = kx * kx + ky * ky;
      if (k2 == 0.0) continue;
      size_t s = lay.at(j, i);
      std::complex<double> dot = (kx * u[s] + ky * v[s]) / k2;
      u[s] -= kx * dot;
      v[s] -= ky * dot;
    }
  }
}

struct AuxRates {
  double dissipation = 0.0;  // d/dt of int S^n : B dx (time-integrated)
  double sym_p = 0.0;        // d/dt of int |B_s|^p
};

// Workspaces for one solver instance.
struct Engine {
  Layout lay;
  Fft2 fft;
  FluidParams params;
  int64_t reg_n;
  std::vector<double> w_node;  // micro-rotation scalar per node
  double c0_rate = 0.0;

  std::vector<double> u, v, ux, uy, vx, vy, f1, f2, s11, s12, s21, s22;
  std::vector<std::complex<double>> tmp, h1, h2, h3, h4;

  Engine(const Layout& l, const FluidParams& p, int64_t n, std::vector<double> w)
      : lay(l), fft(l.m), params(p), reg_n(n), w_node(std::move(w)) {
    const double area = std::pow(kDomain / lay.m, 2);
    const double two_pm2 = std::pow(2.0, params.p - 2.0);
    for (double w0 : w_node) {
      double om_norm = std::sqrt(2.0) * std::abs(w0);
      c0_rate += (params.mu2 * two_pm2 * std::pow(om_norm, params.p) +
                  params.tau_star * om_norm) *
                 area;
    }
  }

  void derivative(const std::vector<std::complex<double>>& a, int axis,
                  std::vector<std::complex<double>>& out) {
    out.resize(lay.nspec());
    for (int j = 0; j < lay.m; ++j) {
      for (int i = 0; i < lay.cols(); ++i) {
        size_t s = lay.at(j, i);
        double k = axis == 0 ? lay.kx(i) : lay.ky(j);
        out[s] = std::complex<double>(0.0, k) * a[s];
      }
    }
  }

  // rhs of the spectral system + instantaneous energy rates.
  void rhs(const SpectralState& st, SpectralState& out, AuxRates& rates) {
    const size_t nn = static_cast<size_t>(lay.m) * lay.m;
    const double area = std::pow(kDomain / lay.m, 2);

    fft.backward(st.uhat, u);
    fft.backward(st.vhat, v);
    derivative(st.uhat, 0, tmp);
    fft.backward(tmp, ux);
    derivative(st.uhat, 1, tmp);
    fft.backward(tmp, uy);
    derivative(st.vhat, 0, tmp);
    fft.backward(tmp, vx);
    derivative(st.vhat, 1, tmp);
    fft.backward(tmp, vy);

    rates = AuxRates{};
    MatD b(2), om(2);
    const bool p_is_2 = params.p == 2.0;
    for (size_t k = 0; k < nn; ++k) {
      // convection (v . grad) v
      f1[k] = u[k] * ux[k] + v[k] * uy[k];
      f2[k] = u[k] * vx[k] + v[k] * vy[k];
      // stress, pointwise
      b(0, 0) = ux[k];
      b(0, 1) = uy[k];
      b(1, 0) = vx[k];
      b(1, 1) = vy[k];
      om(0, 1) = w_node[k];
      om(1, 0) = -w_node[k];
      MatD s = stress_regularized(b, om, params, reg_n);
      s11[k] = s(0, 0);
      s12[k] = s(0, 1);
      s21[k] = s(1, 0);
      s22[k] = s(1, 1);
      rates.dissipation += inner(s, b) * area;
      const double ssq = norm_sq(sym(b));
      rates.sym_p += (p_is_2 ? ssq : std::pow(ssq, 0.5 * params.p)) * area;
    }

    fft.forward(f1, h1);
    fft.forward(f2, h2);
    fft.forward(s11, h3);
    fft.forward(s12, h4);
    out.uhat.resize(lay.nspec());
    out.vhat.resize(lay.nspec());
    for (int j = 0; j < lay.m; ++j) {
      for (int i = 0; i < lay.cols(); ++i) {
        size_t s = lay.at(j, i);
        const std::complex<double> ik_x(0.0, static_cast<double>(lay.kx(i)));
        const std::complex<double> ik_y(0.0, static_cast<double>(lay.ky(j)));
        out.uhat[s] = -h1[s] + ik_x * h3[s] + ik_y * h4[s];
      }
    }
    fft.forward(s21, h3);
    fft.forward(s22, h4);
    for (int j = 0; j < lay.m; ++j) {
      for (int i = 0; i < lay.cols(); ++i) {
        size_t s = lay.at(j, i);
        const std::complex<double> ik_x(0.0, static_cast<double>(lay.kx(i)));
        const std::complex<double> ik_y(0.0, static_cast<double>(lay.ky(j)));
        out.vhat[s] = -h2[s] + ik_x * h3[s] + ik_y * h4[s];
      }
    }
    apply_mask(lay, out.uhat);
    apply_mask(lay, out.vhat);
    // mean momentum is conserved; keep the k=0 mode fixed
    out.uhat[0] = 0.0;
    out.vhat[0] = 0.0;
    project_pair(lay, out.uhat, out.vhat);
    out.modes = st.modes;
    out.grid = st.grid;
  }

  void alloc() {
    const size_t nn = static_cast<size_t>(lay.m) * lay.m;
    for (auto* f : {&u, &v, &ux, &uy, &vx, &vy, &f1, &f2, &s11, &s12, &s21, &s22})
      f->assign(nn, 0.0);
  }
};

double parseval_energy(const Layout& lay, const SpectralState& st) {
  double sum = 0.0;
  for (int j = 0; j < lay.m; ++j) {
    for (int i = 0; i < lay.cols(); ++i) {
      size_t s = lay.at(j, i);
      double w = (i == 0 || 2 * i == lay.m) ? 1.0 : 2.0;  // r2c half-plane weight
      sum += w * (std::norm(st.uhat[s]) + std::norm(st.vhat[s]));
    }
  }
  return 0.5 * kDomain * kDomain * sum;
}

std::vector<double> build_omega(const OmegaSpec& spec, int m) {
  const size_t nn = static_cast<size_t>(m) * m;
  std::vector<double> w(nn, 0.0);
  switch (spec.type) {
    case OmegaSpec::Type::Zero:
      break;
    case OmegaSpec::Type::Constant:
      std::fill(w.begin(), w.end(), spec.value);
      break;
    case OmegaSpec::Type::Expression: {
      Expr e = Expr::parse(spec.expr);
      double dx = kDomain / m;
      for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i)
          w[static_cast<size_t>(j) * m + i] = e.eval({{"x", i * dx}, {"y", j * dx}});
      break;
    }
    case OmegaSpec::Type::File: {
      std::ifstream in(spec.path);
      if (!in) throw ConfigError("/omega/path", "cannot open '" + spec.path + "'");
      std::vector<std::vector<double>> rows;
      std::string line;
      while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<double> vals;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) vals.push_back(std::stod(tok));
        rows.push_back(std::move(vals));
      }
      if (rows.size() != nn)
        throw ConfigError("/omega/path", "expected " + std::to_string(nn) + " rows, got " +
                                             std::to_string(rows.size()));
      for (size_t k = 0; k < nn; ++k) {
        if (rows[k].size() == 1) {
          w[k] = rows[k][0];
        } else if (rows[k].size() == 4) {
          MatD o(2);
          o(0, 0) = rows[k][0];
          o(0, 1) = rows[k][1];
          o(1, 0) = rows[k][2];
          o(1, 1) = rows[k][3];
          if (!is_antisymmetric(o))
            throw ConfigError("/omega/path", "row " + std::to_string(k) +
                                                 " fails the antisymmetry check");
          w[k] = o(0, 1);
        } else {
          throw ConfigError("/omega/path", "rows must have 1 or 4 columns");
        }
      }
      break;
    }
  }
  return w;
}

}  // namespace

void leray_project(SpectralState& state) {
  Layout lay{state.grid, state.modes};
  project_pair(lay, state.uhat, state.vhat);
}

double divergence_residual(const SpectralState& state) {
  Layout lay{state.grid, state.modes};
  double worst = 0.0;
  for (int j = 0; j < lay.m; ++j) {
    for (int i = 0; i < lay.cols(); ++i) {
      size_t s = lay.at(j, i);
      double kx = lay.kx(i), ky = lay.ky(j);
      worst = std::max(worst, std::abs(kx * state.uhat[s] + ky * state.vhat[s]));
    }
  }
  return worst;
}

SpectralState taylor_green_state(int modes, int grid, double amplitude) {
  // u = A sin x cos y, v = -A cos x sin y: four modes at |kx|=|ky|=1.
  Layout lay{grid, modes};
  SpectralState st;
  st.modes = modes;
  st.grid = grid;
  st.uhat.assign(lay.nspec(), 0.0);
  st.vhat.assign(lay.nspec(), 0.0);
  // sin x cos y = (e^{ix} - e^{-ix})(e^{iy} + e^{-iy})/4i; r2c keeps kx >= 0:
  // coefficient at (kx=1, ky=+-1) is A/(4i) = -iA/4.
  const std::complex<double> cu(0.0, -amplitude / 4.0);
  const std::complex<double> cv(0.0, amplitude / 4.0);
  st.uhat[lay.at(1, 1)] = cu;               // ky=+1
  st.uhat[lay.at(grid - 1, 1)] = cu;        // ky=-1
  // cos x sin y = (e^{ix}+e^{-ix})(e^{iy}-e^{-iy})/4i: at kx=1: A/(4i) sign(ky)
  st.vhat[lay.at(1, 1)] = cv;
  st.vhat[lay.at(grid - 1, 1)] = -cv;
  return st;
}

SpectralResult integrate(const SpectralConfig& config) {
  config.params.validate();
  const int K = config.modes;
  if (K < 2) throw ConfigError("/modes", "need at least 2 modes");
  const int M = config.grid > 0 ? config.grid : config.auto_grid();
  if (M <= 3 * K) throw ConfigError("/grid", "grid must exceed 3*modes for dealiasing");
  Layout lay{M, K};

  Engine eng(lay, config.params, config.reg_n, build_omega(config.omega, M));
  eng.alloc();

  SpectralState state;
  switch (config.init.type) {
    case InitSpec::Type::TaylorGreen:
      state = taylor_green_state(K, M, config.init.amplitude);
      break;
    case InitSpec::Type::Random: {
      state.modes = K;
      state.grid = M;
      state.uhat.assign(lay.nspec(), 0.0);
      state.vhat.assign(lay.nspec(), 0.0);
      Rng rng(config.init.seed);
      int kb = std::min(config.init.kmax, K);
      for (int j = 0; j < M; ++j) {
        for (int i = 0; i < lay.cols(); ++i) {
          int kx = lay.kx(i), ky = lay.ky(j);
          if (kx > kb || std::abs(ky) > kb || (kx == 0 && ky == 0)) continue;
          if (kx == 0 && ky < 0) continue;  // fixed by conjugate symmetry
          double decay = config.init.amplitude / (1.0 + kx * kx + ky * ky);
          size_t s = lay.at(j, i);
          state.uhat[s] = {rng.uniform(-1, 1) * decay, rng.uniform(-1, 1) * decay};
          state.vhat[s] = {rng.uniform(-1, 1) * decay, rng.uniform(-1, 1) * decay};
          if (kx == 0 && ky > 0) {  // mirror row carries the conjugate
            size_t sm = lay.at(M - ky, 0);
            state.uhat[sm] = std::conj(state.uhat[s]);
            state.vhat[sm] = std::conj(state.vhat[s]);
          }
        }
      }
      project_pair(lay, state.uhat, state.vhat);
      break;
    }
  }

  // stability bound from the probed constitutive slope and the advective speed
  double u_max = 0.0;
  {
    eng.fft.backward(state.uhat, eng.u);
    eng.fft.backward(state.vhat, eng.v);
    for (size_t k = 0; k < eng.u.size(); ++k)
      u_max = std::max(u_max, std::hypot(eng.u[k], eng.v[k]));
  }
  double slope_max = 0.0;
  {
    double wmax = 0.0;
    for (double w : eng.w_node) wmax = std::max(wmax, std::abs(w));
    double g_scale = std::max(1.0, 4.0 * u_max * K);
    for (double w : {0.0, wmax}) {
      for (int e = -48; e <= 16; ++e) {
        double g = (e == -48) ? 0.0 : g_scale * std::pow(10.0, 0.25 * e);
        for (double sgn : {1.0, -1.0}) {
          double gg = sgn * g;
          double h = std::max(1e-9, 1e-6 * std::abs(gg));
          double s1 = assemble_shear_stress(gg + h, w, config.params, config.reg_n);
          double s0 = assemble_shear_stress(gg - h, w, config.params, config.reg_n);
          slope_max = std::max(slope_max, std::abs((s1 - s0) / (2.0 * h)));
        }
      }
    }
  }
  const double k2_max = 2.0 * K * K;
  const double lam_diff = 2.0 * slope_max * k2_max;  // margin x2 on the probed slope
  const double lam_adv = std::sqrt(2.0) * K * std::max(u_max, 1e-12);
  double dt = config.dt;
  if (dt <= 0.0)
    dt = config.cfl_safety * std::min(2.5 / std::max(lam_diff, 1e-300), 2.0 / lam_adv);
  const int64_t n_steps = std::max<int64_t>(1, static_cast<int64_t>(std::ceil(config.t_end / dt)));
  dt = config.t_end / static_cast<double>(n_steps);

  SpectralResult res;
  res.dt = dt;
  res.energy0 = parseval_energy(lay, state);
  res.sup_energy = res.energy0;
  res.apriori_margin_min = std::numeric_limits<double>::infinity();
  res.coercivity_margin_min = std::numeric_limits<double>::infinity();
  res.c0_rate = eng.c0_rate;

  double diss_int = 0.0;   // int_0^t int S^n : B
  double sym_p_int = 0.0;  // int_0^t int |B_s|^p

  const double area = std::pow(kDomain / M, 2);
  auto record = [&](const SpectralState& st) {
    SpectralRecord r;
    r.t = st.t;
    r.energy = parseval_energy(lay, st);
    // physical-space norms
    eng.fft.backward(st.uhat, eng.u);
    eng.fft.backward(st.vhat, eng.v);
    eng.derivative(st.uhat, 0, eng.tmp);
    eng.fft.backward(eng.tmp, eng.ux);
    eng.derivative(st.uhat, 1, eng.tmp);
    eng.fft.backward(eng.tmp, eng.uy);
    eng.derivative(st.vhat, 0, eng.tmp);
    eng.fft.backward(eng.tmp, eng.vx);
    eng.derivative(st.vhat, 1, eng.tmp);
    eng.fft.backward(eng.tmp, eng.vy);
    double gp = 0.0, sd = 0.0;
    const double pprime = config.params.p / (config.params.p - 1.0);
    MatD b(2), om(2);
    for (size_t k = 0; k < eng.u.size(); ++k) {
      b(0, 0) = eng.ux[k];
      b(0, 1) = eng.uy[k];
      b(1, 0) = eng.vx[k];
      b(1, 1) = eng.vy[k];
      om(0, 1) = eng.w_node[k];
      om(1, 0) = -eng.w_node[k];
      gp += std::pow(norm(b), config.params.p) * area;
      sd += std::pow(norm(stress_regularized(b, om, config.params, config.reg_n)), pprime) * area;
    }
    r.grad_p_norm = std::pow(gp, 1.0 / config.params.p);
    r.stress_dual_norm = std::pow(sd, 1.0 / pprime);
    r.energy_residual = std::abs(r.energy + diss_int - res.energy0);
    r.div_residual = divergence_residual(st);
    res.records.push_back(r);
    res.sup_energy = std::max(res.sup_energy, r.energy);
    res.max_energy_residual = std::max(res.max_energy_residual, r.energy_residual);
    res.max_div_residual = std::max(res.max_div_residual, r.div_residual);
    // a-priori bound: E(t) + mu1 int int |B_s|^p <= E0 + C0 t (+ tolerance)
    double lhs = r.energy + config.params.mu1 * sym_p_int;
    double rhs = res.energy0 + eng.c0_rate * st.t;
    double margin = rhs - lhs;
    res.apriori_margin_min = std::min(res.apriori_margin_min, margin);
    if (margin < -1e-8 * std::max(1.0, rhs)) res.apriori_ok = false;
  };
  record(state);

  SpectralState k1, k2, k3, k4, tmp_state;
  AuxRates r1, r2, r3, r4;
  auto axpy = [&](const SpectralState& y, double a, const SpectralState& d, SpectralState& out) {
    out.modes = y.modes;
    out.grid = y.grid;
    out.t = y.t;
    out.uhat.resize(y.uhat.size());
    out.vhat.resize(y.vhat.size());
    for (size_t s = 0; s < y.uhat.size(); ++s) {
      out.uhat[s] = y.uhat[s] + a * d.uhat[s];
      out.vhat[s] = y.vhat[s] + a * d.vhat[s];
    }
  };

  for (int64_t step = 0; step < n_steps; ++step) {
    eng.rhs(state, k1, r1);
    axpy(state, 0.5 * dt, k1, tmp_state);
    eng.rhs(tmp_state, k2, r2);
    axpy(state, 0.5 * dt, k2, tmp_state);
    eng.rhs(tmp_state, k3, r3);
    axpy(state, dt, k3, tmp_state);
    eng.rhs(tmp_state, k4, r4);

    // coercivity of the dissipation rate at the step head
    double co_margin = r1.dissipation - (config.params.mu1 * r1.sym_p - eng.c0_rate);
    res.coercivity_margin_min = std::min(res.coercivity_margin_min, co_margin);
    if (co_margin < -1e-8 * std::max(1.0, std::abs(r1.dissipation))) res.coercivity_ok = false;

    for (size_t s = 0; s < state.uhat.size(); ++s) {
      state.uhat[s] += dt / 6.0 *
                       (k1.uhat[s] + 2.0 * k2.uhat[s] + 2.0 * k3.uhat[s] + k4.uhat[s]);
      state.vhat[s] += dt / 6.0 *
                       (k1.vhat[s] + 2.0 * k2.vhat[s] + 2.0 * k3.vhat[s] + k4.vhat[s]);
    }
    diss_int += dt / 6.0 *
                (r1.dissipation + 2.0 * r2.dissipation + 2.0 * r3.dissipation + r4.dissipation);
    sym_p_int += dt / 6.0 * (r1.sym_p + 2.0 * r2.sym_p + 2.0 * r3.sym_p + r4.sym_p);
    state.t = static_cast<double>(step + 1) * dt;

    if (!std::isfinite(parseval_energy(lay, state)))
      throw DivergedError("spectral solver produced a non-finite state");

    if ((step + 1) % config.record_stride == 0 || step + 1 == n_steps) record(state);
  }

  res.steps = n_steps;
  res.final_energy = parseval_energy(lay, state);
  res.state = std::move(state);
  return res;
}

}  // namespace ysl
