// SPDX-License-Identifier: Apache-2.0

#include "ysl/field.hpp"

#include <cmath>

#include "ysl/rng.hpp"
#include "ysl/subdiff.hpp"

namespace ysl {

Field2D Field2D::zeros(int nx, int ny, double dx, double dy, bool periodic) {
  Field2D f;
  f.nx = nx;
  f.ny = ny;
  f.dx = dx;
  f.dy = dy;
  f.periodic = periodic;
  f.u.assign(static_cast<size_t>(nx) * ny, 0.0);
  f.v.assign(static_cast<size_t>(nx) * ny, 0.0);
  return f;
}

void gradient(const Field2D& f, const std::vector<double>& comp, std::vector<double>& ddx,
              std::vector<double>& ddy) {
  const int nx = f.nx, ny = f.ny;
  ddx.assign(comp.size(), 0.0);
  ddy.assign(comp.size(), 0.0);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      size_t k = f.idx(i, j);
      if (f.periodic) {
        ddx[k] = (comp[f.idx((i + 1) % nx, j)] - comp[f.idx((i + nx - 1) % nx, j)]) / (2 * f.dx);
        ddy[k] = (comp[f.idx(i, (j + 1) % ny)] - comp[f.idx(i, (j + ny - 1) % ny)]) / (2 * f.dy);
      } else {
        if (i == 0)
          ddx[k] = (comp[f.idx(1, j)] - comp[k]) / f.dx;
        else if (i == nx - 1)
          ddx[k] = (comp[k] - comp[f.idx(nx - 2, j)]) / f.dx;
        else
          ddx[k] = (comp[f.idx(i + 1, j)] - comp[f.idx(i - 1, j)]) / (2 * f.dx);
        if (j == 0)
          ddy[k] = (comp[f.idx(i, 1)] - comp[k]) / f.dy;
        else if (j == ny - 1)
          ddy[k] = (comp[k] - comp[f.idx(i, ny - 2)]) / f.dy;
        else
          ddy[k] = (comp[f.idx(i, j + 1)] - comp[f.idx(i, j - 1)]) / (2 * f.dy);
      }
    }
  }
}

std::vector<MatD> velocity_gradient(const Field2D& f) {
  std::vector<double> ux, uy, vx, vy;
  gradient(f, f.u, ux, uy);
  gradient(f, f.v, vx, vy);
  std::vector<MatD> out(f.u.size(), MatD(2));
  for (size_t k = 0; k < f.u.size(); ++k) {
    MatD& b = out[k];
    b(0, 0) = ux[k];
    b(0, 1) = uy[k];
    b(1, 0) = vx[k];
    b(1, 1) = vy[k];
  }
  return out;
}

double lp_norm(std::span<const double> values, double cell_area, double p) {
  double s = 0.0;
  for (double v : values) s += std::pow(std::abs(v), p);
  return std::pow(s * cell_area, 1.0 / p);
}

double korn_ratio(const Field2D& f, double p) {
  auto grads = velocity_gradient(f);
  const double area = f.dx * f.dy;
  double gp = 0.0, sp = 0.0, v2 = 0.0;
  for (size_t k = 0; k < grads.size(); ++k) {
    gp += std::pow(norm(grads[k]), p);
    sp += std::pow(norm(sym(grads[k])), p);
    v2 += f.u[k] * f.u[k] + f.v[k] * f.v[k];
  }
  double num = std::pow(gp * area, 1.0 / p);
  double den = std::sqrt(v2 * area) + std::pow(sp * area, 1.0 / p);
  if (den == 0.0) return 0.0;  // zero field
  return num / den;
}

double plug_fraction(std::span<const MatD> gradients, std::span<const MatD> omegas,
                     const FluidParams& params, double tol) {
  if (gradients.empty()) return 0.0;
  size_t count = 0;
  for (size_t k = 0; k < gradients.size(); ++k) {
    const MatD& om = omegas.empty() ? MatD::zero(gradients[k].dim) : omegas[k];
    if (classify_plug(gradients[k], om, params, tol) == PlugClass::Plug) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(gradients.size());
}

Field2D random_smooth_field(uint64_t seed, int kmax, int n, double amplitude) {
  // Coefficients drawn once from the seed; evaluation is resolution-free.
  Rng rng(seed);
  struct Mode {
    int kx, ky;
    double au, bu, av, bv;
  };
  std::vector<Mode> modes;
  for (int kx = 0; kx <= kmax; ++kx) {
    for (int ky = -kmax; ky <= kmax; ++ky) {
      if (kx == 0 && ky <= 0) continue;
      double decay = 1.0 / (1.0 + kx * kx + ky * ky);
      Mode m{kx, ky, rng.uniform(-1, 1) * decay, rng.uniform(-1, 1) * decay,
             rng.uniform(-1, 1) * decay, rng.uniform(-1, 1) * decay};
      modes.push_back(m);
    }
  }
  const double L = 2.0 * M_PI;
  Field2D f = Field2D::zeros(n, n, L / n, L / n, true);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      double x = i * f.dx, y = j * f.dy;
      double su = 0.0, sv = 0.0;
      for (const Mode& m : modes) {
        double phase = m.kx * x + m.ky * y;
        double c = std::cos(phase), s = std::sin(phase);
        su += m.au * c + m.bu * s;
        sv += m.av * c + m.bv * s;
      }
      f.u[f.idx(i, j)] = amplitude * su;
      f.v[f.idx(i, j)] = amplitude * sv;
    }
  }
  return f;
}

}  // namespace ysl
