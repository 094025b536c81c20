// SPDX-License-Identifier: Apache-2.0

#ifndef YSL_FIELD_HPP
#define YSL_FIELD_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "ysl/params.hpp"
#include "ysl/tensor.hpp"

namespace ysl {

/// Two-component velocity field sampled on a uniform nx x ny grid.
/// Node (i,j) sits at (x0 + i dx, y0 + j dy); storage is x-fastest.
/// `periodic` selects wrap-around vs one-sided differences at the edges.
struct Field2D {
  int nx = 0, ny = 0;
  double dx = 0.0, dy = 0.0;
  double x0 = 0.0, y0 = 0.0;
  bool periodic = true;
  std::vector<double> u, v;

  size_t idx(int i, int j) const { return static_cast<size_t>(j) * nx + i; }
  static Field2D zeros(int nx, int ny, double dx, double dy, bool periodic = true);
};

/// Gradient of one component by central differences (one-sided at
/// non-periodic edges). Output arrays are ddx, ddy at every node.
void gradient(const Field2D& f, const std::vector<double>& comp, std::vector<double>& ddx,
              std::vector<double>& ddy);

/// Velocity gradient B = grad v at every node, B_ij = dv_i/dx_j.
std::vector<MatD> velocity_gradient(const Field2D& f);

/// Rectangle-rule L^p norm of a per-node scalar (|value|^p summed).
double lp_norm(std::span<const double> values, double cell_area, double p);

/// ||grad v||_Lp / (||v||_L2 + ||(grad v)_s||_Lp); returns 0 for the
/// zero field.
double korn_ratio(const Field2D& f, double p);

/// Fraction of nodes whose gradient classifies as plug at tolerance tol.
double plug_fraction(std::span<const MatD> gradients, std::span<const MatD> omegas,
                     const FluidParams& params, double tol);

/// Band-limited random smooth field: a fixed Fourier sum with decaying
/// coefficients, so the same seed evaluates the same underlying function
/// on any grid resolution. Used by the Korn suite across refinements.
Field2D random_smooth_field(uint64_t seed, int kmax, int n, double amplitude = 1.0);

}  // namespace ysl

#endif
