// SPDX-License-Identifier: Apache-2.0

#ifndef YSL_SPECTRAL_HPP
#define YSL_SPECTRAL_HPP

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "ysl/params.hpp"

namespace ysl {

/// Micro-rotation ingestion: the 2d antisymmetric tensor is one scalar
/// w(x,y), stored per grid node as [[0,w],[-w,0]].
struct OmegaSpec {
  enum class Type { Zero, Constant, Expression, File };
  Type type = Type::Zero;
  double value = 0.0;
  std::string expr;  // in variables x, y
  std::string path;  // CSV: one w per node (row-major), or 4 columns o11,o12,o21,o22
};

struct InitSpec {
  enum class Type { TaylorGreen, Random };
  Type type = Type::TaylorGreen;
  double amplitude = 1.0;
  int kmax = 4;        // random init band limit
  uint64_t seed = 1;   // random init seed
};

/// 2d periodic pseudo-spectral driver on [0,2pi)^2: divergence-free
/// Fourier modes |k|_inf <= K, regularized stress evaluated pointwise on
/// the M x M grid, quadratic term dealiased by the 2/3 rule (M > 3K).
struct SpectralConfig {
  int modes = 16;  // K
  int grid = 0;    // M; 0 = auto (smallest even M > 3K)
  double dt = 0.0;              // 0 = auto from probed stability bound
  double t_end = 1.0;
  FluidParams params;
  int64_t reg_n = 1000;
  OmegaSpec omega;
  InitSpec init;
  int record_stride = 1;
  double cfl_safety = 0.7;
  uint64_t seed = 0;  // recorded in the manifest

  int auto_grid() const {
    int m = 3 * modes + 2;
    if (m % 2) ++m;
    return m;
  }
};

/// Divergence-free spectral velocity state (normalized coefficients in
/// r2c layout, conjugate symmetry implied by the representation).
struct SpectralState {
  int modes = 0;
  int grid = 0;
  double t = 0.0;
  std::vector<std::complex<double>> uhat, vhat;
};

struct SpectralRecord {
  double t = 0.0;
  double energy = 0.0;            // (1/2)||v||_2^2 (Parseval)
  double grad_p_norm = 0.0;       // ||grad v||_Lp
  double stress_dual_norm = 0.0;  // ||S^n||_Lp'
  double energy_residual = 0.0;   // |E(t) + int S:B - E(0)|
  double div_residual = 0.0;      // max_k |k . vhat|
};

struct SpectralResult {
  std::vector<SpectralRecord> records;
  double energy0 = 0.0;
  double sup_energy = 0.0;
  double final_energy = 0.0;
  double max_energy_residual = 0.0;
  double max_div_residual = 0.0;
  double c0_rate = 0.0;             // int (mu2 2^(p-2)|Omega|^p + tau |Omega|) dx
  double apriori_margin_min = 0.0;  // min over records of rhs - lhs of the bound
  bool apriori_ok = true;
  double coercivity_margin_min = 0.0;  // min of diss_rate - (mu1 int |B_s|^p - C0)
  bool coercivity_ok = true;
  int64_t steps = 0;
  double dt = 0.0;
  SpectralState state;
};

/// Project coefficient arrays onto divergence-free fields:
/// vhat(k) <- (I - k k^T/|k|^2) vhat(k); the k=0 mode is preserved.
void leray_project(SpectralState& state);

/// Max_k |k . vhat(k)|, the spectral divergence residual.
double divergence_residual(const SpectralState& state);

SpectralState taylor_green_state(int modes, int grid, double amplitude);

/// Run with RK4; energy/dissipation ledger integrated through the same
/// tableau so the discrete energy identity closes to O(dt^4).
SpectralResult integrate(const SpectralConfig& config);

}  // namespace ysl

#endif
