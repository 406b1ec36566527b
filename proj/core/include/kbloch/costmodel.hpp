// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "kbloch/kmesh.hpp"
#include "kbloch/lambda.hpp"

namespace kbloch {

enum class QroamMode { Output, Erase };

struct QroamResult {
  std::int64_t toffoli = 0;
  std::int64_t k = 1;
  std::int64_t ancilla = 0;
};

/// Select-swap QROAM over L items of m bits. Output mode costs
/// ceil(L/k) + m(k-1); erase mode costs ceil(L/k) + k. k ranges over powers of
/// two up to 2^ceil(log2 L); ties go to the smaller k. The cost's forward
/// difference is strictly increasing in k, so a descent from the continuous
/// optimum finds the exact minimizer.
QroamResult qroam_cost(std::int64_t L, std::int64_t m, QroamMode mode);
/// Exhaustive reference for qroam_cost.
QroamResult qroam_cost_brute(std::int64_t L, std::int64_t m, QroamMode mode);
/// Minimizer of an arbitrary cost over k = 1, 2, 4, ..., kmax (ties to smaller k).
std::pair<std::int64_t, std::int64_t> argmin_pow2(std::int64_t kmax, const std::function<std::int64_t(std::int64_t)>& f);

/// 3 ceil(log d) - 3 eta + 2 b_r - 9, eta the 2-adic valuation of d. Requires d >= 2.
std::int64_t equal_superposition_cost(std::int64_t d, int br);

struct PeaResult {
  std::int64_t iterations = 0;
  std::int64_t total = 0;
};
/// I = ceil(pi lambda / (2 eps)); total = I * per_step.
PeaResult pea_total(std::int64_t per_step, double lambda, double eps);

struct CostParams {
  int N = 2;  // spin orbitals per cell
  Mesh mesh;
  std::int64_t M = 1;  // SF / THC rank
  double Xi = 1.0;     // DF average rank
  std::int64_t d = 2;  // sparse unique entries
  int aleph = 10, aleph1 = 10, aleph2 = 10;
  int br = 7;
  int beth = 20;
  double eps = 0.0016;
  double lambda = 1.0;
};

/// Supercell baseline: N -> N N_k, mesh -> [1,1,1], M -> N_k M, Xi -> Xi_sc, d -> d_sc.
CostParams supercell_params(const CostParams& P, std::int64_t d_sc, double Xi_sc);

struct CostItem {
  std::string name;
  std::int64_t value = 0;
};

struct CostReport {
  Lcu lcu = Lcu::Sparse;
  std::vector<CostItem> items;        // per-step Toffoli line items
  std::vector<CostItem> qubit_items;  // logical qubit line items
  std::map<std::string, std::int64_t> block_sizes;
  std::int64_t per_step = 0;
  std::int64_t qubits = 0;
  std::int64_t iterations = 0;
  std::int64_t total = 0;
  /// Names of items whose formula went negative and were floored at zero.
  std::vector<std::string> floored;
};

CostReport cost_sparse(const CostParams& P);
CostReport cost_sf(const CostParams& P);
CostReport cost_df(const CostParams& P);
CostReport cost_thc(const CostParams& P);
CostReport cost(Lcu lcu, const CostParams& P);

/// Worst-case contiguous-register multiplication counts a..l for the THC
/// normalization state; each entry is one product of register widths.
std::vector<std::int64_t> thc_contiguous_items(const Mesh& mesh, std::int64_t M);
/// 32 (N_k + 2^v) M^2 + N N_k / 2.
std::int64_t thc_d(const Mesh& mesh, int N, std::int64_t M);

/// Formula-level stand-ins for factor sizes when sweeping meshes without
/// integrals: dense sparse count, Cholesky rank proportional to n, fixed
/// average DF rank, THC rank c_thc n, and lambda growing linearly in N_k.
struct SweepModel {
  int n = 26;
  int chol_per_orbital = 4;
  double xi = 26.0;
  int c_thc = 8;
  double lambda_per_cell = 1.0;
};

/// Parameters for one sweep point. Supercell points use d_sc = (N_k n)^4 / 2
/// and keep Xi fixed.
CostParams sweep_params(Lcu lcu, const Mesh& mesh, const SweepModel& model, bool supercell,
                        const CostParams& base = {});

struct PowerFit {
  double exponent = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  int points = 0;
};
/// Least squares of log2 y against log2 x.
PowerFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace kbloch
