// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "kbloch/kmesh.hpp"
#include "kbloch/numeric.hpp"

namespace kbloch {

/// k-point Hamiltonian with spin-independent blocks.
///
/// h[k][p][q] is the bare one-body block. V[Q][k][k'][p][q][r][s] holds
/// V_{pk, q(k(-)Q), r(k'(-)Q), sk'} for
///   H2 = 1/2 sum_{sigma tau} sum V a+_{pk sigma} a_{q(k(-)Q) sigma} a+_{r(k'(-)Q) tau} a_{sk' tau}.
/// Every (Q,k,k') block is stored; no symmetry folding in storage.
struct KHamiltonian {
  Mesh mesh;
  int n = 0;  // spatial orbitals per cell
  std::vector<cplx> h;
  std::vector<cplx> V;

  KHamiltonian() = default;
  KHamiltonian(const Mesh& m, int n_spatial);

  int nk() const { return mesh.nk(); }
  /// Spin orbitals per cell.
  int N() const { return 2 * n; }
  int spin_orbitals() const { return 2 * n * mesh.nk(); }

  std::size_t hidx(int k, int p, int q) const {
    return (static_cast<std::size_t>(k) * n + p) * n + q;
  }
  std::size_t vidx(int Q, int k, int kp, int p, int q, int r, int s) const {
    const std::size_t K = static_cast<std::size_t>(mesh.nk());
    return (((((static_cast<std::size_t>(Q) * K + k) * K + kp) * n + p) * n + q) * n + r) * n + s;
  }
  cplx& h_at(int k, int p, int q) { return h[hidx(k, p, q)]; }
  cplx h_at(int k, int p, int q) const { return h[hidx(k, p, q)]; }
  cplx& V_at(int Q, int k, int kp, int p, int q, int r, int s) { return V[vidx(Q, k, kp, p, q, r, s)]; }
  cplx V_at(int Q, int k, int kp, int p, int q, int r, int s) const {
    return V[vidx(Q, k, kp, p, q, r, s)];
  }
};

/// A Gamma-only Hamiltonian on a supercell; stored as a KHamiltonian on mesh [1,1,1].
using SupercellHamiltonian = KHamiltonian;

struct SymmetryReport {
  double h_hermiticity = 0.0;
  double swap = 0.0;       // V_{pq rs} = V_{rs pq}
  double conj = 0.0;       // V_{pq rs} = V*_{qp sr}
  double conj_swap = 0.0;  // V_{pq rs} = V*_{sr qp}
  double tol = 0.0;
  bool pass = false;
  double max_violation() const;
};

/// Throws DataError when array sizes do not match the mesh and orbital count.
void check_shape(const KHamiltonian& H);
SymmetryReport validate(const KHamiltonian& H, double tol);

/// Deterministic synthetic instance. V is a Gram form sum_n L L^dagger per Q,
/// with rho_n(-Q) = rho_n(Q)^dagger so the four-fold symmetry holds exactly.
/// rank <= 0 selects n+1.
KHamiltonian generate_synthetic(const Mesh& mesh, int n_spatial, std::uint64_t seed, double decay,
                                int rank = 0);

/// Exact embedding on a single cell with composite orbital index k*n + p.
SupercellHamiltonian fold_to_supercell(const KHamiltonian& H);

/// Uniform variates in [-1, 1). The engine output is fully specified by the
/// standard, and the mapping to doubles is done here so results do not depend
/// on the library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-52 - 1.0; }
  cplx complex_uniform() {
    const double re = uniform();
    return {re, uniform()};
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace kbloch
