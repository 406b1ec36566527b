// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "kbloch/hamiltonian.hpp"

namespace kbloch {

// ---------------------------------------------------------------- sparse

/// Representative of a four-fold symmetry orbit of V (minimum flat index).
struct SparseEntry {
  int Q, k, kp, p, q, r, s;
  cplx value;
  int orbit_size;  // 1, 2 or 4 distinct stored positions
};

/// Entry of the effective one-body matrix h' with p <= q.
struct OneBodyEntry {
  int k, p, q;
  cplx value;
};

struct SparseEntries {
  Mesh mesh;
  int n = 0;
  double threshold = 0.0;
  std::vector<SparseEntry> two_body;
  std::vector<OneBodyEntry> one_body;
  /// Unique entries fed to state preparation: retained two-body orbits and
  /// one-body entries, each doubled for the real and imaginary parts.
  std::int64_t d = 0;
};

/// X[k][p][q] = sum_{k', r} V_{pk, qk, rk', rk'}.
std::vector<cplx> exchange_correction(const KHamiltonian& H);
/// h' = h + X, the one-body operator left after rewriting H2 in Majorana form.
std::vector<cplx> effective_one_body(const KHamiltonian& H);

SparseEntries sparsify(const KHamiltonian& H, double threshold);

// ---------------------------------------------------------------- single factorization

class NotPsdError : public DataError {
 public:
  using DataError::DataError;
};

/// L[Q][j][k][p][q], zero-padded to M vectors for every Q, with
///   V[Q][k][k'][p][q][r][s] = sum_j L[Q][j][k][p][q] conj(L[Q][j][k'][s][r]).
/// The matricization uses rows (k,p,q) and columns (k',s,r).
struct CholeskyFactors {
  Mesh mesh;
  int n = 0;
  int M = 0;
  std::vector<int> rank;  // retained vectors per Q
  std::vector<cplx> L;
  double tol = 0.0;

  std::size_t lidx(int Q, int j, int k, int p, int q) const {
    const std::size_t K = static_cast<std::size_t>(mesh.nk());
    return ((((static_cast<std::size_t>(Q) * M + j) * K + k) * n + p) * n) + q;
  }
  cplx at(int Q, int j, int k, int p, int q) const { return L[lidx(Q, j, k, p, q)]; }
};

/// Pivoted Cholesky per Q, stopping once the largest residual diagonal is at
/// most max(tol, floor) where floor = 64 eps times the largest initial diagonal.
/// Pivot ties go to the lowest flat index.
CholeskyFactors cholesky_sf(const KHamiltonian& H, double tol, int workers = 1);

// ---------------------------------------------------------------- double factorization

struct GivensRotation {
  int row;       // acts on rows (row-1, row)
  double theta;  // cos(theta) on the diagonal
  double phi;    // phase of the off-diagonal element
};

/// Reduces a unitary to a diagonal of phases with nearest-neighbour Givens
/// rotations, zeroing each column below the diagonal from the bottom up.
std::vector<GivensRotation> givens_decompose(const Eigen::MatrixXcd& U, Eigen::VectorXcd* phases = nullptr);
/// Inverse of givens_decompose.
Eigen::MatrixXcd givens_reconstruct(const std::vector<GivensRotation>& rots, const Eigen::VectorXcd& phases);

/// One eigensystem of A_j(Q,k) or B_j(Q,k). For Q != 0 the basis is the n
/// orbitals at k followed by the n orbitals at k (-) Q; for Q == 0 it is the
/// n orbitals at k.
struct DFBlock {
  int Q = 0, j = 0, k = 0;
  bool is_b = false;
  Eigen::VectorXd f;   // retained eigenvalues
  Eigen::MatrixXcd U;  // retained eigenvectors as columns
  int givens = 0;      // rotations needed to load the retained columns
  int rank() const { return static_cast<int>(f.size()); }
  int dim() const { return static_cast<int>(U.rows()); }
};

struct DFFactors {
  Mesh mesh;
  int n = 0;
  int M = 0;
  double eigtol = 0.0;
  bool relative = false;
  std::vector<DFBlock> blocks;  // ordered by Q, j, k, then A before B
  std::int64_t total_rank = 0;
  /// Xi = total_rank / (2 N_k M).
  double xi = 0.0;
};

DFFactors double_factorize(const CholeskyFactors& C, double eigtol, bool relative = false, int workers = 1);

// ---------------------------------------------------------------- tensor hypercontraction

/// zeta[Q][g1][g2][mu][nu] with g the 3-bit flag of G (see g_flag), chi[k][p][mu].
struct THCFactors {
  Mesh mesh;
  int n = 0;
  int M = 0;
  std::vector<cplx> chi;
  std::vector<cplx> zeta;
  std::vector<double> norms;  // N[k][mu] = |chi[k][:, mu]|
  double c_thc = 0.0;         // M / n

  std::size_t chi_idx(int k, int p, int mu) const {
    return (static_cast<std::size_t>(k) * n + p) * M + mu;
  }
  std::size_t zeta_idx(int Q, int g1, int g2, int mu, int nu) const {
    return ((((static_cast<std::size_t>(Q) * 8 + g1) * 8 + g2) * M + mu) * M) + nu;
  }
  double norm(int k, int mu) const { return norms[static_cast<std::size_t>(k) * M + mu]; }
  cplx chi_tilde(int k, int p, int mu) const;
};

std::size_t thc_zeta_size(const Mesh& mesh, int M);
/// Largest deviation of zeta from the three symmetry relations and from zero
/// on unreachable (Q, G) flags.
double thc_symmetry_violation(const Mesh& mesh, int M, const std::vector<cplx>& zeta);
/// Group average over the symmetry relations; idempotent.
std::vector<cplx> thc_symmetrize(const Mesh& mesh, int M, const std::vector<cplx>& zeta);
/// S[Q][g][mu] = sum over k with G(k, k(-)Q) = g of N[k][mu] N[k(-)Q][mu].
std::vector<double> thc_norm_sums(const THCFactors& T);

/// Rejects zeta whose symmetry violation exceeds tol, then symmetrizes it and
/// splits chi into unit columns and norms.
THCFactors ingest_thc(const std::vector<cplx>& chi, const std::vector<cplx>& zeta, const Mesh& mesh, int n,
                      int M, double tol);

struct SyntheticTHC {
  KHamiltonian H;
  THCFactors thc;
};

/// Seeded chi and a positive semidefinite symmetrized zeta; H.V is the exact
/// THC reconstruction so every representation is exact on H.
SyntheticTHC generate_synthetic_thc(const Mesh& mesh, int n_spatial, std::uint64_t seed, int M);

// ---------------------------------------------------------------- reconstruction

std::vector<cplx> reconstruct(const SparseEntries& S);
std::vector<cplx> reconstruct(const CholeskyFactors& C);
std::vector<cplx> reconstruct(const DFFactors& D);
std::vector<cplx> reconstruct(const THCFactors& T);

double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b);

/// Dense one-body matrices of A_j(Q,k) and B_j(Q,k) before truncation.
Eigen::MatrixXcd df_block_matrix(const CholeskyFactors& C, int Q, int j, int k, bool is_b);

}  // namespace kbloch
