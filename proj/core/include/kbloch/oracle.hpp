// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstdint>
#include <string>
#include <vector>

#include "kbloch/factorize.hpp"

namespace kbloch {

/// Dense verification works on at most this many spin orbitals (2^12 states).
inline constexpr int kMaxModes = 12;

using SpMat = Eigen::SparseMatrix<cplx>;

/// Jordan-Wigner mode: k most significant, then p, then spin.
inline int mode_index(int n, int k, int p, int sigma) { return (k * n + p) * 2 + sigma; }

/// i^phase X^x Z^z on qubits given by bit positions. Qubit j is the occupation of mode j.
struct Pauli {
  std::uint64_t x = 0, z = 0;
  int phase = 0;
};
Pauli operator*(const Pauli& a, const Pauli& b);
/// gamma_{j,0} = Z_{<j} X_j and gamma_{j,1} = Z_{<j} Y_j.
Pauli majorana(int mode, int t);
/// Phase exponent that makes i^e X^x Z^z Hermitian.
int hermitian_phase(std::uint64_t x, std::uint64_t z);
SpMat to_matrix(const Pauli& P, int modes);

class InvalidLcuError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DenseOperator {
  Eigen::MatrixXcd m;
  std::string tag;
  /// Identity shift removed relative to H = H1 + H2, when known.
  double shift = 0.0;
};

/// H1 + H2 built directly from ladder operators.
DenseOperator assemble_direct(const KHamiltonian& H);

/// A Hermitian Pauli (phase chosen by hermitian_phase) with sign and weight.
struct SignedPauli {
  double weight = 0.0;
  int sign = 1;
  std::uint64_t x = 0, z = 0;
};

/// Merged Majorana-form LCU of a sparse representation. Imaginary
/// coefficients i w on a Hermitian Pauli are carried as w; the imaginary
/// parts cancel on every Pauli because the total operator is Hermitian.
std::vector<SignedPauli> sparse_lcu(const SparseEntries& S);
SpMat signed_pauli_matrix(const SignedPauli& t, int modes);

DenseOperator assemble_sparse(const SparseEntries& S);
DenseOperator assemble_sf(const KHamiltonian& H, const CholeskyFactors& C);
DenseOperator assemble_df(const KHamiltonian& H, const DFFactors& D);

struct THCAssembly {
  DenseOperator op;
  double weight_sum = 0.0;          // sum of LCU weights, equals lambda_THC
  double majorana_defect = 0.0;     // max over rotated Majoranas of |g - g^dag| and |g^2 - 1|
  std::int64_t terms = 0;
};
/// Sum of the THC LCU terms built from rotated Majoranas.
THCAssembly assemble_thc(const KHamiltonian& H, const THCFactors& T);

/// Eigenvalues ascending; throws if the operator is not Hermitian to 1e-10.
Eigen::VectorXd spectrum(const DenseOperator& op);

struct SpectrumComparison {
  double shift = 0.0;     // mean of (a - b) after removing traces
  double max_diff = 0.0;  // after removing the shift
  bool pass = false;
};
/// Compares sorted spectra after subtracting each trace / dim.
SpectrumComparison compare_spectra(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double tol);

struct BoundReport {
  double norm = 0.0;
  double lambda = 0.0;
  double margin = 0.0;  // lambda + 1e-9 - norm
  bool pass = false;
};
BoundReport check_lambda_bound(const DenseOperator& op, double lambda);

struct WeightedUnitary {
  double weight = 0.0;
  SpMat U;
};

struct WalkReport {
  bool dense = false;
  int space_dim = 0;  // dimension actually diagonalized
  int expected = 0;
  int matched = 0;
  double max_error = 0.0;
  bool pass = false;
  std::vector<double> phases;
};
/// Eigenphases of W = R SELECT against +-arccos(E/lambda), E the eigenvalues of
/// sum w U. Dense W when terms*dim <= 512, else the invariant subspace spanned
/// by |L>|j> and SELECT |L>|j>.
WalkReport walk_spectrum(const std::vector<WeightedUnitary>& terms, double lambda, double tol = 1e-8);
std::vector<WeightedUnitary> to_weighted_unitaries(const std::vector<SignedPauli>& terms, int modes);

struct VerifyCheck {
  std::string name;
  double value = 0.0;  // error or margin, see tolerance
  double tolerance = 0.0;
  bool pass = false;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  bool pass() const;
};

/// Full oracle suite on one instance: symmetry, sparse / SF / DF (and THC when
/// given) spectra against the direct operator, lambda bounds, fold invariance,
/// and walk phases for instances with at most two spatial orbitals in total.
VerifyReport verify_instance(const KHamiltonian& H, const THCFactors* thc, int workers = 1, double tol = 1e-9);

}  // namespace kbloch
