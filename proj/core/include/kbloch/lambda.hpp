// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "kbloch/factorize.hpp"

namespace kbloch {

enum class Lcu { Sparse, SF, DF, THC };

std::string lcu_name(Lcu l);
/// Accepts "sparse", "sf", "df", "thc"; throws std::invalid_argument otherwise.
Lcu parse_lcu(const std::string& s);

/// L1 norms in Hartree. per_cell = total / N_k.
struct LambdaReport {
  Lcu lcu = Lcu::Sparse;
  double one_body = 0.0;
  double two_body = 0.0;
  double total = 0.0;
  double per_cell = 0.0;
};

/// sum_k sum_pq (|Re h'| + |Im h'|) with h' = h + X.
double lambda_one_body_sparse(const KHamiltonian& H);
/// Eigenvalues of h(k) + X(k), ascending per k.
std::vector<double> df_one_body_eigenvalues(const KHamiltonian& H);
/// Eigenvalues of the bare h(k), ascending per k.
std::vector<double> bare_one_body_eigenvalues(const KHamiltonian& H);

LambdaReport lambda_sparse(const KHamiltonian& H);
/// Same quantity from deduplicated entries (orbit sizes restore the full sum).
LambdaReport lambda_sparse(const SparseEntries& S);
LambdaReport lambda_sf(const KHamiltonian& H, const CholeskyFactors& C);
LambdaReport lambda_df(const KHamiltonian& H, const DFFactors& D);
LambdaReport lambda_thc(const KHamiltonian& H, const THCFactors& T);

/// Per-(Q,n) L1 norm of L: sum over k,p,q of |Re L| + |Im L|.
std::vector<double> sf_block_norms(const CholeskyFactors& C);
/// Per-(Q,n) pairs (sum |f^A|, sum |f^B|), index Q*M + n.
std::vector<std::pair<double, double>> df_block_norms(const DFFactors& D);

}  // namespace kbloch
