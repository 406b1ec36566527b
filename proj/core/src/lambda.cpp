// SPDX-License-Identifier: Apache-2.0
#include "kbloch/lambda.hpp"

#include <cmath>
#include <stdexcept>

namespace kbloch {

namespace {

double l1(cplx z) { return std::abs(z.real()) + std::abs(z.imag()); }

LambdaReport finish(Lcu lcu, double one, double two, int nk) {
  LambdaReport r;
  r.lcu = lcu;
  r.one_body = one;
  r.two_body = two;
  CompensatedSum t;
  t.add(one);
  t.add(two);
  r.total = t.value();
  r.per_cell = r.total / nk;
  return r;
}

std::vector<double> block_eigenvalues(const KHamiltonian& H, const std::vector<cplx>& m) {
  const int K = H.nk(), n = H.n;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(K) * n);
  for (int k = 0; k < K; ++k) {
    Eigen::MatrixXcd A(n, n);
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) A(p, q) = m[H.hidx(k, p, q)];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A, Eigen::EigenvaluesOnly);
    for (int p = 0; p < n; ++p) out.push_back(es.eigenvalues()[p]);
  }
  return out;
}

}  // namespace

std::string lcu_name(Lcu l) {
  switch (l) {
    case Lcu::Sparse: return "sparse";
    case Lcu::SF: return "sf";
    case Lcu::DF: return "df";
    case Lcu::THC: return "thc";
  }
  return "?";
}

Lcu parse_lcu(const std::string& s) {
  if (s == "sparse") return Lcu::Sparse;
  if (s == "sf") return Lcu::SF;
  if (s == "df") return Lcu::DF;
  if (s == "thc") return Lcu::THC;
  throw std::invalid_argument("unknown LCU '" + s + "' (expected sparse, sf, df or thc)");
}

double lambda_one_body_sparse(const KHamiltonian& H) {
  const std::vector<cplx> hp = effective_one_body(H);
  CompensatedSum s;
  for (const cplx& z : hp) s.add(l1(z));
  return s.value();
}

std::vector<double> df_one_body_eigenvalues(const KHamiltonian& H) {
  return block_eigenvalues(H, effective_one_body(H));
}

std::vector<double> bare_one_body_eigenvalues(const KHamiltonian& H) { return block_eigenvalues(H, H.h); }

LambdaReport lambda_sparse(const KHamiltonian& H) {
  check_shape(H);
  CompensatedSum two;
  for (const cplx& z : H.V) two.add(l1(z));
  return finish(Lcu::Sparse, lambda_one_body_sparse(H), two.value(), H.nk());
}

LambdaReport lambda_sparse(const SparseEntries& S) {
  CompensatedSum one, two;
  for (const OneBodyEntry& e : S.one_body) one.add((e.p == e.q ? 1.0 : 2.0) * l1(e.value));
  for (const SparseEntry& e : S.two_body) two.add(e.orbit_size * l1(e.value));
  return finish(Lcu::Sparse, one.value(), two.value(), S.mesh.nk());
}

std::vector<double> sf_block_norms(const CholeskyFactors& C) {
  const int K = C.mesh.nk(), n = C.n;
  std::vector<double> out;
  for (int Q = 0; Q < K; ++Q)
    for (int j = 0; j < C.M; ++j) {
      CompensatedSum s;
      for (int k = 0; k < K; ++k)
        for (int p = 0; p < n; ++p)
          for (int q = 0; q < n; ++q) s.add(l1(C.at(Q, j, k, p, q)));
      out.push_back(s.value());
    }
  return out;
}

LambdaReport lambda_sf(const KHamiltonian& H, const CholeskyFactors& C) {
  CompensatedSum two;
  for (double l : sf_block_norms(C)) two.add(0.5 * l * l);
  return finish(Lcu::SF, lambda_one_body_sparse(H), two.value(), H.nk());
}

std::vector<std::pair<double, double>> df_block_norms(const DFFactors& D) {
  const int K = D.mesh.nk();
  std::vector<CompensatedSum> a(static_cast<std::size_t>(K) * D.M), b(a.size());
  for (const DFBlock& blk : D.blocks) {
    auto& acc = blk.is_b ? b : a;
    for (int i = 0; i < blk.rank(); ++i)
      acc[static_cast<std::size_t>(blk.Q) * D.M + blk.j].add(std::abs(blk.f[i]));
  }
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i < a.size(); ++i) out.emplace_back(a[i].value(), b[i].value());
  return out;
}

LambdaReport lambda_df(const KHamiltonian& H, const DFFactors& D) {
  CompensatedSum one, two;
  for (double e : df_one_body_eigenvalues(H)) one.add(std::abs(e));
  for (const auto& [la, lb] : df_block_norms(D)) {
    two.add(0.25 * la * la);
    two.add(0.25 * lb * lb);
  }
  return finish(Lcu::DF, one.value(), two.value(), H.nk());
}

LambdaReport lambda_thc(const KHamiltonian& H, const THCFactors& T) {
  CompensatedSum one, two;
  for (double e : bare_one_body_eigenvalues(H)) one.add(2.0 * std::abs(e));
  const std::vector<double> S = thc_norm_sums(T);
  const int K = T.mesh.nk(), M = T.M;
  for (int Q = 0; Q < K; ++Q)
    for (int g1 = 0; g1 < 8; ++g1)
      for (int g2 = 0; g2 < 8; ++g2)
        for (int mu = 0; mu < M; ++mu)
          for (int nu = 0; nu < M; ++nu) {
            const cplx z = T.zeta[T.zeta_idx(Q, g1, g2, mu, nu)];
            if (z == cplx{}) continue;
            // The second sum runs over N[k'(-)Q][nu] N[k'][nu]: the same products.
            const double s1 = S[(static_cast<std::size_t>(Q) * 8 + g1) * M + mu];
            const double s2 = S[(static_cast<std::size_t>(Q) * 8 + g2) * M + nu];
            two.add(2.0 * l1(z) * s1 * s2);
          }
  return finish(Lcu::THC, one.value(), two.value(), H.nk());
}

}  // namespace kbloch
