// SPDX-License-Identifier: Apache-2.0
#include "kbloch/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace kbloch {

KHamiltonian::KHamiltonian(const Mesh& m, int n_spatial) : mesh(m), n(n_spatial) {
  if (n_spatial < 1) throw std::invalid_argument("n_spatial must be >= 1");
  const std::size_t K = static_cast<std::size_t>(m.nk());
  const std::size_t nn = static_cast<std::size_t>(n) * n;
  h.assign(K * nn, cplx{});
  V.assign(K * K * K * nn * nn, cplx{});
}

double SymmetryReport::max_violation() const {
  return std::max({h_hermiticity, swap, conj, conj_swap});
}

void check_shape(const KHamiltonian& H) {
  const std::size_t K = static_cast<std::size_t>(H.nk());
  const std::size_t nn = static_cast<std::size_t>(H.n) * H.n;
  if (H.n < 1 || H.h.size() != K * nn || H.V.size() != K * K * K * nn * nn) {
    std::ostringstream os;
    os << "structural error: arrays do not match mesh " << H.mesh.str() << " with n_spatial=" << H.n;
    throw DataError(os.str());
  }
}

SymmetryReport validate(const KHamiltonian& H, double tol) {
  check_shape(H);
  SymmetryReport rep;
  rep.tol = tol;
  const Mesh& m = H.mesh;
  const int K = m.nk(), n = H.n;
  for (int k = 0; k < K; ++k)
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q)
        rep.h_hermiticity =
            std::max(rep.h_hermiticity, std::abs(H.h_at(k, p, q) - std::conj(H.h_at(k, q, p))));
  for (int Q = 0; Q < K; ++Q) {
    const int nQ = m.neg(Q);
    for (int k = 0; k < K; ++k) {
      const int kq = m.sub(k, Q);
      for (int kp = 0; kp < K; ++kp) {
        const int kpq = m.sub(kp, Q);
        for (int p = 0; p < n; ++p)
          for (int q = 0; q < n; ++q)
            for (int r = 0; r < n; ++r)
              for (int s = 0; s < n; ++s) {
                const cplx v = H.V_at(Q, k, kp, p, q, r, s);
                rep.swap = std::max(rep.swap, std::abs(v - H.V_at(nQ, kpq, kq, r, s, p, q)));
                rep.conj = std::max(rep.conj, std::abs(v - std::conj(H.V_at(nQ, kq, kpq, q, p, s, r))));
                rep.conj_swap =
                    std::max(rep.conj_swap, std::abs(v - std::conj(H.V_at(Q, kp, k, s, r, q, p))));
              }
      }
    }
  }
  rep.pass = rep.max_violation() <= tol;
  return rep;
}

KHamiltonian generate_synthetic(const Mesh& mesh, int n_spatial, std::uint64_t seed, double decay,
                                int rank) {
  KHamiltonian H(mesh, n_spatial);
  const int K = mesh.nk(), n = n_spatial;
  if (rank <= 0) rank = n + 1;
  Rng rng(seed);
  auto envelope = [&](int p, int q) { return std::exp(-decay * std::abs(p - q)); };

  for (int k = 0; k < K; ++k)
    for (int p = 0; p < n; ++p) {
      H.h_at(k, p, p) = {rng.uniform(), 0.0};
      for (int q = p + 1; q < n; ++q) {
        const cplx z = 0.5 * envelope(p, q) * rng.complex_uniform();
        H.h_at(k, p, q) = z;
        H.h_at(k, q, p) = std::conj(z);
      }
    }

  // L[Q][j][k][p][q]; rho_j(-Q) is the adjoint of rho_j(Q). Self-inverse Q get
  // (X, X^dagger) pairs so the set of vectors stays closed under the adjoint.
  const int paired = 2 * ((rank + 1) / 2);
  const std::size_t nn = static_cast<std::size_t>(n) * n;
  auto lidx = [&](int j, int k, int p, int q) {
    return (static_cast<std::size_t>(j) * K + k) * nn + static_cast<std::size_t>(p) * n + q;
  };
  std::vector<std::vector<cplx>> L(K);
  std::vector<int> width(K, 0);
  const double scale = 0.3;
  for (int Q = 0; Q < K; ++Q) {
    const int nQ = mesh.neg(Q);
    if (nQ < Q) continue;
    if (nQ != Q) {
      width[Q] = width[nQ] = rank;
      L[Q].assign(static_cast<std::size_t>(rank) * K * nn, cplx{});
      L[nQ].assign(L[Q].size(), cplx{});
      for (int j = 0; j < rank; ++j)
        for (int k = 0; k < K; ++k)
          for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q) {
              const cplx z = scale * envelope(p, q) * rng.complex_uniform();
              L[Q][lidx(j, k, p, q)] = z;
              L[nQ][lidx(j, mesh.sub(k, Q), q, p)] = std::conj(z);
            }
    } else {
      width[Q] = paired;
      L[Q].assign(static_cast<std::size_t>(paired) * K * nn, cplx{});
      for (int j = 0; j < paired; j += 2)
        for (int k = 0; k < K; ++k)
          for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q) {
              const cplx z = scale * envelope(p, q) * rng.complex_uniform();
              L[Q][lidx(j, k, p, q)] = z;
              L[Q][lidx(j + 1, mesh.sub(k, Q), q, p)] = std::conj(z);
            }
    }
  }

  for (int Q = 0; Q < K; ++Q)
    for (int k = 0; k < K; ++k)
      for (int kp = 0; kp < K; ++kp)
        for (int p = 0; p < n; ++p)
          for (int q = 0; q < n; ++q)
            for (int r = 0; r < n; ++r)
              for (int s = 0; s < n; ++s) {
                cplx acc{};
                for (int j = 0; j < width[Q]; ++j)
                  acc += L[Q][lidx(j, k, p, q)] * std::conj(L[Q][lidx(j, kp, s, r)]);
                H.V_at(Q, k, kp, p, q, r, s) = acc;
              }
  return H;
}

SupercellHamiltonian fold_to_supercell(const KHamiltonian& H) {
  check_shape(H);
  const Mesh& m = H.mesh;
  const int K = m.nk(), n = H.n, ns = n * K;
  KHamiltonian S(Mesh({1, 1, 1}), ns);
  for (int k = 0; k < K; ++k)
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) S.h_at(0, k * n + p, k * n + q) = H.h_at(k, p, q);
  for (int Q = 0; Q < K; ++Q)
    for (int k = 0; k < K; ++k)
      for (int kp = 0; kp < K; ++kp) {
        const int kq = m.sub(k, Q), kr = m.sub(kp, Q);
        for (int p = 0; p < n; ++p)
          for (int q = 0; q < n; ++q)
            for (int r = 0; r < n; ++r)
              for (int s = 0; s < n; ++s)
                S.V_at(0, 0, 0, k * n + p, kq * n + q, kr * n + r, kp * n + s) =
                    H.V_at(Q, k, kp, p, q, r, s);
      }
  return S;
}

}  // namespace kbloch
