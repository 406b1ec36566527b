// SPDX-License-Identifier: Apache-2.0
#include "kbloch/factorize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "kbloch/parallel.hpp"

namespace kbloch {

namespace {

struct VIndex {
  int Q, k, kp, p, q, r, s;
};

// Images of an entry under swap, conj and conj_swap. conj flags mark images
// that carry the complex conjugate of the value.
struct Orbit {
  VIndex idx[4];
  bool conj[4];
};

Orbit orbit_of(const Mesh& m, const VIndex& v) {
  const int nQ = m.neg(v.Q), kq = m.sub(v.k, v.Q), kpq = m.sub(v.kp, v.Q);
  return {{v,
           {nQ, kpq, kq, v.r, v.s, v.p, v.q},
           {nQ, kq, kpq, v.q, v.p, v.s, v.r},
           {v.Q, v.kp, v.k, v.s, v.r, v.q, v.p}},
          {false, false, true, true}};
}

std::size_t flat(const KHamiltonian& H, const VIndex& v) { return H.vidx(v.Q, v.k, v.kp, v.p, v.q, v.r, v.s); }

}  // namespace

// ---------------------------------------------------------------- sparse

std::vector<cplx> exchange_correction(const KHamiltonian& H) {
  check_shape(H);
  const int K = H.nk(), n = H.n;
  std::vector<cplx> X(H.h.size());
  for (int k = 0; k < K; ++k)
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) {
        cplx acc{};
        for (int kp = 0; kp < K; ++kp)
          for (int r = 0; r < n; ++r) acc += H.V_at(0, k, kp, p, q, r, r);
        X[H.hidx(k, p, q)] = acc;
      }
  return X;
}

std::vector<cplx> effective_one_body(const KHamiltonian& H) {
  std::vector<cplx> X = exchange_correction(H);
  std::vector<cplx> hp(H.h.size());
  const int K = H.nk(), n = H.n;
  for (std::size_t i = 0; i < hp.size(); ++i) hp[i] = H.h[i] + X[i];
  // Enforce exact Hermiticity so downstream operators are Hermitian bit for bit.
  for (int k = 0; k < K; ++k)
    for (int p = 0; p < n; ++p) {
      hp[H.hidx(k, p, p)] = {hp[H.hidx(k, p, p)].real(), 0.0};
      for (int q = p + 1; q < n; ++q) {
        const cplx z = 0.5 * (hp[H.hidx(k, p, q)] + std::conj(hp[H.hidx(k, q, p)]));
        hp[H.hidx(k, p, q)] = z;
        hp[H.hidx(k, q, p)] = std::conj(z);
      }
    }
  return hp;
}

SparseEntries sparsify(const KHamiltonian& H, double threshold) {
  check_shape(H);
  SparseEntries S;
  S.mesh = H.mesh;
  S.n = H.n;
  S.threshold = threshold;
  const Mesh& m = H.mesh;
  const int K = H.nk(), n = H.n;
  auto keep = [&](cplx z) { return std::max(std::abs(z.real()), std::abs(z.imag())) > threshold; };

  for (int Q = 0; Q < K; ++Q)
    for (int k = 0; k < K; ++k)
      for (int kp = 0; kp < K; ++kp)
        for (int p = 0; p < n; ++p)
          for (int q = 0; q < n; ++q)
            for (int r = 0; r < n; ++r)
              for (int s = 0; s < n; ++s) {
                const VIndex v{Q, k, kp, p, q, r, s};
                const Orbit o = orbit_of(m, v);
                const std::size_t self = flat(H, v);
                std::size_t f[4];
                bool rep = true;
                for (int i = 0; i < 4; ++i) {
                  f[i] = flat(H, o.idx[i]);
                  if (f[i] < self) rep = false;
                }
                if (!rep) continue;
                std::sort(f, f + 4);
                const int size = static_cast<int>(std::unique(f, f + 4) - f);
                const cplx z = H.V[self];
                if (!keep(z)) continue;
                S.two_body.push_back({Q, k, kp, p, q, r, s, z, size});
              }

  const std::vector<cplx> hp = effective_one_body(H);
  for (int k = 0; k < K; ++k)
    for (int p = 0; p < n; ++p)
      for (int q = p; q < n; ++q) {
        const cplx z = hp[H.hidx(k, p, q)];
        if (keep(z)) S.one_body.push_back({k, p, q, z});
      }
  S.d = 2 * static_cast<std::int64_t>(S.two_body.size() + S.one_body.size());
  return S;
}

std::vector<cplx> reconstruct(const SparseEntries& S) {
  KHamiltonian H(S.mesh, S.n);
  for (const SparseEntry& e : S.two_body) {
    const Orbit o = orbit_of(S.mesh, {e.Q, e.k, e.kp, e.p, e.q, e.r, e.s});
    for (int i = 0; i < 4; ++i) H.V[flat(H, o.idx[i])] = o.conj[i] ? std::conj(e.value) : e.value;
  }
  return H.V;
}

// ---------------------------------------------------------------- single factorization

CholeskyFactors cholesky_sf(const KHamiltonian& H, double tol, int workers) {
  check_shape(H);
  const int K = H.nk(), n = H.n;
  const int D = K * n * n;
  std::vector<std::vector<Eigen::VectorXcd>> vecs(K);
  parallel_for(K, workers, [&](int Q) {
    Eigen::MatrixXcd A(D, D);
    for (int k = 0; k < K; ++k)
      for (int kp = 0; kp < K; ++kp)
        for (int p = 0; p < n; ++p)
          for (int q = 0; q < n; ++q)
            for (int r = 0; r < n; ++r)
              for (int s = 0; s < n; ++s)
                A((k * n + p) * n + q, (kp * n + s) * n + r) = H.V_at(Q, k, kp, p, q, r, s);
    Eigen::VectorXd diag = A.diagonal().real();
    const double top = diag.size() ? std::max(0.0, diag.maxCoeff()) : 0.0;
    const double stop = std::max(tol, 64.0 * std::numeric_limits<double>::epsilon() * top);
    auto check_psd = [&] {
      if (diag.size() && diag.minCoeff() < -stop) {
        std::ostringstream os;
        os << "V is not positive semidefinite at Q=" << Q << " (diagonal " << diag.minCoeff() << ")";
        throw NotPsdError(os.str());
      }
    };
    check_psd();
    auto& out = vecs[Q];
    while (static_cast<int>(out.size()) < D) {
      int piv = 0;
      for (int i = 1; i < D; ++i)
        if (diag[i] > diag[piv]) piv = i;
      if (diag[piv] <= stop) break;
      Eigen::VectorXcd v = A.col(piv);
      for (const auto& l : out) v -= l * std::conj(l[piv]);
      v /= std::sqrt(diag[piv]);
      for (int i = 0; i < D; ++i) diag[i] -= std::norm(v[i]);
      diag[piv] = 0.0;
      out.push_back(std::move(v));
      check_psd();
    }
  });

  CholeskyFactors C;
  C.mesh = H.mesh;
  C.n = n;
  C.tol = tol;
  for (const auto& v : vecs) {
    C.rank.push_back(static_cast<int>(v.size()));
    C.M = std::max(C.M, static_cast<int>(v.size()));
  }
  C.L.assign(static_cast<std::size_t>(K) * C.M * D, cplx{});
  for (int Q = 0; Q < K; ++Q)
    for (int j = 0; j < C.rank[Q]; ++j)
      for (int a = 0; a < D; ++a) C.L[C.lidx(Q, j, 0, 0, 0) + a] = vecs[Q][j][a];
  return C;
}

std::vector<cplx> reconstruct(const CholeskyFactors& C) {
  KHamiltonian H(C.mesh, C.n);
  const int K = C.mesh.nk(), n = C.n;
  for (int Q = 0; Q < K; ++Q)
    for (int k = 0; k < K; ++k)
      for (int kp = 0; kp < K; ++kp)
        for (int p = 0; p < n; ++p)
          for (int q = 0; q < n; ++q)
            for (int r = 0; r < n; ++r)
              for (int s = 0; s < n; ++s) {
                cplx acc{};
                for (int j = 0; j < C.M; ++j) acc += C.at(Q, j, k, p, q) * std::conj(C.at(Q, j, kp, s, r));
                H.V_at(Q, k, kp, p, q, r, s) = acc;
              }
  return H.V;
}

// ---------------------------------------------------------------- double factorization

std::vector<GivensRotation> givens_decompose(const Eigen::MatrixXcd& U, Eigen::VectorXcd* phases) {
  if (U.rows() != U.cols()) throw std::invalid_argument("givens_decompose: matrix must be square");
  Eigen::MatrixXcd W = U;
  const int dim = static_cast<int>(U.rows());
  std::vector<GivensRotation> rots;
  for (int c = 0; c + 1 < dim; ++c)
    for (int i = dim - 1; i > c; --i) {
      const cplx a = W(i - 1, c), b = W(i, c);
      const double r = std::hypot(std::abs(a), std::abs(b));
      double cs = 1.0;
      cplx sn{};
      if (r > 0.0) {
        if (std::abs(a) == 0.0) {
          cs = 0.0;
          sn = 1.0;
        } else {
          cs = std::abs(a) / r;
          sn = cs * b / a;
        }
      }
      const Eigen::RowVectorXcd top = W.row(i - 1), bot = W.row(i);
      W.row(i - 1) = cs * top + std::conj(sn) * bot;
      W.row(i) = -sn * top + cs * bot;
      rots.push_back({i, std::atan2(std::abs(sn), cs), std::arg(sn)});
    }
  if (phases) *phases = W.diagonal();
  return rots;
}

Eigen::MatrixXcd givens_reconstruct(const std::vector<GivensRotation>& rots, const Eigen::VectorXcd& phases) {
  Eigen::MatrixXcd M = phases.asDiagonal();
  for (auto it = rots.rbegin(); it != rots.rend(); ++it) {
    const double cs = std::cos(it->theta);
    const cplx sn = std::polar(std::sin(it->theta), it->phi);
    const int i = it->row;
    const Eigen::RowVectorXcd top = M.row(i - 1), bot = M.row(i);
    M.row(i - 1) = cs * top - std::conj(sn) * bot;
    M.row(i) = sn * top + cs * bot;
  }
  return M;
}

Eigen::MatrixXcd df_block_matrix(const CholeskyFactors& C, int Q, int j, int k, bool is_b) {
  const int n = C.n;
  Eigen::MatrixXcd L(n, n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) L(p, q) = C.at(Q, j, k, p, q);
  const cplx I(0.0, 1.0);
  if (Q == 0) return is_b ? Eigen::MatrixXcd(I * (L - L.adjoint()) / 2.0) : Eigen::MatrixXcd((L + L.adjoint()) / 2.0);
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  const cplx f = is_b ? I : cplx(1.0);
  A.topRightCorner(n, n) = f * L / 2.0;
  A.bottomLeftCorner(n, n) = std::conj(f) * L.adjoint() / 2.0;
  return A;
}

DFFactors double_factorize(const CholeskyFactors& C, double eigtol, bool relative, int workers) {
  const int K = C.mesh.nk();
  DFFactors D;
  D.mesh = C.mesh;
  D.n = C.n;
  D.M = C.M;
  D.eigtol = eigtol;
  D.relative = relative;
  std::vector<std::vector<DFBlock>> perQ(K);
  parallel_for(K, workers, [&](int Q) {
    for (int j = 0; j < C.M; ++j)
      for (int k = 0; k < K; ++k)
        for (int b = 0; b < 2; ++b) {
          const Eigen::MatrixXcd A = df_block_matrix(C, Q, j, k, b == 1);
          Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A);
          const Eigen::VectorXd& f = es.eigenvalues();
          const double cut = relative ? eigtol * f.cwiseAbs().maxCoeff() : eigtol;
          std::vector<int> keep;
          for (int i = 0; i < f.size(); ++i)
            if (f[i] != 0.0 && std::abs(f[i]) >= cut) keep.push_back(i);
          DFBlock blk;
          blk.Q = Q;
          blk.j = j;
          blk.k = k;
          blk.is_b = b == 1;
          blk.f.resize(static_cast<Eigen::Index>(keep.size()));
          blk.U.resize(A.rows(), static_cast<Eigen::Index>(keep.size()));
          for (std::size_t c = 0; c < keep.size(); ++c) {
            blk.f[static_cast<Eigen::Index>(c)] = f[keep[c]];
            blk.U.col(static_cast<Eigen::Index>(c)) = es.eigenvectors().col(keep[c]);
          }
          const int dim = static_cast<int>(A.rows());
          for (int c = 0; c < blk.rank() && c + 1 < dim; ++c) blk.givens += dim - 1 - c;
          perQ[Q].push_back(std::move(blk));
        }
  });
  for (auto& v : perQ)
    for (auto& b : v) {
      D.total_rank += b.rank();
      D.blocks.push_back(std::move(b));
    }
  D.xi = D.M > 0 ? static_cast<double>(D.total_rank) / (2.0 * K * D.M) : 0.0;
  return D;
}

std::vector<cplx> reconstruct(const DFFactors& D) {
  const Mesh& m = D.mesh;
  const int K = m.nk(), n = D.n;
  // L-hat recovered from A - iB, restricted to the (k rows, k(-)Q columns) block.
  std::vector<cplx> Lh(static_cast<std::size_t>(K) * D.M * K * n * n, cplx{});
  auto li = [&](int Q, int j, int k, int p, int q) {
    return ((((static_cast<std::size_t>(Q) * D.M + j) * K + k) * n + p) * n) + q;
  };
  const cplx I(0.0, 1.0);
  for (const DFBlock& b : D.blocks) {
    const Eigen::MatrixXcd R = b.U * b.f.asDiagonal() * b.U.adjoint();
    const cplx w = b.is_b ? -I : cplx(1.0);
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) Lh[li(b.Q, b.j, b.k, p, q)] += w * (b.Q == 0 ? R(p, q) : R(p, n + q));
  }
  KHamiltonian H(m, n);
  for (int Q = 0; Q < K; ++Q)
    for (int k = 0; k < K; ++k)
      for (int kp = 0; kp < K; ++kp)
        for (int p = 0; p < n; ++p)
          for (int q = 0; q < n; ++q)
            for (int r = 0; r < n; ++r)
              for (int s = 0; s < n; ++s) {
                cplx acc{};
                for (int j = 0; j < D.M; ++j) acc += Lh[li(Q, j, k, p, q)] * std::conj(Lh[li(Q, j, kp, s, r)]);
                H.V_at(Q, k, kp, p, q, r, s) = acc;
              }
  return H.V;
}

// ---------------------------------------------------------------- tensor hypercontraction

cplx THCFactors::chi_tilde(int k, int p, int mu) const {
  const double nrm = norm(k, mu);
  return nrm > 0.0 ? chi[chi_idx(k, p, mu)] / nrm : cplx{};
}

std::size_t thc_zeta_size(const Mesh& mesh, int M) {
  return static_cast<std::size_t>(mesh.nk()) * 64 * M * M;
}

namespace {

std::size_t zi(int M, int Q, int g1, int g2, int mu, int nu) {
  return ((((static_cast<std::size_t>(Q) * 8 + g1) * 8 + g2) * M + mu) * M) + nu;
}

void check_zeta(const Mesh& mesh, int M, const std::vector<cplx>& zeta) {
  if (M < 1 || zeta.size() != thc_zeta_size(mesh, M)) throw DataError("structural error: zeta has the wrong size");
}

}  // namespace

double thc_symmetry_violation(const Mesh& mesh, int M, const std::vector<cplx>& z) {
  check_zeta(mesh, M, z);
  double worst = 0.0;
  for (int Q = 0; Q < mesh.nk(); ++Q) {
    const int nQ = mesh.neg(Q), mask = reachable_g_mask(mesh, Q);
    for (int g1 = 0; g1 < 8; ++g1)
      for (int g2 = 0; g2 < 8; ++g2)
        for (int mu = 0; mu < M; ++mu)
          for (int nu = 0; nu < M; ++nu) {
            const cplx v = z[zi(M, Q, g1, g2, mu, nu)];
            if ((g1 & ~mask) || (g2 & ~mask)) {
              worst = std::max(worst, std::abs(v));
              continue;
            }
            const int n1 = g1 ^ mask, n2 = g2 ^ mask;
            worst = std::max(worst, std::abs(v - std::conj(z[zi(M, nQ, n1, n2, mu, nu)])));
            worst = std::max(worst, std::abs(v - z[zi(M, nQ, n2, n1, nu, mu)]));
            worst = std::max(worst, std::abs(v - std::conj(z[zi(M, Q, g2, g1, nu, mu)])));
          }
  }
  return worst;
}

std::vector<cplx> thc_symmetrize(const Mesh& mesh, int M, const std::vector<cplx>& z) {
  check_zeta(mesh, M, z);
  std::vector<cplx> out(z.size(), cplx{});
  for (int Q = 0; Q < mesh.nk(); ++Q) {
    const int nQ = mesh.neg(Q), mask = reachable_g_mask(mesh, Q);
    for (int g1 = 0; g1 < 8; ++g1)
      for (int g2 = 0; g2 < 8; ++g2) {
        if ((g1 & ~mask) || (g2 & ~mask)) continue;
        const int n1 = g1 ^ mask, n2 = g2 ^ mask;
        for (int mu = 0; mu < M; ++mu)
          for (int nu = 0; nu < M; ++nu)
            out[zi(M, Q, g1, g2, mu, nu)] =
                0.25 * (z[zi(M, Q, g1, g2, mu, nu)] + std::conj(z[zi(M, nQ, n1, n2, mu, nu)]) +
                        z[zi(M, nQ, n2, n1, nu, mu)] + std::conj(z[zi(M, Q, g2, g1, nu, mu)]));
      }
  }
  return out;
}

std::vector<double> thc_norm_sums(const THCFactors& T) {
  const Mesh& m = T.mesh;
  const int K = m.nk();
  std::vector<double> S(static_cast<std::size_t>(K) * 8 * T.M, 0.0);
  for (int Q = 0; Q < K; ++Q)
    for (int k = 0; k < K; ++k) {
      const int g = g_flag_of(m, k, Q), kq = m.sub(k, Q);
      for (int mu = 0; mu < T.M; ++mu)
        S[(static_cast<std::size_t>(Q) * 8 + g) * T.M + mu] += T.norm(k, mu) * T.norm(kq, mu);
    }
  return S;
}

THCFactors ingest_thc(const std::vector<cplx>& chi, const std::vector<cplx>& zeta, const Mesh& mesh, int n,
                      int M, double tol) {
  if (n < 1 || M < 1 || chi.size() != static_cast<std::size_t>(mesh.nk()) * n * M)
    throw DataError("structural error: chi has the wrong size");
  const double viol = thc_symmetry_violation(mesh, M, zeta);
  if (viol > tol) {
    std::ostringstream os;
    os << "zeta violates the THC symmetry relations by " << viol << " (tolerance " << tol << ")";
    throw DataError(os.str());
  }
  THCFactors T;
  T.mesh = mesh;
  T.n = n;
  T.M = M;
  T.chi = chi;
  T.zeta = thc_symmetrize(mesh, M, zeta);
  T.norms.assign(static_cast<std::size_t>(mesh.nk()) * M, 0.0);
  for (int k = 0; k < mesh.nk(); ++k)
    for (int mu = 0; mu < M; ++mu) {
      double s = 0.0;
      for (int p = 0; p < n; ++p) s += std::norm(chi[T.chi_idx(k, p, mu)]);
      T.norms[static_cast<std::size_t>(k) * M + mu] = std::sqrt(s);
    }
  T.c_thc = static_cast<double>(M) / n;
  return T;
}

std::vector<cplx> reconstruct(const THCFactors& T) {
  const Mesh& m = T.mesh;
  const int K = m.nk(), n = T.n, M = T.M;
  // P[Q][k][p][q][mu] = conj(chi[k][p][mu]) chi[k(-)Q][q][mu]
  std::vector<cplx> P(static_cast<std::size_t>(K) * K * n * n * M);
  auto pi = [&](int Q, int k, int p, int q, int mu) {
    return ((((static_cast<std::size_t>(Q) * K + k) * n + p) * n + q) * M) + mu;
  };
  for (int Q = 0; Q < K; ++Q)
    for (int k = 0; k < K; ++k)
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
          for (int mu = 0; mu < M; ++mu)
            P[pi(Q, k, p, q, mu)] = std::conj(T.chi[T.chi_idx(k, p, mu)]) * T.chi[T.chi_idx(m.sub(k, Q), q, mu)];
  KHamiltonian H(m, n);
  for (int Q = 0; Q < K; ++Q)
    for (int k = 0; k < K; ++k)
      for (int kp = 0; kp < K; ++kp) {
        const int g1 = g_flag_of(m, k, Q), g2 = g_flag_of(m, kp, Q);
        for (int p = 0; p < n; ++p)
          for (int q = 0; q < n; ++q)
            for (int r = 0; r < n; ++r)
              for (int s = 0; s < n; ++s) {
                cplx acc{};
                for (int mu = 0; mu < M; ++mu)
                  for (int nu = 0; nu < M; ++nu)
                    // conj(chi[k'(-)Q][r][nu]) chi[k'][s][nu] = conj(P[Q][k'][s][r][nu])
                    acc += P[pi(Q, k, p, q, mu)] * T.zeta[T.zeta_idx(Q, g1, g2, mu, nu)] *
                           std::conj(P[pi(Q, kp, s, r, nu)]);
                H.V_at(Q, k, kp, p, q, r, s) = acc;
              }
      }
  return H.V;
}

SyntheticTHC generate_synthetic_thc(const Mesh& mesh, int n_spatial, std::uint64_t seed, int M) {
  if (n_spatial < 1 || M < 1) throw std::invalid_argument("generate_synthetic_thc: n and M must be >= 1");
  const int K = mesh.nk(), n = n_spatial;
  Rng rng(seed);
  KHamiltonian H(mesh, n);
  for (int k = 0; k < K; ++k)
    for (int p = 0; p < n; ++p) {
      H.h_at(k, p, p) = {rng.uniform(), 0.0};
      for (int q = p + 1; q < n; ++q) {
        const cplx z = 0.5 * rng.complex_uniform();
        H.h_at(k, p, q) = z;
        H.h_at(k, q, p) = std::conj(z);
      }
    }
  std::vector<cplx> chi(static_cast<std::size_t>(K) * n * M);
  for (auto& c : chi) c = rng.complex_uniform();
  std::vector<cplx> zeta(thc_zeta_size(mesh, M), cplx{});
  for (int Q = 0; Q < K; ++Q) {
    const int mask = reachable_g_mask(mesh, Q);
    std::vector<int> flags;
    for (int g = 0; g < 8; ++g)
      if ((g & ~mask) == 0) flags.push_back(g);
    const int D = static_cast<int>(flags.size()) * M;
    Eigen::MatrixXcd W(D, D);
    for (int i = 0; i < D; ++i)
      for (int j = 0; j < D; ++j) W(i, j) = rng.complex_uniform();
    const Eigen::MatrixXcd Z = W * W.adjoint() * (0.25 / D);
    for (int a = 0; a < D; ++a)
      for (int b = 0; b < D; ++b)
        zeta[zi(M, Q, flags[a / M], flags[b / M], a % M, b % M)] = Z(a, b);
  }
  zeta = thc_symmetrize(mesh, M, zeta);
  SyntheticTHC out{std::move(H), ingest_thc(chi, zeta, mesh, n, M, 1e-12)};
  out.H.V = reconstruct(out.thc);
  return out;
}

double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("max_abs_diff: size mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace kbloch
