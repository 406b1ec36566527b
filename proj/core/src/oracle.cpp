// SPDX-License-Identifier: Apache-2.0
#include "kbloch/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <tuple>

#include "kbloch/lambda.hpp"

namespace kbloch {

namespace {

using Triplet = Eigen::Triplet<cplx>;
const cplx kI(0.0, 1.0);

cplx ipow(int e) {
  switch (((e % 4) + 4) % 4) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
  }
}

int modes_of(const Mesh& m, int n) {
  const int modes = 2 * n * m.nk();
  if (modes > kMaxModes) {
    std::ostringstream os;
    os << "dense oracle limited to " << kMaxModes << " spin orbitals, got " << modes;
    throw std::invalid_argument(os.str());
  }
  return modes;
}

// Applies a (create = false) or a^dagger (create = true) on mode j in place.
bool ladder(std::uint64_t& s, int j, bool create, double& sign) {
  const std::uint64_t bit = std::uint64_t{1} << j;
  if (static_cast<bool>(s & bit) == create) return false;
  if (std::popcount(s & (bit - 1)) & 1) sign = -sign;
  s ^= bit;
  return true;
}

SpMat identity(int dim) {
  SpMat I(dim, dim);
  I.setIdentity();
  return I;
}

// sum_sigma sum_IJ A_IJ a^dagger_{I sigma} a_{J sigma} over composite spatial indices.
SpMat one_body_fock(int modes, const Eigen::MatrixXcd& A) {
  const int dim = 1 << modes, norb = modes / 2;
  std::vector<Triplet> t;
  for (int b = 0; b < dim; ++b)
    for (int sg = 0; sg < 2; ++sg)
      for (int I = 0; I < norb; ++I)
        for (int J = 0; J < norb; ++J) {
          if (A(I, J) == cplx{}) continue;
          std::uint64_t s = static_cast<std::uint64_t>(b);
          double sign = 1.0;
          if (!ladder(s, 2 * J + sg, false, sign) || !ladder(s, 2 * I + sg, true, sign)) continue;
          t.emplace_back(static_cast<int>(s), b, sign * A(I, J));
        }
  SpMat m(dim, dim);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

Eigen::MatrixXcd full_one_body(const Mesh& mesh, int n, const std::vector<cplx>& h) {
  const int K = mesh.nk();
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(K * n, K * n);
  for (int k = 0; k < K; ++k)
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) A(k * n + p, k * n + q) = h[(static_cast<std::size_t>(k) * n + p) * n + q];
  return A;
}

// Fock(A) minus its identity component tr(A).
SpMat traceless_fock(int modes, const Eigen::MatrixXcd& A) {
  return one_body_fock(modes, A) - A.trace() * identity(1 << modes);
}

struct Coef {
  double c;
  Pauli P;
};

double max_abs(const Eigen::MatrixXcd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

double max_abs(const SpMat& m) {
  double out = 0.0;
  for (int c = 0; c < m.outerSize(); ++c)
    for (SpMat::InnerIterator it(m, c); it; ++it) out = std::max(out, std::abs(it.value()));
  return out;
}

double circ_dist(double a, double b) {
  double d = std::fmod(std::abs(a - b), 2 * std::numbers::pi);
  return std::min(d, 2 * std::numbers::pi - d);
}

}  // namespace

Pauli operator*(const Pauli& a, const Pauli& b) {
  Pauli r;
  r.x = a.x ^ b.x;
  r.z = a.z ^ b.z;
  r.phase = (a.phase + b.phase + 2 * std::popcount(a.z & b.x)) & 3;
  return r;
}

Pauli majorana(int mode, int t) {
  const std::uint64_t bit = std::uint64_t{1} << mode;
  if (t == 0) return {bit, bit - 1, 0};
  return {bit, (bit - 1) | bit, 1};
}

int hermitian_phase(std::uint64_t x, std::uint64_t z) { return std::popcount(x & z) & 3; }

SpMat to_matrix(const Pauli& P, int modes) {
  const int dim = 1 << modes;
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(dim));
  const cplx ph = ipow(P.phase);
  for (int b = 0; b < dim; ++b) {
    const std::uint64_t s = static_cast<std::uint64_t>(b);
    const double sign = (std::popcount(P.z & s) & 1) ? -1.0 : 1.0;
    t.emplace_back(static_cast<int>(s ^ P.x), b, sign * ph);
  }
  SpMat m(dim, dim);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

DenseOperator assemble_direct(const KHamiltonian& H) {
  check_shape(H);
  const Mesh& m = H.mesh;
  const int n = H.n, K = H.nk(), modes = modes_of(m, n), dim = 1 << modes;
  std::vector<Triplet> t;
  for (int b = 0; b < dim; ++b) {
    for (int sg = 0; sg < 2; ++sg)
      for (int k = 0; k < K; ++k)
        for (int p = 0; p < n; ++p)
          for (int q = 0; q < n; ++q) {
            const cplx v = H.h_at(k, p, q);
            if (v == cplx{}) continue;
            std::uint64_t s = static_cast<std::uint64_t>(b);
            double sign = 1.0;
            if (!ladder(s, mode_index(n, k, q, sg), false, sign) || !ladder(s, mode_index(n, k, p, sg), true, sign))
              continue;
            t.emplace_back(static_cast<int>(s), b, sign * v);
          }
    for (int Q = 0; Q < K; ++Q)
      for (int k = 0; k < K; ++k)
        for (int kp = 0; kp < K; ++kp) {
          const int kq = m.sub(k, Q), kpq = m.sub(kp, Q);
          for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q)
              for (int r = 0; r < n; ++r)
                for (int s_ = 0; s_ < n; ++s_) {
                  const cplx v = H.V_at(Q, k, kp, p, q, r, s_);
                  if (v == cplx{}) continue;
                  for (int sg = 0; sg < 2; ++sg)
                    for (int tau = 0; tau < 2; ++tau) {
                      std::uint64_t s = static_cast<std::uint64_t>(b);
                      double sign = 1.0;
                      if (!ladder(s, mode_index(n, kp, s_, tau), false, sign) ||
                          !ladder(s, mode_index(n, kpq, r, tau), true, sign) ||
                          !ladder(s, mode_index(n, kq, q, sg), false, sign) ||
                          !ladder(s, mode_index(n, k, p, sg), true, sign))
                        continue;
                      t.emplace_back(static_cast<int>(s), b, 0.5 * sign * v);
                    }
                }
        }
  }
  SpMat sp(dim, dim);
  sp.setFromTriplets(t.begin(), t.end());
  return {Eigen::MatrixXcd(sp), "direct", 0.0};
}

std::vector<SignedPauli> sparse_lcu(const SparseEntries& S) {
  const Mesh& m = S.mesh;
  const int n = S.n, K = m.nk();
  modes_of(m, n);
  KHamiltonian T(m, n);
  T.V = reconstruct(S);
  for (const OneBodyEntry& e : S.one_body) {
    T.h_at(e.k, e.p, e.q) = e.value;
    T.h_at(e.k, e.q, e.p) = std::conj(e.value);
  }
  const Pauli iP{0, 0, 1};
  auto g = [](int mode, int t) { return majorana(mode, t); };

  std::map<std::tuple<std::uint64_t, std::uint64_t, int>, double> merged;
  auto emit = [&](double c, const Pauli& P) {
    if (c == 0.0) return;
    const int e = (P.phase - hermitian_phase(P.x, P.z)) & 3;
    const double v = (e <= 1) ? c : -c;
    merged[{P.x, P.z, v > 0 ? 1 : -1}] += std::abs(v);
  };

  // One-body: (i/4)[Im h' S_pq + Re h' W_pq] per ordered (p,q) and spin.
  for (int k = 0; k < K; ++k)
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) {
        const cplx v = T.h_at(k, p, q);
        for (int sg = 0; sg < 2; ++sg) {
          const int a = mode_index(n, k, p, sg), b = mode_index(n, k, q, sg);
          emit(v.imag() / 4, iP * g(a, 0) * g(b, 0));
          emit(v.imag() / 4, iP * g(a, 1) * g(b, 1));
          emit(v.real() / 4, iP * g(a, 0) * g(b, 1));
          emit(-v.real() / 4, iP * g(a, 1) * g(b, 0));
        }
      }

  // Two-body: (1/32)[Re V (S S - D D) + Im V (D S + S D)].
  struct Pair {
    double c;
    Pauli P;
  };
  auto S_of = [&](int a, int b) { return std::array<Pair, 2>{{{1.0, g(a, 0) * g(b, 0)}, {1.0, g(a, 1) * g(b, 1)}}}; };
  auto D_of = [&](int a, int b) { return std::array<Pair, 2>{{{1.0, g(a, 1) * g(b, 0)}, {-1.0, g(a, 0) * g(b, 1)}}}; };
  for (int Q = 0; Q < K; ++Q)
    for (int k = 0; k < K; ++k)
      for (int kp = 0; kp < K; ++kp) {
        const int kq = m.sub(k, Q), kpq = m.sub(kp, Q);
        for (int p = 0; p < n; ++p)
          for (int q = 0; q < n; ++q)
            for (int r = 0; r < n; ++r)
              for (int s = 0; s < n; ++s) {
                const cplx v = T.V_at(Q, k, kp, p, q, r, s);
                if (v == cplx{}) continue;
                for (int sg = 0; sg < 2; ++sg)
                  for (int tau = 0; tau < 2; ++tau) {
                    const int a = mode_index(n, k, p, sg), b = mode_index(n, kq, q, sg);
                    const int c = mode_index(n, kpq, r, tau), e = mode_index(n, kp, s, tau);
                    const auto Sab = S_of(a, b), Dab = D_of(a, b), Sce = S_of(c, e), Dce = D_of(c, e);
                    for (const auto& x : Sab)
                      for (const auto& y : Sce) emit(v.real() / 32 * x.c * y.c, x.P * y.P);
                    for (const auto& x : Dab)
                      for (const auto& y : Dce) emit(-v.real() / 32 * x.c * y.c, x.P * y.P);
                    for (const auto& x : Dab)
                      for (const auto& y : Sce) emit(v.imag() / 32 * x.c * y.c, x.P * y.P);
                    for (const auto& x : Sab)
                      for (const auto& y : Dce) emit(v.imag() / 32 * x.c * y.c, x.P * y.P);
                  }
              }
      }

  std::vector<SignedPauli> out;
  out.reserve(merged.size());
  for (const auto& [key, w] : merged) {
    if (w == 0.0) continue;
    out.push_back({w, std::get<2>(key), std::get<0>(key), std::get<1>(key)});
  }
  return out;
}

SpMat signed_pauli_matrix(const SignedPauli& t, int modes) {
  return static_cast<double>(t.sign) * to_matrix({t.x, t.z, hermitian_phase(t.x, t.z)}, modes);
}

DenseOperator assemble_sparse(const SparseEntries& S) {
  const int modes = modes_of(S.mesh, S.n), dim = 1 << modes;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const SignedPauli& t : sparse_lcu(S)) m += t.weight * signed_pauli_matrix(t, modes);
  return {std::move(m), "sparse", 0.0};
}

DenseOperator assemble_sf(const KHamiltonian& H, const CholeskyFactors& C) {
  const Mesh& mesh = H.mesh;
  const int n = H.n, K = H.nk(), modes = modes_of(mesh, n), dim = 1 << modes;
  SpMat acc = traceless_fock(modes, full_one_body(mesh, n, effective_one_body(H)));
  const std::vector<double> ell = sf_block_norms(C);
  const SpMat I = identity(dim);
  for (int Q = 0; Q < K; ++Q)
    for (int j = 0; j < C.M; ++j) {
      Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(K * n, K * n), B = A;
      for (int k = 0; k < K; ++k) {
        const int kq = mesh.sub(k, Q);
        for (int p = 0; p < n; ++p)
          for (int q = 0; q < n; ++q) {
            const cplx L = C.at(Q, j, k, p, q);
            A(k * n + p, kq * n + q) += L / 2.0;
            A(kq * n + q, k * n + p) += std::conj(L) / 2.0;
            B(k * n + p, kq * n + q) += kI * L / 2.0;
            B(kq * n + q, k * n + p) += -kI * std::conj(L) / 2.0;
          }
      }
      const SpMat At = traceless_fock(modes, A), Bt = traceless_fock(modes, B);
      const double l = ell[static_cast<std::size_t>(Q) * C.M + j];
      acc += SpMat(0.5 * (At * At + Bt * Bt)) - (0.5 * l * l) * I;
    }
  return {Eigen::MatrixXcd(acc), "sf", 0.0};
}

DenseOperator assemble_df(const KHamiltonian& H, const DFFactors& D) {
  const Mesh& mesh = H.mesh;
  const int n = H.n, K = H.nk(), modes = modes_of(mesh, n), dim = 1 << modes;
  SpMat acc = traceless_fock(modes, full_one_body(mesh, n, effective_one_body(H)));
  const SpMat I = identity(dim);
  const auto norms = df_block_norms(D);
  std::vector<Eigen::MatrixXcd> A(static_cast<std::size_t>(K) * D.M, Eigen::MatrixXcd::Zero(K * n, K * n));
  std::vector<Eigen::MatrixXcd> B = A;
  for (const DFBlock& b : D.blocks) {
    if (b.rank() == 0) continue;
    const Eigen::MatrixXcd R = b.U * b.f.asDiagonal() * b.U.adjoint();
    std::vector<int> idx;
    for (int p = 0; p < n; ++p) idx.push_back(b.k * n + p);
    if (b.Q != 0)
      for (int q = 0; q < n; ++q) idx.push_back(mesh.sub(b.k, b.Q) * n + q);
    auto& T = (b.is_b ? B : A)[static_cast<std::size_t>(b.Q) * D.M + b.j];
    for (std::size_t r = 0; r < idx.size(); ++r)
      for (std::size_t c = 0; c < idx.size(); ++c)
        T(idx[r], idx[c]) += R(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  }
  for (std::size_t i = 0; i < A.size(); ++i) {
    const SpMat At = traceless_fock(modes, A[i]), Bt = traceless_fock(modes, B[i]);
    const auto [la, lb] = norms[i];
    acc += SpMat(0.5 * (At * At + Bt * Bt)) - (0.25 * (la * la + lb * lb)) * I;
  }
  return {Eigen::MatrixXcd(acc), "df", 0.0};
}

THCAssembly assemble_thc(const KHamiltonian& H, const THCFactors& T) {
  const Mesh& mesh = H.mesh;
  const int n = H.n, K = H.nk(), M = T.M, modes = modes_of(mesh, n), dim = 1 << modes;
  if (T.n != n || !(T.mesh == mesh)) throw std::invalid_argument("assemble_thc: factors do not match H");
  THCAssembly out;
  out.op.tag = "thc";
  out.op.m = Eigen::MatrixXcd::Zero(dim, dim);
  const SpMat I = identity(dim);

  std::vector<SpMat> ann(static_cast<std::size_t>(modes));
  for (int j = 0; j < modes; ++j)
    ann[static_cast<std::size_t>(j)] = 0.5 * (to_matrix(majorana(j, 0), modes) + kI * to_matrix(majorana(j, 1), modes));

  // Rotated Majoranas of c = sum_p coef[p] a_{k p sigma}.
  auto rotated = [&](int k, int sg, const Eigen::VectorXcd& coef) {
    SpMat c(dim, dim);
    for (int p = 0; p < n; ++p)
      if (coef[p] != cplx{}) c += coef[p] * ann[static_cast<std::size_t>(mode_index(n, k, p, sg))];
    const SpMat cd = c.adjoint();
    std::array<SpMat, 2> gam{SpMat(c + cd), SpMat(-kI * (c - cd))};
    for (const SpMat& gm : gam) {
      out.majorana_defect = std::max(out.majorana_defect, max_abs(SpMat(gm - SpMat(gm.adjoint()))));
      out.majorana_defect = std::max(out.majorana_defect, max_abs(SpMat(gm * gm - I)));
    }
    return gam;
  };

  CompensatedSum wsum;
  // One-body: sum_l lambda_l n_l with n = (1 + i g0 g1) / 2 in the eigenbasis of h(k).
  for (int k = 0; k < K; ++k) {
    Eigen::MatrixXcd h(n, n);
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) h(p, q) = H.h_at(k, p, q);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    for (int l = 0; l < n; ++l) {
      const double lam = es.eigenvalues()[l];
      const Eigen::VectorXcd coef = es.eigenvectors().col(l).conjugate();
      for (int sg = 0; sg < 2; ++sg) {
        const auto gm = rotated(k, sg, coef);
        out.op.m += (0.5 * lam) * I;
        out.op.m += (0.5 * lam * kI) * SpMat(gm[0] * gm[1]);
        wsum.add(std::abs(lam));
        out.terms += 2;
      }
    }
  }

  // Rotated Majoranas for every (k, mu, sigma).
  std::vector<std::array<SpMat, 2>> G(static_cast<std::size_t>(K) * M * 2);
  for (int k = 0; k < K; ++k)
    for (int mu = 0; mu < M; ++mu) {
      Eigen::VectorXcd coef(n);
      for (int p = 0; p < n; ++p) coef[p] = T.chi_tilde(k, p, mu);
      for (int sg = 0; sg < 2; ++sg) G[(static_cast<std::size_t>(k) * M + mu) * 2 + sg] = rotated(k, sg, coef);
    }
  auto gam = [&](int k, int mu, int sg) -> const std::array<SpMat, 2>& {
    return G[(static_cast<std::size_t>(k) * M + mu) * 2 + sg];
  };
  // c^dagger_a c_b = 1/4 sum ph(t1,t2) g_a,t1 g_b,t2.
  const cplx ph[2][2] = {{1.0, kI}, {-kI, 1.0}};

  for (int Q = 0; Q < K; ++Q)
    for (int g1 = 0; g1 < 8; ++g1)
      for (int g2 = 0; g2 < 8; ++g2)
        for (int mu = 0; mu < M; ++mu)
          for (int nu = 0; nu < M; ++nu) {
            const cplx z = T.zeta[T.zeta_idx(Q, g1, g2, mu, nu)];
            if (z == cplx{}) continue;
            for (int k = 0; k < K; ++k) {
              if (g_flag_of(mesh, k, Q) != g1) continue;
              const int kq = mesh.sub(k, Q);
              for (int kp = 0; kp < K; ++kp) {
                if (g_flag_of(mesh, kp, Q) != g2) continue;
                const int kpq = mesh.sub(kp, Q);
                const cplx Cc = 0.5 * z * T.norm(k, mu) * T.norm(kq, mu) * T.norm(kpq, nu) * T.norm(kp, nu);
                if (Cc == cplx{}) continue;
                for (int sg = 0; sg < 2; ++sg)
                  for (int tau = 0; tau < 2; ++tau) {
                    const auto &ga = gam(k, mu, sg), &gb = gam(kq, mu, sg);
                    const auto &gc = gam(kpq, nu, tau), &ge = gam(kp, nu, tau);
                    for (int t1 = 0; t1 < 2; ++t1)
                      for (int t2 = 0; t2 < 2; ++t2) {
                        const SpMat ab = ga[t1] * gb[t2];
                        for (int t3 = 0; t3 < 2; ++t3)
                          for (int t4 = 0; t4 < 2; ++t4) {
                            const SpMat U = ab * SpMat(gc[t3] * ge[t4]);
                            const cplx phase = ph[t1][t2] * ph[t3][t4];
                            // Real and imaginary parts of C are separate terms with weights |Re C|/16, |Im C|/16.
                            const double wr = std::abs(Cc.real()) / 16, wi = std::abs(Cc.imag()) / 16;
                            const cplx ur = (Cc.real() < 0 ? -1.0 : 1.0) * phase;
                            const cplx ui = (Cc.imag() < 0 ? -1.0 : 1.0) * kI * phase;
                            if (wr > 0) out.op.m += (wr * ur) * U, ++out.terms;
                            if (wi > 0) out.op.m += (wi * ui) * U, ++out.terms;
                            wsum.add(wr + wi);
                          }
                      }
                  }
              }
            }
          }
  out.weight_sum = wsum.value();
  return out;
}

Eigen::VectorXd spectrum(const DenseOperator& op) {
  const double herm = max_abs(op.m - op.m.adjoint());
  if (herm > 1e-10 * std::max(1.0, max_abs(op.m)))
    throw std::runtime_error("operator '" + op.tag + "' is not Hermitian (" + std::to_string(herm) + ")");
  const Eigen::MatrixXcd h = 0.5 * (op.m + op.m.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

SpectrumComparison compare_spectra(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double tol) {
  if (a.size() != b.size()) throw std::invalid_argument("compare_spectra: dimension mismatch");
  SpectrumComparison r;
  if (a.size() == 0) {
    r.pass = true;
    return r;
  }
  Eigen::VectorXd x = a, y = b;
  std::sort(x.data(), x.data() + x.size());
  std::sort(y.data(), y.data() + y.size());
  r.shift = x.mean() - y.mean();
  r.max_diff = ((x.array() - x.mean()) - (y.array() - y.mean())).abs().maxCoeff();
  r.pass = r.max_diff <= tol;
  return r;
}

BoundReport check_lambda_bound(const DenseOperator& op, double lambda) {
  const Eigen::VectorXd e = spectrum(op);
  BoundReport r;
  r.lambda = lambda;
  r.norm = e.size() ? e.cwiseAbs().maxCoeff() : 0.0;
  r.margin = lambda + 1e-9 - r.norm;
  r.pass = r.margin >= 0.0;
  return r;
}

std::vector<WeightedUnitary> to_weighted_unitaries(const std::vector<SignedPauli>& terms, int modes) {
  std::vector<WeightedUnitary> out;
  out.reserve(terms.size());
  for (const auto& t : terms) out.push_back({t.weight, signed_pauli_matrix(t, modes)});
  return out;
}

WalkReport walk_spectrum(const std::vector<WeightedUnitary>& all_terms, double lambda, double tol) {
  std::vector<const WeightedUnitary*> terms;
  CompensatedSum ws;
  for (const auto& t : all_terms) {
    if (t.weight < 0) throw InvalidLcuError("negative LCU weight");
    ws.add(t.weight);
    if (t.weight > 0) terms.push_back(&t);
  }
  if (terms.empty() || !(lambda > 0)) throw InvalidLcuError("empty LCU or nonpositive lambda");
  if (std::abs(ws.value() - lambda) > 1e-12 * std::max(1.0, lambda))
    throw InvalidLcuError("weights do not sum to lambda");
  const int D = static_cast<int>(terms.front()->U.rows());
  const int T = static_cast<int>(terms.size());
  const SpMat I = identity(D);
  for (const auto* t : terms) {
    if (t->U.rows() != D || t->U.cols() != D) throw InvalidLcuError("LCU unitaries differ in dimension");
    if (max_abs(SpMat(SpMat(t->U.adjoint() * t->U) - I)) > 1e-10) throw InvalidLcuError("LCU term is not unitary");
  }
  if (static_cast<std::int64_t>(T) * D > (1 << 14)) throw std::invalid_argument("walk_spectrum: terms x dim exceeds 2^14");

  Eigen::VectorXd amp(T);
  Eigen::MatrixXcd Hm = Eigen::MatrixXcd::Zero(D, D);
  for (int l = 0; l < T; ++l) {
    amp[l] = std::sqrt(terms[static_cast<std::size_t>(l)]->weight / lambda);
    Hm += terms[static_cast<std::size_t>(l)]->weight * terms[static_cast<std::size_t>(l)]->U;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> hes(0.5 * (Hm + Hm.adjoint()), Eigen::EigenvaluesOnly);

  std::vector<double> expected;
  for (int i = 0; i < D; ++i) {
    const double x = std::clamp(hes.eigenvalues()[i] / lambda, -1.0, 1.0);
    const double th = std::acos(x);
    if (1.0 - std::abs(x) <= 1e-14) {
      expected.push_back(x > 0 ? 0.0 : std::numbers::pi);
    } else {
      expected.push_back(th);
      expected.push_back(-th);
    }
  }

  // W x = R SELECT x on the full T*D space, blocks ordered by term.
  auto apply_W = [&](const Eigen::MatrixXcd& X) {
    Eigen::MatrixXcd Y(X.rows(), X.cols());
    for (int l = 0; l < T; ++l) Y.middleRows(l * D, D) = terms[static_cast<std::size_t>(l)]->U * X.middleRows(l * D, D);
    Eigen::MatrixXcd proj = Eigen::MatrixXcd::Zero(D, X.cols());
    for (int l = 0; l < T; ++l) proj += amp[l] * Y.middleRows(l * D, D);
    for (int l = 0; l < T; ++l) Y.middleRows(l * D, D) = 2.0 * amp[l] * proj - Y.middleRows(l * D, D);
    return Y;
  };

  WalkReport rep;
  std::vector<double> observed;
  const int full = T * D;
  if (full <= 512) {
    rep.dense = true;
    const Eigen::MatrixXcd W = apply_W(Eigen::MatrixXcd::Identity(full, full));
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ces(W, false);
    for (int i = 0; i < full; ++i) observed.push_back(std::arg(ces.eigenvalues()[i]));
    rep.space_dim = full;
  } else {
    Eigen::MatrixXcd Lj = Eigen::MatrixXcd::Zero(full, D);
    for (int l = 0; l < T; ++l) Lj.middleRows(l * D, D) = amp[l] * Eigen::MatrixXcd::Identity(D, D);
    Eigen::MatrixXcd span(full, 2 * D);
    span.leftCols(D) = Lj;
    Eigen::MatrixXcd SL(full, D);
    for (int l = 0; l < T; ++l) SL.middleRows(l * D, D) = terms[static_cast<std::size_t>(l)]->U * Lj.middleRows(l * D, D);
    span.rightCols(D) = SL;
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(span, Eigen::ComputeThinU);
    const Eigen::VectorXd& sv = svd.singularValues();
    int rank = 0;
    while (rank < sv.size() && sv[rank] > 1e-10 * sv[0]) ++rank;
    const Eigen::MatrixXcd B = svd.matrixU().leftCols(rank);
    const Eigen::MatrixXcd WB = apply_W(B);
    const Eigen::MatrixXcd small = B.adjoint() * WB;
    if (max_abs(WB - B * small) > 1e-9) throw std::runtime_error("walk_spectrum: subspace is not invariant");
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ces(small, false);
    for (int i = 0; i < rank; ++i) observed.push_back(std::arg(ces.eigenvalues()[i]));
    rep.space_dim = rank;
  }

  // Greedy nearest matching on the circle.
  std::vector<bool> used(observed.size(), false);
  rep.expected = static_cast<int>(expected.size());
  for (double e : expected) {
    int best = -1;
    double bd = 1e300;
    for (std::size_t i = 0; i < observed.size(); ++i)
      if (!used[i] && circ_dist(e, observed[i]) < bd) {
        bd = circ_dist(e, observed[i]);
        best = static_cast<int>(i);
      }
    if (best < 0) {
      rep.max_error = 1e300;
      continue;
    }
    used[static_cast<std::size_t>(best)] = true;
    rep.max_error = std::max(rep.max_error, bd);
    if (bd <= tol) ++rep.matched;
  }
  bool leftovers_ok = true;
  for (std::size_t i = 0; i < observed.size(); ++i)
    if (!used[i] && std::min(circ_dist(observed[i], 0.0), circ_dist(observed[i], std::numbers::pi)) > tol)
      leftovers_ok = false;
  if (!rep.dense && observed.size() != expected.size()) leftovers_ok = false;
  rep.phases = observed;
  std::sort(rep.phases.begin(), rep.phases.end());
  rep.pass = rep.matched == rep.expected && leftovers_ok;
  return rep;
}

bool VerifyReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const VerifyCheck& c) { return c.pass; });
}

VerifyReport verify_instance(const KHamiltonian& H, const THCFactors* thc, int workers, double tol) {
  check_shape(H);
  modes_of(H.mesh, H.n);
  VerifyReport rep;
  // value <= tolerance passes
  auto err = [&](std::string name, double v, double t) { rep.checks.push_back({std::move(name), v, t, v <= t}); };
  // margin >= 0 passes
  auto margin = [&](std::string name, const BoundReport& b) {
    rep.checks.push_back({std::move(name), b.margin, 0.0, b.pass});
  };
  auto rel = [](double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); };

  err("symmetry", validate(H, 1e-10).max_violation(), 1e-10);
  const Eigen::VectorXd ref = spectrum(assemble_direct(H));

  const SparseEntries S = sparsify(H, 0.0);
  const DenseOperator sp = assemble_sparse(S);
  err("spectrum sparse", compare_spectra(spectrum(sp), ref, tol).max_diff, tol);
  const LambdaReport ls = lambda_sparse(S);
  margin("bound sparse", check_lambda_bound(sp, ls.total));
  err("lambda sparse entries vs tensor", rel(ls.total, lambda_sparse(H).total), 1e-12);
  err("fold invariance", rel(lambda_sparse(fold_to_supercell(H)).total, lambda_sparse(H).total), 1e-12);

  const CholeskyFactors C = cholesky_sf(H, 0.0, workers);
  const DenseOperator sf = assemble_sf(H, C);
  err("spectrum sf", compare_spectra(spectrum(sf), ref, tol).max_diff, tol);
  margin("bound sf", check_lambda_bound(sf, lambda_sf(H, C).total));

  const DFFactors D = double_factorize(C, 0.0, false, workers);
  const DenseOperator df = assemble_df(H, D);
  err("spectrum df", compare_spectra(spectrum(df), ref, tol).max_diff, tol);
  margin("bound df", check_lambda_bound(df, lambda_df(H, D).total));

  if (thc != nullptr) {
    const THCAssembly ta = assemble_thc(H, *thc);
    const double lt = lambda_thc(H, *thc).total;
    err("spectrum thc", compare_spectra(spectrum(ta.op), ref, tol).max_diff, tol);
    margin("bound thc", check_lambda_bound(ta.op, lt));
    err("thc weights vs lambda", rel(ta.weight_sum, lt), 1e-12);
    err("thc rotated majoranas", ta.majorana_defect, 1e-10);
  }

  if (H.n * H.nk() <= 2) {
    const std::vector<SignedPauli> terms = sparse_lcu(S);
    double lam = 0.0;
    for (const auto& t : terms) lam += t.weight;
    const WalkReport w = walk_spectrum(to_weighted_unitaries(terms, 2 * H.n * H.nk()), lam, 1e-8);
    err("walk phases", w.max_error, 1e-8);
    rep.checks.back().pass = w.pass;
  }
  return rep;
}

}  // namespace kbloch
