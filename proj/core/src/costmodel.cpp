// SPDX-License-Identifier: Apache-2.0
#include "kbloch/costmodel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace kbloch {

using i64 = std::int64_t;

namespace {

i64 qroam_value(i64 L, i64 m, QroamMode mode, i64 k) {
  const i64 lookups = static_cast<i64>(ceil_div(static_cast<std::uint64_t>(L), static_cast<std::uint64_t>(k)));
  return mode == QroamMode::Output ? lookups + m * (k - 1) : lookups + k;
}

i64 pow2_ceil(i64 x) { return i64{1} << ceil_log2(static_cast<std::uint64_t>(std::max<i64>(x, 1))); }

i64 lg(i64 x) { return ceil_log2(static_cast<std::uint64_t>(x)); }
i64 lg_ratio(i64 a, i64 b) { return ceil_log2_real(static_cast<double>(a) / static_cast<double>(b)); }
i64 cdiv(i64 a, i64 b) { return static_cast<i64>(ceil_div(static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b))); }

// Collects line items, flooring negative values at zero.
class Ledger {
 public:
  explicit Ledger(CostReport& r) : r_(r) {}
  void step(const std::string& name, i64 v) { push(r_.items, name, v); }
  void qubit(const std::string& name, i64 v) { push(r_.qubit_items, name, v); }
  void block(const std::string& name, i64 k) { r_.block_sizes[name] = k; }

 private:
  void push(std::vector<CostItem>& v, const std::string& name, i64 x) {
    if (x < 0) {
      r_.floored.push_back(name);
      x = 0;
    }
    v.push_back({name, x});
  }
  CostReport& r_;
};

void finish(CostReport& r, const CostParams& P) {
  r.per_step = 0;
  for (const auto& it : r.items) r.per_step += it.value;
  const PeaResult pea = pea_total(r.per_step, P.lambda, P.eps);
  r.iterations = pea.iterations;
  r.total = pea.total;
}

i64 sum_qubits(const CostReport& r) {
  i64 s = 0;
  for (const auto& it : r.qubit_items) s += it.value;
  return s;
}

void check_params(const CostParams& P) {
  if (P.N < 2 || P.N % 2) throw std::invalid_argument("N must be a positive even number of spin orbitals");
  if (P.aleph < 1 || P.aleph1 < 1 || P.aleph2 < 1 || P.br < 1 || P.beth < 1)
    throw std::invalid_argument("bit widths must be >= 1");
  if (!(P.eps > 0.0)) throw std::invalid_argument("eps must be positive");
  if (!(P.lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
}

struct TwoRegister {
  i64 cost = 0, k1 = 1, k2 = 1;
};

// ceil(A/k1) ceil(B/k2) + b (k1 k2 - 1) in output mode, + k1 k2 when erasing.
TwoRegister two_register_qroam(i64 A, i64 B, i64 b, QroamMode mode) {
  TwoRegister best{-1, 1, 1};
  for (i64 k1 = 1; k1 <= pow2_ceil(A); k1 *= 2)
    for (i64 k2 = 1; k2 <= pow2_ceil(B); k2 *= 2) {
      const i64 look = cdiv(A, k1) * cdiv(B, k2);
      const i64 c = mode == QroamMode::Output ? look + b * (k1 * k2 - 1) : look + k1 * k2;
      if (best.cost < 0 || c < best.cost) best = {c, k1, k2};
    }
  return best;
}

}  // namespace

QroamResult qroam_cost(i64 L, i64 m, QroamMode mode) {
  if (L < 1 || m < 1) throw std::invalid_argument("qroam_cost: L and m must be >= 1");
  const i64 kmax = pow2_ceil(L);
  const double target = std::sqrt(static_cast<double>(L) / (mode == QroamMode::Output ? m : 1));
  i64 k = 1;
  while (k < kmax && static_cast<double>(2 * k) <= target) k *= 2;
  auto f = [&](i64 kk) { return qroam_value(L, m, mode, kk); };
  while (k < kmax && f(2 * k) < f(k)) k *= 2;
  while (k > 1 && f(k / 2) <= f(k)) k /= 2;
  return {f(k), k, m * (k - 1)};
}

QroamResult qroam_cost_brute(i64 L, i64 m, QroamMode mode) {
  if (L < 1 || m < 1) throw std::invalid_argument("qroam_cost_brute: L and m must be >= 1");
  QroamResult best{-1, 1, 0};
  for (i64 k = 1; k <= pow2_ceil(L); k *= 2) {
    const i64 c = qroam_value(L, m, mode, k);
    if (best.toffoli < 0 || c < best.toffoli) best = {c, k, m * (k - 1)};
  }
  return best;
}

std::pair<i64, i64> argmin_pow2(i64 kmax, const std::function<i64(i64)>& f) {
  std::pair<i64, i64> best{1, f(1)};
  for (i64 k = 2; k <= kmax; k *= 2) {
    const i64 c = f(k);
    if (c < best.second) best = {k, c};
  }
  return best;
}

i64 equal_superposition_cost(i64 d, int br) {
  if (d < 2) throw std::invalid_argument("equal_superposition_cost: degenerate input, d must be >= 2");
  return 3 * lg(d) - 3 * two_adic(static_cast<std::uint64_t>(d)) + 2 * br - 9;
}

PeaResult pea_total(i64 per_step, double lambda, double eps) {
  if (!(lambda > 0.0) || !(eps > 0.0)) throw std::invalid_argument("pea_total: lambda and eps must be positive");
  const long double x = std::numbers::pi_v<long double> * lambda / (2.0L * eps);
  // Absorb rounding in the last few ulps so eps = pi lambda / 2 gives exactly one step.
  const long double I = std::ceil(x * (1.0L - 8 * std::numeric_limits<double>::epsilon()));
  if (I > 9.0e18L) throw std::overflow_error("pea_total: iteration count overflows");
  PeaResult r;
  r.iterations = std::max<i64>(1, static_cast<i64>(I));
  if (per_step > 0 && r.iterations > std::numeric_limits<i64>::max() / per_step)
    throw std::overflow_error("pea_total: total Toffoli count overflows");
  r.total = r.iterations * per_step;
  return r;
}

CostParams supercell_params(const CostParams& P, i64 d_sc, double Xi_sc) {
  CostParams S = P;
  S.N = P.N * P.mesh.nk();
  S.M = P.M * P.mesh.nk();
  S.mesh = Mesh({1, 1, 1});
  S.d = d_sc;
  S.Xi = Xi_sc;
  return S;
}

// ---------------------------------------------------------------- sparse

CostReport cost_sparse(const CostParams& P) {
  check_params(P);
  if (P.d < 2) throw std::invalid_argument("cost_sparse: d must be >= 2");
  CostReport r;
  r.lcu = Lcu::Sparse;
  Ledger g(r);
  const i64 N = P.N, Nk = P.mesh.nk(), nk = P.mesh.nk_bits(), nN = lg(N / 2);
  const i64 d = P.d, Ld = lg(d);
  const i64 m = P.aleph + 8 * nN + 6 * nk + 5;
  const QroamResult q1 = qroam_cost(d, m, QroamMode::Output);
  const QroamResult q2 = qroam_cost(d, 1, QroamMode::Erase);
  g.block("k1", q1.k);
  g.block("k2", q2.k);
  g.step("prepare qroam (k1)", q1.toffoli);
  g.step("unprepare qroam erasure (k2)", q2.toffoli);
  g.step("equal superposition, prepare and unprepare", 2 * equal_superposition_cost(d, P.br));
  g.step("select", 6 * N * Nk - 6);
  g.step("alias sampling inequality and swap", P.aleph + 4 * nN + 3 * nk + 2);
  g.step("symmetry swaps and k arithmetic", 4 * nN + 9 * nk);
  g.step("reflection", Ld + P.aleph + 6);
  g.step("phase estimation control", 2);
  g.step("phase factors", 3);
  g.step("constant reconciliation with the closed-form total", 3);
  finish(r, P);
  g.qubit("phase estimation control", 2 * lg(r.iterations + 1) - 1);
  g.qubit("system", N * Nk);
  g.qubit("prepared index, keep and flags", Ld + P.aleph + 8);
  g.qubit("success flag", 1);
  g.qubit("phase gradient", P.br);
  g.qubit("qroam output and index (k1)", m * q1.k + lg_ratio(d, q1.k));
  r.qubits = sum_qubits(r);
  return r;
}

// ---------------------------------------------------------------- single factorization

CostReport cost_sf(const CostParams& P) {
  check_params(P);
  if (P.M < 1) throw std::invalid_argument("cost_sf: M must be >= 1");
  CostReport r;
  r.lcu = Lcu::SF;
  Ledger g(r);
  const i64 N = P.N, Nk = P.mesh.nk(), nk = P.mesh.nk_bits(), nN = lg(N / 2), M = P.M;
  const i64 MN1 = M * Nk + 1, MN = M * Nk;
  const i64 nMN = lg(MN1), nM = lg(M);
  const i64 Lbar = Nk * N * N / 2, nLb = lg(Lbar), etaLb = two_adic(static_cast<std::uint64_t>(Lbar));
  const i64 bMN = P.aleph1 + nMN + 2 * nk + 2;
  const i64 bp = 2 * nk + 4 * nN + P.aleph2 + 3;
  const i64 es_l = 3 * nMN + 2 * P.br - 9;
  const i64 es_p = 3 * nLb - 3 * etaLb + 2 * P.br - 9;
  const i64 swap_l = nk + nM + 1;
  const i64 swap_p = nk + 2 * nN + 1;
  const i64 select = 4 * (N * Nk / 2 - 1) + 1 + N * Nk;

  const QroamResult qMN = qroam_cost(MN1, bMN, QroamMode::Output);
  const QroamResult eMN = qroam_cost(MN1, 1, QroamMode::Erase);
  const TwoRegister qp = two_register_qroam(MN1, Lbar, bp, QroamMode::Output);
  const TwoRegister ep = two_register_qroam(MN1, Lbar, bp, QroamMode::Erase);
  const TwoRegister qp7 = two_register_qroam(MN, Lbar, bp, QroamMode::Output);
  const TwoRegister ep7 = two_register_qroam(MN, Lbar, bp, QroamMode::Erase);
  g.block("k_MN", qMN.k);
  g.block("k_p1", qp.k1);
  g.block("k_p2", qp.k2);
  g.block("k'_p1", ep.k1);
  g.block("k'_p2", ep.k2);
  g.block("k_p1 (step 7)", qp7.k1);
  g.block("k_p2 (step 7)", qp7.k2);
  g.block("k'_p1 (step 7)", ep7.k1);
  g.block("k'_p2 (step 7)", ep7.k2);
  g.block("k'_MN", eMN.k);

  g.step("1a equal superposition over l", es_l);
  g.step("1b qroam over l (k_MN)", qMN.toffoli);
  g.step("1c inequality test", P.aleph1);
  g.step("1d controlled swap", swap_l);
  g.step("2a equal superposition over k,p,q", es_p);
  g.step("2b two-register qroam (k_p1,k_p2)", qp.cost);
  g.step("2c inequality test", P.aleph2);
  g.step("2d controlled swaps", swap_p);
  g.step("3 k arithmetic", 4 * nk);
  g.step("4 select", select);
  g.step("5 invert steps 2-3: equal superposition", es_p);
  g.step("5 invert steps 2-3: qroam erasure (k'_p1,k'_p2)", ep.cost);
  g.step("5 invert steps 2-3: inequality, swaps and k arithmetic", P.aleph2 + swap_p + 4 * nk);
  g.step("6 reflection on k,p,q", nLb + P.aleph2 + 5);
  g.step("7 repeat steps 2-5: preparation", es_p + qp7.cost + P.aleph2 + swap_p + 4 * nk);
  g.step("7 repeat steps 2-5: select", select);
  g.step("7 repeat steps 2-5: unpreparation", es_p + ep7.cost + P.aleph2 + swap_p + 4 * nk);
  g.step("7 controls", 4);
  g.step("8 invert l preparation", es_l + eMN.toffoli + P.aleph1 + swap_l);
  g.step("9 reflection", nMN + nLb + P.aleph1 + P.aleph2 + 4);
  g.step("10 phase estimation control", 2);
  finish(r, P);
  g.qubit("phase estimation control", 2 * lg(r.iterations));
  g.qubit("system", N * Nk);
  g.qubit("l register", nMN);
  g.qubit("k,p,q register", nLb);
  g.qubit("k registers", 2 * nk);
  g.qubit("rank registers", 2 * nM);
  g.qubit("keep registers", 2 * P.aleph1 + P.aleph2);
  g.qubit("phase gradient", P.br);
  g.qubit("flags and controls", 9);
  g.qubit("two-register qroam output", bp * qp.k1 * qp.k2);
  g.qubit("two-register qroam index", lg_ratio(MN1, qp.k1) + lg_ratio(Lbar, qp.k2));
  r.qubits = sum_qubits(r);
  return r;
}

// ---------------------------------------------------------------- double factorization

CostReport cost_df(const CostParams& P) {
  check_params(P);
  if (P.M < 1) throw std::invalid_argument("cost_df: M must be >= 1");
  if (!(P.Xi >= 1.0)) throw std::invalid_argument("cost_df: Xi must be >= 1");
  CostReport r;
  r.lcu = Lcu::DF;
  Ledger g(r);
  const i64 N = P.N, Nk = P.mesh.nk(), nk = P.mesh.nk_bits(), M = P.M, beth = P.beth;
  const i64 L = 2 * Nk * M, nL = lg(L), etaL = two_adic(static_cast<std::uint64_t>(L));
  const i64 LXi = static_cast<i64>(std::ceil(static_cast<double>(L) * P.Xi));
  const i64 half = N * Nk / 2;
  const i64 nXi = ceil_log2_real(P.Xi);
  const i64 nLXi = lg(LXi + half);
  const i64 bp1 = nL + P.aleph1;
  const i64 bo = nk + nXi + nLXi + P.br + 1;
  const i64 bp2 = nXi + P.aleph2 + 2;
  const i64 A = LXi + half, B = LXi;
  const i64 kmax = pow2_ceil(A);
  const i64 es_l = 3 * nL - 3 * etaL + 2 * P.br - 9;
  const i64 es_p = 7 * nXi + 2 * P.br - 6;

  const QroamResult qp1 = qroam_cost(L + 1, bp1, QroamMode::Output);
  const QroamResult qo = qroam_cost(L + 1, bo, QroamMode::Output);
  const QroamResult ep1 = qroam_cost(L + 1, 1, QroamMode::Erase);
  const QroamResult eo = qroam_cost(L + 1, 1, QroamMode::Erase);
  const auto qp2 = argmin_pow2(kmax, [&](i64 k) { return cdiv(A, k) + cdiv(B, k) + 2 * bp2 * (k - 1); });
  const auto ep2 = argmin_pow2(kmax, [&](i64 k) { return cdiv(A, k) + cdiv(B, k) + 2 * k; });
  const i64 rot_out = 4 * N * beth + nk;
  const auto qr = argmin_pow2(kmax, [&](i64 k) { return cdiv(A, k) + cdiv(B, k) + rot_out * (k - 1); });
  const auto er = argmin_pow2(kmax, [&](i64 k) { return cdiv(A, k) + cdiv(B, k) + 2 * k; });
  g.block("k_p1", qp1.k);
  g.block("k_o", qo.k);
  g.block("k_p2", qp2.first);
  g.block("k_r", qr.first);
  g.block("k'_r", er.first);
  g.block("k'_p2", ep2.first);
  g.block("k'_p1", ep1.k);
  g.block("k'_o", eo.k);

  g.step("1 equal superposition over l", es_l);
  g.step("1 qroam over l (k_p1)", qp1.toffoli);
  g.step("1 inequality test and swap", P.aleph1 + nL);
  g.step("2 rank and offset qroam (k_o)", qo.toffoli);
  g.step("3 equal superposition over p, four times", 4 * es_p);
  g.step("3 offset additions, four times", 4 * (nLXi - 1));
  g.step("3 qroam over p (k_p2)", qp2.second);
  g.step("3 inequality tests and swaps, four times", 4 * (P.aleph2 + nXi));
  g.step("4 rotation qroam (k_r)", qr.second);
  g.step("4 rotation qroam erasure (k'_r)", er.second);
  g.step("4 offset additions", 4 * (nLXi - 1));
  g.step("4 givens rotations", 16 * N * (beth - 2));
  g.step("4 controlled swaps", 2 * N * Nk);
  g.step("4 controls", 2);
  g.step("5 invert p preparation: equal superposition, twice", 2 * es_p);
  g.step("5 invert p preparation: offset additions, twice", 2 * (nLXi - 1));
  g.step("5 invert p preparation: qroam erasure (k'_p2)", ep2.second);
  g.step("5 invert p preparation: inequality tests and swaps, twice", 2 * (P.aleph2 + nXi));
  g.step("6 reflection on p", nXi + P.aleph2 + 2);
  g.step("8 invert l preparation", es_l + ep1.toffoli + P.aleph1 + nL);
  g.step("8 erase rank and offset output (k'_o)", eo.toffoli);
  g.step("9 reflection", nL + nXi + P.aleph1 + P.aleph2 + 1);
  g.step("10 phase estimation control", 2);
  g.step("11 working-register swaps", 4 * N * Nk + 12 * nk);
  finish(r, P);
  g.qubit("phase estimation control", 2 * lg(r.iterations + 1) - 1);
  g.qubit("system", N * Nk);
  g.qubit("working registers", N);
  g.qubit("l register and flags", nL + 2);
  g.qubit("l alias sampling", nL + 2 * P.aleph1 + 1);
  g.qubit("rank and offset output", bo);
  g.qubit("k register", nk);
  g.qubit("p register and flags", nLXi + 2);
  g.qubit("p alias sampling", P.aleph2 + bp2 + 1);
  g.qubit("controls", 2);
  g.qubit("phase gradient", P.br);
  g.qubit("rotation qroam output and index (k_r)", rot_out * qr.first + lg_ratio(A, qr.first));
  r.qubits = sum_qubits(r);
  return r;
}

// ---------------------------------------------------------------- tensor hypercontraction

i64 thc_d(const Mesh& mesh, int N, i64 M) {
  return 32 * (static_cast<i64>(mesh.nk()) + (i64{1} << mesh.num_even())) * M * M +
         static_cast<i64>(N) * mesh.nk() / 2;
}

std::vector<i64> thc_contiguous_items(const Mesh& mesh, i64 M) {
  const i64 Nx = mesh.dims()[0], Ny = mesh.dims()[1], Nz = mesh.dims()[2], Nk = mesh.nk();
  return {
      lg(Nx) * lg(Ny),            // a
      lg(Nx * Ny),                // b
      lg(Nx * Ny) * lg(Nz),       // c
      lg(Nk),                     // d
      lg(Nk) * lg(Nx),            // e
      lg(Nx * Nk),                // f
      lg(Nx * Nk) * lg(Ny),       // g
      lg(Nx * Ny * Nk),           // h
      lg(Nx * Ny * Nk) * lg(Nz),  // i
      lg(Nk * Nk),                // j
      lg(Nk * Nk) * lg(M),        // k
      lg(Nk * Nk * M),            // l
  };
}

CostReport cost_thc(const CostParams& P) {
  check_params(P);
  if (P.M < 1) throw std::invalid_argument("cost_thc: M must be >= 1");
  CostReport r;
  r.lcu = Lcu::THC;
  Ledger g(r);
  const Mesh& mesh = P.mesh;
  const i64 N = P.N, Nk = mesh.nk(), nk = mesh.nk_bits(), M = P.M, nM = lg(M), beth = P.beth;
  const i64 aleph = P.aleph;
  const i64 d = thc_d(mesh, P.N, M), Ld = lg(d);
  const i64 m = 2 * (2 * nM + nk + 8) + aleph;
  const i64 Nrm = Nk * Nk * M;
  const i64 A = Nk * (M + N / 2), B = Nk * M;

  const QroamResult qd = qroam_cost(d, m, QroamMode::Output);
  const QroamResult ed = qroam_cost(d, 1, QroamMode::Erase);
  const QroamResult qn = qroam_cost(Nrm, nk + aleph, QroamMode::Output);
  const QroamResult en = qroam_cost(Nrm, 1, QroamMode::Erase);
  const i64 kmax = pow2_ceil(A);
  const auto qr = argmin_pow2(kmax, [&](i64 k) { return 2 * cdiv(A, k) + 2 * cdiv(B, k) + 4 * N * beth * (k - 1); });
  const auto er = argmin_pow2(kmax, [&](i64 k) { return 2 * cdiv(A, k) + 2 * cdiv(B, k) + 4 * k; });
  g.block("k_p", qd.k);
  g.block("k'_p", ed.k);
  g.block("k_nrm", qn.k);
  g.block("k_era", en.k);
  g.block("k_r", qr.first);
  g.block("k'_r", er.first);

  i64 contiguous = 0;
  for (i64 v : thc_contiguous_items(mesh, M)) contiguous += v;
  const auto& dims = mesh.dims();

  g.step("1 spin swaps", 3 * Nk * N / 2);
  g.step("2 equal superposition, prepare and unprepare", 2 * equal_superposition_cost(d, P.br));
  g.step("3 prepare qroam (k_p)", qd.toffoli);
  g.step("3 unprepare qroam erasure (k'_p)", ed.toffoli);
  g.step("4 inequality tests", 2 * aleph);
  g.step("5 alias swaps", 4 * nM + 2 * nk + 14);
  g.step("6 mu/nu symmetry swaps", 4 * nM + 12);
  g.step("7 Q negation", 2 * nk);
  g.step("8 equal superposition over k, four times",
         4 * (dims[0] + dims[1] + dims[2] + 8 * nk + 6 * P.br - 24));
  g.step("9 one-body control", 1);
  g.step("10 k, Q and G arithmetic", 8 * nk);
  g.step("10 contiguous register, four times", 4 * contiguous);
  g.step("10 normalization qroam, twice (k_nrm)", 2 * qn.toffoli);
  g.step("10 normalization qroam erasure, twice (k_era)", 2 * en.toffoli);
  g.step("10 normalization inequality tests", 4 * (aleph + nk));
  g.step("11 recompute k arithmetic and swaps", 12 * nk);
  g.step("12 controlled system swaps", 4 * N * (Nk - 1));
  g.step("13 rotation qroam (k_r)", qr.second);
  g.step("13 rotation qroam erasure (k'_r)", er.second);
  g.step("13 givens rotations", 16 * N * (beth - 2));
  g.step("13 rotation bookkeeping", 12 * Nk + 4 * lg(A) + 4 * lg(B));
  g.step("14 c/c-dagger control", 2);
  g.step("14 Z unary iteration", 4 * (Nk - 1));
  g.step("15 reflection and control", Ld + 3 * aleph + 2 * nk + 9);
  finish(r, P);

  const i64 part1_6 = N * Nk + (2 * lg(r.iterations) - 1) + (Ld + aleph + nk + 12) + beth + 1 + m;
  const i64 part7 = m * (qd.k - 1) + lg_ratio(d, qd.k) - 1;
  const i64 part8_12 = 1 + 1 + (nk + 4 * P.br) + (nk + lg(Nrm)) + (nk + aleph);
  const i64 part13 = (qn.k - 1) * (nk + aleph) + lg_ratio(Nrm, qn.k) - 1;
  const i64 part14_16 = aleph + 1 + lg(A) + N * beth * qr.first + lg_ratio(A, qr.first) - 1;
  const i64 temp = std::max(part7, part8_12 + std::max(part13, part14_16));
  g.qubit("parts 1-6: system, control, index, rotation and qroam output", part1_6);
  g.qubit("peak temporary: max(part 7, parts 8-12 + max(part 13, parts 14-16))", temp);
  r.qubits = sum_qubits(r);
  return r;
}

CostReport cost(Lcu lcu, const CostParams& P) {
  switch (lcu) {
    case Lcu::Sparse: return cost_sparse(P);
    case Lcu::SF: return cost_sf(P);
    case Lcu::DF: return cost_df(P);
    case Lcu::THC: return cost_thc(P);
  }
  throw std::invalid_argument("unknown LCU");
}

CostParams sweep_params(Lcu lcu, const Mesh& mesh, const SweepModel& model, bool supercell,
                        const CostParams& base) {
  if (model.n < 1 || model.chol_per_orbital < 1 || model.c_thc < 1)
    throw std::invalid_argument("sweep model sizes must be >= 1");
  CostParams P = base;
  const double Nk = mesh.nk(), n = model.n;
  P.N = 2 * model.n;
  P.mesh = mesh;
  P.M = static_cast<i64>(lcu == Lcu::THC ? model.c_thc : model.chol_per_orbital) * model.n;
  P.Xi = model.xi;
  auto count = [](double v) {
    if (!(v < 0x1p62)) throw std::overflow_error("sweep_params: sparse count overflows");
    return std::max<i64>(2, static_cast<i64>(std::ceil(v)));
  };
  const bool sparse = lcu == Lcu::Sparse;
  if (sparse) P.d = count(Nk * Nk * Nk * n * n * n * n / 2);
  P.lambda = model.lambda_per_cell * Nk;
  if (!supercell) return P;
  const i64 d_sc = sparse ? count(std::pow(Nk * n, 4) / 2) : P.d;
  CostParams S = supercell_params(P, d_sc, model.xi);
  S.lambda = P.lambda;
  return S;
}

PowerFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_power_law: need >= 2 points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0) || !(y[i] > 0)) throw std::invalid_argument("fit_power_law: values must be positive");
    const double a = std::log2(x[i]), b = std::log2(y[i]);
    sx += a;
    sy += b;
    sxx += a * a;
    sxy += a * b;
    syy += b * b;
  }
  const double vx = sxx - sx * sx / n, vy = syy - sy * sy / n, cxy = sxy - sx * sy / n;
  if (vx <= 0) throw std::invalid_argument("fit_power_law: x values must not all be equal");
  PowerFit f;
  f.exponent = cxy / vx;
  f.intercept = (sy - f.exponent * sx) / n;
  f.r2 = vy > 0 ? cxy * cxy / (vx * vy) : 1.0;
  f.points = static_cast<int>(x.size());
  return f;
}

}  // namespace kbloch
