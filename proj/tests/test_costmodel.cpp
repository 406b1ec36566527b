// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "kbloch/costmodel.hpp"

using namespace kbloch;

namespace {

CostParams params(int N, std::array<int, 3> dims) {
  CostParams P;
  P.N = N;
  P.mesh = Mesh(dims);
  return P;
}

}  // namespace

TEST_CASE("qroam examples") {
  QroamResult a = qroam_cost(1024, 16, QroamMode::Output);
  CHECK(a.k == 8);
  CHECK(a.toffoli == 240);
  QroamResult b = qroam_cost(1024, 16, QroamMode::Erase);
  CHECK(b.k == 32);
  CHECK(b.toffoli == 64);
  // A single item never benefits from swapping.
  CHECK(qroam_cost(1, 40, QroamMode::Output).k == 1);
  CHECK(qroam_cost(1, 40, QroamMode::Output).toffoli == 1);
  CHECK(qroam_cost(3, 1000, QroamMode::Output).toffoli == 3);
  CHECK_THROWS_AS(qroam_cost(0, 4, QroamMode::Output), std::invalid_argument);
}

TEST_CASE("qroam matches exhaustive search on a grid") {
  for (std::int64_t L : {1, 2, 3, 7, 100, 1000, 4097, 65535, 1000000})
    for (std::int64_t m : {1, 2, 5, 16, 64, 200})
      for (QroamMode mode : {QroamMode::Output, QroamMode::Erase}) {
        const QroamResult a = qroam_cost(L, m, mode), b = qroam_cost_brute(L, m, mode);
        CHECK(a.toffoli == b.toffoli);
        CHECK(a.k == b.k);
      }
}

TEST_CASE("argmin over powers of two prefers the smaller k") {
  auto [k, v] = argmin_pow2(16, [](std::int64_t x) { return x == 2 || x == 4 ? 3 : 10; });
  CHECK(k == 2);
  CHECK(v == 3);
}

TEST_CASE("equal superposition examples") {
  CHECK(equal_superposition_cost(2000, 7) == 26);
  CHECK(equal_superposition_cost(2048, 7) == 5);
  CHECK(equal_superposition_cost(2049, 7) == 41);
  CHECK_THROWS_AS(equal_superposition_cost(1, 7), std::invalid_argument);
}

TEST_CASE("phase estimation iterations") {
  PeaResult r = pea_total(10, 1000.0, 0.0016);
  CHECK(r.iterations == 981748);
  CHECK(r.total == 9817480);
  const std::int64_t twice = pea_total(10, 2000.0, 0.0016).iterations;
  CHECK(twice >= 2 * r.iterations - 1);
  CHECK(twice <= 2 * r.iterations);
  CHECK(pea_total(1, 3.0, std::numbers::pi * 3.0 / 2).iterations == 1);
  CHECK_THROWS_AS(pea_total(1, 0.0, 0.1), std::invalid_argument);
}

// Per-step counts from tests/oracles/cost_transcription.py, an independent
// transcription that searches every QROAM block size exhaustively.
TEST_CASE("per-step counts match the independent transcription") {
  struct Row {
    Lcu lcu;
    int N;
    std::array<int, 3> dims;
    std::int64_t M;
    double Xi;
    std::int64_t d;
    std::int64_t expect;
  };
  const Row rows[] = {
      {Lcu::Sparse, 2, {1, 1, 1}, 1, 1.0, 2, 58},
      {Lcu::Sparse, 8, {1, 1, 2}, 1, 1.0, 1000, 641},
      {Lcu::Sparse, 52, {2, 2, 2}, 1, 1.0, 123457, 9592},
      {Lcu::SF, 2, {1, 1, 1}, 1, 1.0, 2, 174},
      {Lcu::SF, 8, {1, 2, 2}, 12, 1.0, 2, 2361},
      {Lcu::SF, 52, {2, 2, 2}, 104, 1.0, 2, 91144},
      {Lcu::DF, 2, {1, 1, 1}, 1, 1.0, 2, 814},
      {Lcu::DF, 8, {1, 1, 3}, 12, 3.5, 2, 3879},
      {Lcu::DF, 52, {2, 2, 2}, 104, 26.0, 2, 58472},
      {Lcu::THC, 2, {1, 1, 1}, 1, 1.0, 2, 964},
      {Lcu::THC, 8, {2, 3, 3}, 16, 1.0, 2, 14077},
      {Lcu::THC, 52, {2, 2, 2}, 208, 1.0, 2, 113289},
  };
  for (const Row& r : rows) {
    CostParams P = params(r.N, r.dims);
    P.M = r.M;
    P.Xi = r.Xi;
    P.d = r.d;
    const CostReport c = cost(r.lcu, P);
    CAPTURE(lcu_name(r.lcu));
    CAPTURE(r.N);
    CHECK(c.per_step == r.expect);
    CHECK(c.floored.empty());
    std::int64_t sum = 0;
    for (const auto& item : c.items) sum += item.value;
    CHECK(sum == c.per_step);
  }
}

TEST_CASE("totals combine per-step cost with the iteration count") {
  CostParams P = params(52, {2, 2, 2});
  P.M = 104;
  P.lambda = 250.0;
  const CostReport c = cost_sf(P);
  CHECK(c.iterations == pea_total(c.per_step, 250.0, P.eps).iterations);
  CHECK(c.total == c.per_step * c.iterations);
  std::int64_t q = 0;
  for (const auto& item : c.qubit_items) q += item.value;
  CHECK(q == c.qubits);
}

TEST_CASE("sparse cost increases with the number of entries") {
  CostParams P = params(16, {2, 2, 2});
  for (std::int64_t d = 2; d < (std::int64_t{1} << 40); d *= 2) {
    P.d = d;
    const std::int64_t a = cost_sparse(P).per_step;
    P.d = 2 * d;
    CHECK(cost_sparse(P).per_step > a);
  }
}

TEST_CASE("extra rotation bit raises the DF step by at least 16N") {
  for (int N : {4, 16, 52}) {
    CostParams P = params(N, {2, 2, 2});
    P.M = 3 * N;
    P.Xi = 10.0;
    const std::int64_t a = cost_df(P).per_step;
    P.beth += 1;
    CHECK(cost_df(P).per_step - a >= 16 * N);
  }
}

TEST_CASE("THC sizes depend on the mesh only through N_k and even extents") {
  CHECK(thc_d(Mesh({2, 3, 3}), 8, 16) == thc_d(Mesh({3, 3, 2}), 8, 16));
  CHECK(thc_d(Mesh({2, 2, 2}), 52, 208) == 32 * (8 + 8) * 208 * 208 + 52 * 8 / 2);
  CHECK(thc_contiguous_items(Mesh({2, 3, 3}), 16).size() == 12);
}

TEST_CASE("invalid parameters are rejected") {
  CostParams P = params(3, {1, 1, 1});
  CHECK_THROWS_AS(cost_sparse(P), std::invalid_argument);
  P.N = 4;
  P.Xi = 0.5;
  CHECK_THROWS_AS(cost_df(P), std::invalid_argument);
  P.d = 1;
  CHECK_THROWS_AS(cost_sparse(P), std::invalid_argument);
}

TEST_CASE("supercell parameters fold the mesh into the orbitals") {
  CostParams P = params(8, {2, 2, 1});
  P.M = 12;
  CostParams S = supercell_params(P, 999, 7.5);
  CHECK(S.N == 32);
  CHECK(S.mesh.nk() == 1);
  CHECK(S.M == 48);
  CHECK(S.d == 999);
  CHECK(S.Xi == 7.5);
}

TEST_CASE("sweep parameters follow the model") {
  SweepModel m;
  CostParams P = sweep_params(Lcu::Sparse, Mesh({2, 2, 2}), m, false);
  CHECK(P.N == 52);
  CHECK(P.d == 512LL * 26 * 26 * 26 * 26 / 2);
  CHECK(P.lambda == 8.0);
  CHECK(sweep_params(Lcu::THC, Mesh({2, 2, 2}), m, false).M == 208);
  CHECK(sweep_params(Lcu::SF, Mesh({2, 2, 2}), m, false).M == 104);
  CostParams S = sweep_params(Lcu::Sparse, Mesh({2, 2, 2}), m, true);
  CHECK(S.mesh.nk() == 1);
  CHECK(S.d == 208LL * 208 * 208 * 208 / 2);
  CHECK_THROWS_AS(sweep_params(Lcu::Sparse, Mesh({200, 200, 200}), m, false), std::overflow_error);
}

TEST_CASE("power law fit recovers exact exponents") {
  std::vector<double> x, y;
  for (double v : {2.0, 4.0, 8.0, 16.0}) {
    x.push_back(v);
    y.push_back(3.0 * std::pow(v, 1.5));
  }
  PowerFit f = fit_power_law(x, y);
  CHECK(f.exponent == doctest::Approx(1.5));
  CHECK(f.r2 == doctest::Approx(1.0));
  CHECK(f.points == 4);
  CHECK_THROWS_AS(fit_power_law({1.0}, {1.0}), std::invalid_argument);
}
