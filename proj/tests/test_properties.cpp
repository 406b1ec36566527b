// SPDX-License-Identifier: Apache-2.0
// Randomized invariants. Every case derives from a fixed seed so failures replay.
#include <atomic>
#include <stdexcept>

#include "doctest.h"
#include "generators.hpp"
#include "kbloch/costmodel.hpp"
#include "kbloch/lambda.hpp"
#include "kbloch/parallel.hpp"
#include "kbloch/physical.hpp"

using namespace kbloch;
using testing::Gen;

TEST_CASE("property: modular arithmetic is a group on every mesh") {
  Gen g(1001);
  for (int trial = 0; trial < 300; ++trial) {
    const Mesh m = g.mesh(7);
    const KVector a = g.kvec(m), b = g.kvec(m);
    CHECK(modadd(m, modsub(m, a, b), b) == a);
    CHECK(modsub(m, a, a) == KVector{0, 0, 0});
    CHECK(modneg(m, modneg(m, a)) == a);
    CHECK(m.sub(m.index(a), m.index(b)) == m.index(modsub(m, a, b)));
    const QG qg = gvector(m, a, b);
    const Complement c = complement_g(m, qg.Q, qg.G);
    for (int d = 0; d < 3; ++d) {
      CHECK(a[d] - b[d] == qg.Q[d] + qg.G[d]);
      CHECK(b[d] - a[d] == c.negQ[d] + c.notG[d]);
      CHECK((qg.G[d] == 0 || qg.G[d] == -m.dims()[d]));
      CHECK((c.notG[d] == 0 || c.notG[d] == -m.dims()[d]));
    }
  }
}

TEST_CASE("property: self-inverse count is two to the number of even extents") {
  Gen g(1002);
  for (int trial = 0; trial < 40; ++trial) {
    const Mesh m = g.mesh(6);
    int brute = 0;
    for (int q = 0; q < m.nk(); ++q) brute += m.neg(q) == q;
    CHECK(count_self_inverse_q(m) == brute);
    CHECK(brute == 1 << m.num_even());
  }
}

TEST_CASE("property: qroam optimizer equals exhaustive search") {
  Gen g(1003);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::int64_t L = g.log_int(std::int64_t{1} << 30), m = g.between(1, 256);
    const QroamMode mode = g.coin() ? QroamMode::Output : QroamMode::Erase;
    const QroamResult a = qroam_cost(L, m, mode), b = qroam_cost_brute(L, m, mode);
    CAPTURE(L);
    CAPTURE(m);
    CHECK(a.toffoli == b.toffoli);
    CHECK(a.k == b.k);
  }
}

TEST_CASE("property: per-step costs are sums of non-negative items and grow with the system") {
  Gen g(1004);
  for (int trial = 0; trial < 300; ++trial) {
    CostParams P;
    P.N = 2 * static_cast<int>(g.between(1, 40));
    P.mesh = g.mesh(5);
    P.M = g.between(1, 400);
    P.Xi = g.real(1.0, 40.0);
    P.d = g.log_int(std::int64_t{1} << 40) + 1;
    P.lambda = g.real(1.0, 1e4);
    for (Lcu lcu : {Lcu::Sparse, Lcu::SF, Lcu::DF, Lcu::THC}) {
      CAPTURE(lcu_name(lcu));
      const CostReport c = cost(lcu, P);
      std::int64_t sum = 0;
      for (const auto& item : c.items) {
        CHECK(item.value >= 0);
        sum += item.value;
      }
      CHECK(sum == c.per_step);
      CHECK(c.qubits > 0);
      CostParams bigger = P;
      bigger.N *= 2;
      CHECK(cost(lcu, bigger).per_step >= c.per_step);
      bigger = P;
      const auto d = P.mesh.dims();
      bigger.mesh = Mesh({2 * d[0], d[1], d[2]});
      CHECK(cost(lcu, bigger).per_step >= c.per_step);
    }
  }
}

TEST_CASE("property: synthetic instances keep every representation exact") {
  Gen g(1005);
  const std::array<std::array<int, 3>, 6> meshes{{{1, 1, 1}, {1, 1, 2}, {1, 2, 1}, {1, 1, 3}, {1, 2, 2}, {2, 1, 2}}};
  for (int trial = 0; trial < 12; ++trial) {
    const Mesh m(meshes[static_cast<std::size_t>(g.between(0, 5))]);
    const int n = static_cast<int>(g.between(1, 3));
    const KHamiltonian H = generate_synthetic(m, n, g.seed(), g.real(0.1, 1.5), static_cast<int>(g.between(0, 4)));
    CAPTURE(m.str());
    CAPTURE(n);
    CHECK(validate(H, 1e-12).pass);
    const SparseEntries S = sparsify(H, 0.0);
    CHECK(max_abs_diff(reconstruct(S), H.V) <= 1e-15);
    const double lam = lambda_sparse(H).total;
    CHECK(lambda_sparse(S).total == doctest::Approx(lam).epsilon(1e-13));
    CHECK(lambda_sparse(fold_to_supercell(H)).total == doctest::Approx(lam).epsilon(1e-12));
    const CholeskyFactors C = cholesky_sf(H, 0.0);
    CHECK(max_abs_diff(reconstruct(C), H.V) <= 1e-11);
    const DFFactors D = double_factorize(C, 0.0);
    CHECK(max_abs_diff(reconstruct(D), H.V) <= 1e-11);
    // Trace norms never exceed entrywise L1 norms, so the DF sum stays below SF.
    CHECK(lambda_df(H, D).two_body <= lambda_sf(H, C).two_body * (1 + 1e-12));
  }
}

TEST_CASE("property: THC symmetrization is an idempotent projection") {
  Gen g(1006);
  for (int trial = 0; trial < 20; ++trial) {
    const Mesh m = g.mesh(3);
    const int M = static_cast<int>(g.between(1, 3));
    std::vector<cplx> zeta(thc_zeta_size(m, M));
    for (auto& z : zeta) z = {g.real(-1, 1), g.real(-1, 1)};
    const std::vector<cplx> s = thc_symmetrize(m, M, zeta);
    CHECK(thc_symmetry_violation(m, M, s) <= 1e-15);
    CHECK(max_abs_diff(thc_symmetrize(m, M, s), s) <= 1e-15);
  }
}

TEST_CASE("property: givens decomposition inverts") {
  Gen g(1007);
  for (int trial = 0; trial < 30; ++trial) {
    const int dim = static_cast<int>(g.between(1, 8));
    Eigen::MatrixXcd A(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) A(i, j) = {g.real(-1, 1), g.real(-1, 1)};
    const Eigen::MatrixXcd U = Eigen::HouseholderQR<Eigen::MatrixXcd>(A).householderQ();
    Eigen::VectorXcd ph;
    const auto rots = givens_decompose(U, &ph);
    CHECK(static_cast<int>(rots.size()) == dim * (dim - 1) / 2);
    CHECK((givens_reconstruct(rots, ph) - U).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("property: code distance is monotone in problem size") {
  Gen g(1008);
  const PhysicalParams P;
  for (int trial = 0; trial < 200; ++trial) {
    const std::int64_t T = g.log_int(std::int64_t{1} << 50), Q = g.log_int(1 << 20);
    const PhysicalReport a = estimate_physical(T, Q, P);
    CHECK(estimate_physical(2 * T, Q, P).distance >= a.distance);
    CHECK(estimate_physical(T, 2 * Q, P).distance >= a.distance);
    CHECK(estimate_physical(T, 2 * Q, P).physical_qubits > a.physical_qubits);
  }
}

TEST_CASE("property: parallel_for results do not depend on the worker count") {
  Gen g(1009);
  for (int trial = 0; trial < 20; ++trial) {
    const int count = static_cast<int>(g.between(0, 200));
    std::vector<std::int64_t> a(static_cast<std::size_t>(count)), b(a.size());
    parallel_for(count, 1, [&](int i) { a[static_cast<std::size_t>(i)] = std::int64_t{i} * i + 7; });
    parallel_for(count, static_cast<int>(g.between(2, 8)),
                 [&](int i) { b[static_cast<std::size_t>(i)] = std::int64_t{i} * i + 7; });
    CHECK(a == b);
  }
  try {
    parallel_for(50, 4, [](int i) {
      if (i == 13 || i == 40) throw std::runtime_error(std::to_string(i));
    });
    FAIL("expected an exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "13");
  }
}
