// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"
#include "kbloch/kmesh.hpp"
#include "momentum_table.hpp"

using namespace kbloch;

TEST_CASE("modular subtraction examples") {
  Mesh m114({1, 1, 4});
  CHECK(modsub(m114, {0, 0, 3}, {0, 0, 1}) == KVector{0, 0, 2});
  Mesh m444({4, 4, 4});
  CHECK(modsub(m444, {2, 1, 2}, {3, 3, 3}) == KVector{3, 2, 3});
  CHECK(modneg(m444, {0, 0, 0}) == KVector{0, 0, 0});
  CHECK(modadd(m444, {3, 3, 3}, {1, 2, 3}) == KVector{0, 1, 2});
}

TEST_CASE("flat index order has x slowest") {
  Mesh m({2, 3, 4});
  CHECK(m.index({0, 0, 1}) == 1);
  CHECK(m.index({0, 1, 0}) == 4);
  CHECK(m.index({1, 0, 0}) == 12);
  for (int i = 0; i < m.nk(); ++i) CHECK(m.index(m.kvec(i)) == i);
}

TEST_CASE("out of range k vectors are rejected") {
  Mesh m({1, 4, 4});
  CHECK_THROWS_AS(m.check({0, 4, 0}), InvalidKVector);
  CHECK_THROWS_AS(m.check({-1, 0, 0}), InvalidKVector);
  CHECK_THROWS_AS(Mesh({0, 1, 1}), std::invalid_argument);
}

TEST_CASE("gvector examples") {
  Mesh m144({1, 4, 4});
  QG a = gvector(m144, {0, 2, 1}, {0, 3, 1});
  CHECK(a.Q == KVector{0, 3, 0});
  CHECK(a.G == GVector{0, -4, 0});
  Mesh m114({1, 1, 4});
  QG b = gvector(m114, {0, 0, 3}, {0, 0, 1});
  CHECK(b.Q == KVector{0, 0, 2});
  CHECK(b.G == GVector{0, 0, 0});
}

TEST_CASE("complement examples") {
  Complement c = complement_g(Mesh({1, 1, 4}), {0, 0, 2}, {0, 0, 0});
  CHECK(c.negQ == KVector{0, 0, 2});
  CHECK(c.notG == GVector{0, 0, -4});
  Complement d = complement_g(Mesh({1, 4, 4}), {0, 1, 0}, {0, 0, 0});
  CHECK(d.negQ == KVector{0, 3, 0});
  CHECK(d.notG == GVector{0, -4, 0});
}

TEST_CASE("momentum table rows") {
  for (const auto& row : testing::momentum_rows()) {
    CAPTURE(row.kp[0]);
    CAPTURE(row.kp[1]);
    CAPTURE(row.kp[2]);
    Mesh m(row.dims);
    QG qg = gvector(m, row.kp, row.kq);
    CHECK(qg.Q == row.Q);
    CHECK(qg.G == row.G);
    Complement c = complement_g(m, qg.Q, qg.G);
    CHECK(c.negQ == row.negq);
    CHECK(c.notG == row.notg);
    CHECK((c.negQ == row.printed_negq) == row.consistent);
  }
}

TEST_CASE("complement identity holds exhaustively") {
  for (auto dims : {std::array{1, 1, 4}, std::array{1, 4, 4}, std::array{4, 4, 4}, std::array{3, 2, 5}})
    CHECK(testing::complement_identity_failures(Mesh(dims)) == 0);
}

TEST_CASE("self-inverse momentum counts") {
  CHECK(count_self_inverse_q(Mesh({3, 3, 3})) == 1);
  CHECK(count_self_inverse_q(Mesh({2, 3, 3})) == 2);
  CHECK(count_self_inverse_q(Mesh({2, 2, 2})) == 8);
  CHECK(count_self_inverse_q(Mesh({4, 4, 4})) == 8);
  CHECK(count_self_inverse_q(Mesh({1, 1, 1})) == 1);
}

TEST_CASE("g flags") {
  CHECK(g_flag({0, 0, 0}) == 0);
  CHECK(g_flag({-4, 0, 0}) == 4);
  CHECK(g_flag({0, 0, -4}) == 1);
  Mesh m({4, 4, 4});
  for (int k = 0; k < m.nk(); ++k)
    for (int Q = 0; Q < m.nk(); ++Q) {
      const QG qg = gvector(m, m.kvec(k), m.kvec(m.sub(k, Q)));
      REQUIRE(qg.Q == m.kvec(Q));
      CHECK(g_flag_of(m, k, Q) == g_flag(qg.G));
      CHECK((g_flag(qg.G) & ~reachable_g_mask(m, Q)) == 0);
      const Complement c = complement_g(m, qg.Q, qg.G);
      CHECK(not_g_flag(m, Q, g_flag(qg.G)) == g_flag(c.notG));
    }
}

TEST_CASE("register widths") {
  CHECK(Mesh({1, 1, 1}).nk_bits() == 0);
  CHECK(Mesh({2, 2, 2}).nk_bits() == 3);
  CHECK(Mesh({3, 3, 3}).nk_bits() == 6);
  CHECK(Mesh({2, 3, 3}).num_even() == 1);
}

TEST_CASE("large meshes skip the subtraction table") {
  Mesh big({40, 40, 40});
  const int a = big.index({39, 0, 7}), b = big.index({1, 5, 9});
  CHECK(big.kvec(big.sub(a, b)) == KVector{38, 35, 38});
  CHECK(big.add(big.sub(a, b), b) == a);
}
