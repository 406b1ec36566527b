// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "kbloch/lambda.hpp"
#include "kbloch/oracle.hpp"

using namespace kbloch;

namespace {

SpMat pauli_x() {
  SpMat m(2, 2);
  m.insert(0, 1) = 1.0;
  m.insert(1, 0) = 1.0;
  return m;
}

SpMat pauli_z() {
  SpMat m(2, 2);
  m.insert(0, 0) = 1.0;
  m.insert(1, 1) = -1.0;
  return m;
}

bool has_phase(const std::vector<double>& phases, double target) {
  return std::any_of(phases.begin(), phases.end(), [&](double p) {
    const double d = std::remainder(p - target, 2 * std::numbers::pi);
    return std::abs(d) < 1e-9;
  });
}

}  // namespace

TEST_CASE("majorana algebra") {
  const Pauli a = majorana(0, 0), b = majorana(0, 1), c = majorana(2, 0);
  const Pauli aa = a * a;
  CHECK(aa.x == 0);
  CHECK(aa.z == 0);
  CHECK(aa.phase % 4 == 0);
  // gamma_0 gamma_1 = i Z_0
  const Pauli ab = a * b;
  CHECK(ab.x == 0);
  CHECK(ab.z == 1);
  const Pauli ac = a * c, ca = c * a;
  CHECK((ac.phase - ca.phase + 4) % 4 == 2);
  CHECK(hermitian_phase(1, 1) == 1);
}

TEST_CASE("lambda bound detects an undersized lambda") {
  KHamiltonian H(Mesh({1, 1, 1}), 1);
  H.h_at(0, 0, 0) = 0.5;
  SparseEntries S = sparsify(H, 0.0);
  DenseOperator op = assemble_sparse(S);
  const double lam = lambda_sparse(S).total;
  CHECK(check_lambda_bound(op, lam).pass);
  CHECK_FALSE(check_lambda_bound(op, lam / 2).pass);
}

TEST_CASE("zero hamiltonian with zero lambda passes the bound") {
  KHamiltonian H(Mesh({1, 1, 2}), 1);
  DenseOperator op = assemble_sparse(sparsify(H, 0.0));
  BoundReport b = check_lambda_bound(op, 0.0);
  CHECK(b.norm == 0.0);
  CHECK(b.pass);
}

TEST_CASE("without interactions the spectrum is a sum of orbital energies") {
  KHamiltonian H(Mesh({1, 1, 2}), 1);
  H.h_at(0, 0, 0) = -0.7;
  H.h_at(1, 0, 0) = 0.4;
  const double e[4] = {-0.7, -0.7, 0.4, 0.4};
  std::vector<double> sums;
  for (int mask = 0; mask < 16; ++mask) {
    double s = 0.0;
    for (int j = 0; j < 4; ++j)
      if (mask >> j & 1) s += e[j];
    sums.push_back(s);
  }
  std::sort(sums.begin(), sums.end());
  const Eigen::VectorXd E = spectrum(assemble_direct(H));
  REQUIRE(E.size() == 16);
  for (int i = 0; i < 16; ++i) CHECK(E[i] == doctest::Approx(sums[i]));
}

TEST_CASE("walk phases of a single Pauli") {
  const double w = 0.8;
  WalkReport r = walk_spectrum({{w, pauli_z()}}, w);
  CHECK(r.pass);
  CHECK(has_phase(r.phases, 0.0));
  CHECK(has_phase(r.phases, std::numbers::pi));
}

TEST_CASE("walk phases of two anticommuting Paulis") {
  const double w1 = 0.3, w2 = 0.5, lam = w1 + w2;
  WalkReport r = walk_spectrum({{w1, pauli_x()}, {w2, pauli_z()}}, lam);
  CHECK(r.pass);
  CHECK(r.max_error <= 1e-8);
  const double E = std::sqrt(w1 * w1 + w2 * w2);
  for (double s : {1.0, -1.0}) {
    const double th = std::acos(s * E / lam);
    CHECK(has_phase(r.phases, th));
    CHECK(has_phase(r.phases, -th));
  }
}

TEST_CASE("spectrum comparison removes the identity shift") {
  Eigen::VectorXd a(3), b(3);
  a << -1.0, 0.5, 2.0;
  b = a.array() + 7.25;
  SpectrumComparison c = compare_spectra(a, b, 1e-12);
  CHECK(c.pass);
  CHECK(c.shift == doctest::Approx(-7.25));
  b[1] += 1e-6;
  CHECK_FALSE(compare_spectra(a, b, 1e-9).pass);
}

TEST_CASE("representations agree on a small instance") {
  SyntheticTHC syn = generate_synthetic_thc(Mesh({1, 1, 2}), 1, 3, 2);
  VerifyReport r = verify_instance(syn.H, &syn.thc);
  for (const auto& c : r.checks) {
    CAPTURE(c.name);
    CAPTURE(c.value);
    CHECK(c.pass);
  }
  CHECK(r.pass());
  CHECK(r.checks.size() >= 14);
}

TEST_CASE("verification refuses instances beyond the dense limit") {
  KHamiltonian H(Mesh({1, 1, 7}), 1);
  CHECK_THROWS_AS(verify_instance(H, nullptr), std::invalid_argument);
}

TEST_CASE("THC assembly weights equal lambda") {
  SyntheticTHC syn = generate_synthetic_thc(Mesh({1, 2, 1}), 1, 12, 2);
  THCAssembly a = assemble_thc(syn.H, syn.thc);
  CHECK(a.weight_sum == doctest::Approx(lambda_thc(syn.H, syn.thc).total).epsilon(1e-12));
  CHECK(a.majorana_defect <= 1e-10);
  CHECK(a.terms > 0);
}
