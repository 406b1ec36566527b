// SPDX-License-Identifier: Apache-2.0
#include <filesystem>

#include "doctest.h"
#include "kbloch/hamiltonian.hpp"
#include "kbloch/io.hpp"
#include "kbloch/oracle.hpp"

using namespace kbloch;

TEST_CASE("synthetic instances satisfy the symmetries") {
  for (auto dims : {std::array{1, 1, 1}, std::array{1, 1, 2}, std::array{2, 2, 1}, std::array{1, 1, 3}}) {
    KHamiltonian H = generate_synthetic(Mesh(dims), 2, 11, 0.5);
    SymmetryReport r = validate(H, 1e-12);
    CHECK(r.pass);
    CHECK(r.max_violation() <= 1e-12);
  }
}

TEST_CASE("a perturbed entry fails validation") {
  KHamiltonian H = generate_synthetic(Mesh({1, 1, 2}), 2, 3, 0.5);
  H.V_at(1, 0, 1, 0, 1, 1, 0) += 1e-3;
  SymmetryReport r = validate(H, 1e-6);
  CHECK_FALSE(r.pass);
  CHECK(r.max_violation() == doctest::Approx(1e-3).epsilon(1e-6));
}

TEST_CASE("zero two-body tensor has no violation") {
  KHamiltonian H(Mesh({2, 1, 1}), 2);
  H.h_at(0, 0, 0) = 1.0;
  CHECK(validate(H, 0.0).max_violation() == 0.0);
  CHECK(validate(H, 0.0).pass);
}

TEST_CASE("non-hermitian one-body block is reported") {
  KHamiltonian H(Mesh({1, 1, 1}), 2);
  H.h_at(0, 0, 1) = cplx(0.1, 0.2);
  CHECK(validate(H, 1e-6).h_hermiticity == doctest::Approx(std::abs(cplx(0.1, 0.2))));
}

TEST_CASE("same seed gives bit-identical instances") {
  KHamiltonian a = generate_synthetic(Mesh({1, 2, 2}), 1, 42, 0.5);
  KHamiltonian b = generate_synthetic(Mesh({1, 2, 2}), 1, 42, 0.5);
  KHamiltonian c = generate_synthetic(Mesh({1, 2, 2}), 1, 43, 0.5);
  CHECK(a.h == b.h);
  CHECK(a.V == b.V);
  CHECK(a.V != c.V);
}

TEST_CASE("shape mismatch is a data error") {
  KHamiltonian H(Mesh({1, 1, 2}), 1);
  H.V.pop_back();
  CHECK_THROWS_AS(check_shape(H), DataError);
  CHECK_THROWS_AS(validate(H, 1e-9), DataError);
}

TEST_CASE("fold on a single cell is the identity") {
  KHamiltonian H = generate_synthetic(Mesh({1, 1, 1}), 3, 5, 0.5);
  KHamiltonian F = fold_to_supercell(H);
  CHECK(F.n == 3);
  CHECK(F.h == H.h);
  CHECK(F.V == H.V);
}

TEST_CASE("fold preserves symmetry and spectrum") {
  KHamiltonian H = generate_synthetic(Mesh({1, 1, 2}), 1, 9, 0.5);
  KHamiltonian F = fold_to_supercell(H);
  CHECK(F.nk() == 1);
  CHECK(F.n == 2);
  CHECK(validate(F, 1e-12).pass);
  const Eigen::VectorXd a = spectrum(assemble_direct(H));
  const Eigen::VectorXd b = spectrum(assemble_direct(F));
  CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("hamiltonian bundles round trip") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "kbloch_test_io_roundtrip";
  fs::remove_all(dir);
  KHamiltonian H = generate_synthetic(Mesh({1, 2, 1}), 2, 8, 0.5);
  write_hamiltonian(dir, H, {{"seed", "8"}});
  KHamiltonian R = read_hamiltonian(dir);
  CHECK(R.mesh == H.mesh);
  CHECK(R.n == H.n);
  CHECK(R.h == H.h);
  CHECK(R.V == H.V);
  Bundle b = read_bundle(dir);
  CHECK(b.meta.at("seed") == "8");
  CHECK_THROWS(b.get("missing"));
  fs::remove_all(dir);
}

TEST_CASE("missing bundle is a data error") {
  CHECK_THROWS_AS(read_hamiltonian("/nonexistent/kbloch"), DataError);
}
