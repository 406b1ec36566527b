// SPDX-License-Identifier: Apache-2.0
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "kbloch/physical.hpp"

using namespace kbloch;

TEST_CASE("smallest diamond row under the frozen profile") {
  PhysicalReport r = estimate_physical(4'840'000'000LL, 2478, PhysicalParams{});
  CHECK(r.distance == 17);
  CHECK(r.physical_qubits == doctest::Approx(2.02e6).epsilon(0.01));
  CHECK(r.runtime_days == doctest::Approx(0.914).epsilon(0.01));
  CHECK(r.logical_error <= 1e-3);
}

TEST_CASE("runtime is linear in the Toffoli count at fixed distance") {
  const PhysicalParams P;
  PhysicalReport a = estimate_physical(10'000'000, 100, P);
  PhysicalReport b = estimate_physical(100'000'000, 100, P);
  REQUIRE(a.distance == b.distance);
  CHECK(b.runtime_days == doctest::Approx(10 * a.runtime_days));
  CHECK(b.physical_qubits == a.physical_qubits);
}

TEST_CASE("distance never decreases with more work") {
  const PhysicalParams P;
  int prev = 0;
  for (std::int64_t T = 1000; T < 4'000'000'000'000'000LL; T *= 7) {
    const int d = estimate_physical(T, 5000, P).distance;
    CHECK(d >= prev);
    CHECK(d % 2 == 1);
    prev = d;
  }
}

TEST_CASE("infeasible budgets are reported") {
  PhysicalParams P;
  P.max_distance = 5;
  CHECK_THROWS_AS(estimate_physical(1'000'000'000'000LL, 1000, P), InfeasibleError);
  CHECK_THROWS_AS(estimate_physical(0, 10, PhysicalParams{}), std::invalid_argument);
  P = PhysicalParams{};
  P.p = 0.02;
  CHECK_THROWS_AS(estimate_physical(10, 10, P), std::invalid_argument);
}

TEST_CASE("profiles round trip and reject unknown keys") {
  namespace fs = std::filesystem;
  const fs::path path = fs::temp_directory_path() / "kbloch_profile_test.json";
  PhysicalParams P;
  P.name = "custom";
  P.factories = 8;
  std::ofstream(path) << profile_to_json(P);
  PhysicalParams back = load_profile(path.string());
  CHECK(back.name == "custom");
  CHECK(back.factories == 8);
  CHECK(back.latency_per_d == P.latency_per_d);
  std::ofstream(path) << R"({"p": 1e-4, "colour": 3})";
  CHECK_THROWS_AS(load_profile(path.string()), DataError);
  fs::remove(path);
  CHECK_THROWS_AS(load_profile("/nonexistent/profile.json"), DataError);
}

TEST_CASE("shipped profile equals the built-in defaults") {
  PhysicalParams file = load_profile(KBLOCH_SOURCE_DIR "/profiles/diamond_v1.json");
  PhysicalParams def;
  CHECK(profile_to_json(file) == profile_to_json(def));
}
