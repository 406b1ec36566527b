// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "kbloch/numeric.hpp"

namespace kbloch {

/// Surface-code model profile. The defaults are the frozen diamond_v1 values.
struct PhysicalParams {
  std::string name = "diamond_v1";
  double p = 1e-4;             // physical error rate
  double p_th = 0.01;          // threshold
  double a = 0.1;              // logical error prefactor
  double cycle_time = 1e-6;    // seconds per code cycle
  int factories = 4;           // Toffoli factories
  double budget = 1e-3;        // total logical failure budget
  double latency_per_d = 0.96; // cycles per Toffoli per unit distance with four factories
  double routing = 1.25;       // routing overhead on data patches
  double factory_qubits_per_d2 = 200.0;
  int max_distance = 51;
};

struct PhysicalReport {
  int distance = 0;
  double physical_qubits = 0.0;
  double runtime_days = 0.0;
  double cycles_per_toffoli = 0.0;
  double logical_error = 0.0;
};

class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Smallest odd d >= 3 with a (p/p_th)^((d+1)/2) Q T c(d) <= budget, where
/// c(d) = latency_per_d * d * 4 / factories cycles per Toffoli.
PhysicalReport estimate_physical(std::int64_t toffolis, std::int64_t logical_qubits, const PhysicalParams& P);

/// Reads a profile JSON file; unknown keys are rejected, missing keys keep defaults.
PhysicalParams load_profile(const std::string& path);
std::string profile_to_json(const PhysicalParams& P);
/// Profile lookup: explicit path, else $KBLOCH_PROFILE_DIR/diamond_v1.json,
/// else the installed copy, else the built-in defaults.
PhysicalParams default_profile();

}  // namespace kbloch
