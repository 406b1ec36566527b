// SPDX-License-Identifier: Apache-2.0
#include "kbloch/physical.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "kbloch/numeric.hpp"

#ifndef KBLOCH_PROFILE_INSTALL_DIR
#define KBLOCH_PROFILE_INSTALL_DIR ""
#endif

namespace kbloch {

PhysicalReport estimate_physical(std::int64_t toffolis, std::int64_t logical_qubits, const PhysicalParams& P) {
  if (toffolis < 1 || logical_qubits < 1) throw std::invalid_argument("estimate_physical: counts must be >= 1");
  if (!(P.p > 0 && P.p < P.p_th) || !(P.cycle_time > 0) || P.factories < 1)
    throw std::invalid_argument("estimate_physical: invalid profile");
  const double T = static_cast<double>(toffolis), Q = static_cast<double>(logical_qubits);
  for (int d = 3; d <= P.max_distance; d += 2) {
    const double lat = P.latency_per_d * d * 4.0 / P.factories;
    const double err = P.a * std::pow(P.p / P.p_th, (d + 1) / 2.0) * Q * T * lat;
    if (err <= P.budget) {
      PhysicalReport r;
      r.distance = d;
      r.cycles_per_toffoli = lat;
      r.logical_error = err;
      r.physical_qubits = P.routing * Q * 2.0 * d * d + P.factories * P.factory_qubits_per_d2 * d * d;
      r.runtime_days = T * lat * P.cycle_time / 86400.0;
      return r;
    }
  }
  throw InfeasibleError("no code distance up to " + std::to_string(P.max_distance) + " meets the failure budget");
}

PhysicalParams load_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open profile " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("malformed profile " + path + ": " + e.what());
  }
  PhysicalParams P;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    const auto& v = it.value();
    if (k == "name") P.name = v.get<std::string>();
    else if (k == "p") P.p = v.get<double>();
    else if (k == "p_th") P.p_th = v.get<double>();
    else if (k == "a") P.a = v.get<double>();
    else if (k == "cycle_time") P.cycle_time = v.get<double>();
    else if (k == "factories") P.factories = v.get<int>();
    else if (k == "budget") P.budget = v.get<double>();
    else if (k == "latency_per_d") P.latency_per_d = v.get<double>();
    else if (k == "routing") P.routing = v.get<double>();
    else if (k == "factory_qubits_per_d2") P.factory_qubits_per_d2 = v.get<double>();
    else if (k == "max_distance") P.max_distance = v.get<int>();
    else if (k == "comment") continue;
    else throw DataError("unknown profile key '" + k + "' in " + path);
  }
  return P;
}

std::string profile_to_json(const PhysicalParams& P) {
  nlohmann::ordered_json j;
  j["name"] = P.name;
  j["p"] = P.p;
  j["p_th"] = P.p_th;
  j["a"] = P.a;
  j["cycle_time"] = P.cycle_time;
  j["factories"] = P.factories;
  j["budget"] = P.budget;
  j["latency_per_d"] = P.latency_per_d;
  j["routing"] = P.routing;
  j["factory_qubits_per_d2"] = P.factory_qubits_per_d2;
  j["max_distance"] = P.max_distance;
  return j.dump(2);
}

PhysicalParams default_profile() {
  namespace fs = std::filesystem;
  if (const char* dir = std::getenv("KBLOCH_PROFILE_DIR")) {
    const fs::path p = fs::path(dir) / "diamond_v1.json";
    if (fs::exists(p)) return load_profile(p.string());
  }
  const fs::path installed = fs::path(KBLOCH_PROFILE_INSTALL_DIR) / "diamond_v1.json";
  if (!installed.empty() && fs::exists(installed)) return load_profile(installed.string());
  return PhysicalParams{};
}

}  // namespace kbloch
