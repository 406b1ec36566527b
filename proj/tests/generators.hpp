// SPDX-License-Identifier: Apache-2.0
#pragma once
#include <algorithm>
#include <bit>
#include <cstdint>
#include <random>

#include "kbloch/kmesh.hpp"

namespace kbloch::testing {

// Small generator for property tests. Draws come straight from the engine so
// a failing case replays from its seed on any platform.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : eng_(seed) {}

  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(eng_() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  double real(double lo, double hi) { return lo + (hi - lo) * static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  bool coin() { return eng_() & 1; }

  /// Log-uniform integer in [1, hi].
  std::int64_t log_int(std::int64_t hi) {
    const int bits = static_cast<int>(between(0, std::bit_width(static_cast<std::uint64_t>(hi)) - 1));
    const std::int64_t lo = std::int64_t{1} << bits;
    return between(lo, std::min(hi, 2 * lo - 1));
  }

  Mesh mesh(int max_extent) {
    return Mesh({static_cast<int>(between(1, max_extent)), static_cast<int>(between(1, max_extent)),
                 static_cast<int>(between(1, max_extent))});
  }

  KVector kvec(const Mesh& m) { return m.kvec(static_cast<int>(between(0, m.nk() - 1))); }

  std::uint64_t seed() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace kbloch::testing
