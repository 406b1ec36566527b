// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace kbloch {

using cplx = std::complex<double>;

/// Smallest b with 2^b >= x. ceil_log2(1) == 0; ceil_log2(0) is rejected.
inline int ceil_log2(std::uint64_t x) {
  if (x == 0) throw std::invalid_argument("ceil_log2: argument must be positive");
  int b = 0;
  while ((std::uint64_t{1} << b) < x) ++b;
  return b;
}

/// ceil(log2(x)) for a real argument, used where formulas divide before taking logs.
inline int ceil_log2_real(double x) {
  if (!(x > 0.0)) throw std::invalid_argument("ceil_log2_real: argument must be positive");
  if (x <= 1.0) return 0;
  int b = 0;
  double p = 1.0;
  while (p < x) {
    p *= 2.0;
    ++b;
  }
  return b;
}

/// Largest e with 2^e dividing x (x > 0).
inline int two_adic(std::uint64_t x) {
  if (x == 0) throw std::invalid_argument("two_adic: argument must be positive");
  int e = 0;
  while ((x & 1u) == 0) {
    x >>= 1;
    ++e;
  }
  return e;
}

inline std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b; }

/// Neumaier compensated sum. Accumulate in a fixed order for reproducible totals.
class CompensatedSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace kbloch
