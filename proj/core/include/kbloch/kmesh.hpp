// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace kbloch {

using KVector = std::array<int, 3>;
/// Reciprocal-lattice shift in units of grid points; each component is 0 or -N_dim
/// for vectors produced by gvector().
using GVector = std::array<int, 3>;

class InvalidKVector : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Gamma-centred Monkhorst-Pack grid. k-points are enumerated with x slowest:
/// flat = (kx*Ny + ky)*Nz + kz.
class Mesh {
 public:
  Mesh() : Mesh({1, 1, 1}) {}
  explicit Mesh(std::array<int, 3> dims);

  const std::array<int, 3>& dims() const { return dims_; }
  int nk() const { return dims_[0] * dims_[1] * dims_[2]; }
  /// Register width for one k vector: sum of ceil(log2 N_dim).
  int nk_bits() const;
  /// Number of even extents among N_x, N_y, N_z.
  int num_even() const;

  bool valid(const KVector& k) const;
  void check(const KVector& k) const;
  int index(const KVector& k) const;
  KVector kvec(int flat) const;

  /// Flat-index forms of modular subtraction and negation.
  int sub(int a, int b) const {
    return sub_table_.empty() ? sub_direct(a, b) : sub_table_[static_cast<std::size_t>(a) * nk() + b];
  }
  int neg(int q) const { return sub(0, q); }
  int add(int a, int b) const { return sub(a, neg(b)); }

  bool operator==(const Mesh& o) const { return dims_ == o.dims_; }
  std::string str() const;

 private:
  std::array<int, 3> dims_;
  int sub_direct(int a, int b) const;
  // Filled only for meshes small enough that N_k^2 entries are cheap.
  std::vector<int> sub_table_;
};

KVector modsub(const Mesh& mesh, const KVector& a, const KVector& b);
KVector modadd(const Mesh& mesh, const KVector& a, const KVector& b);
KVector modneg(const Mesh& mesh, const KVector& a);

struct QG {
  KVector Q;
  GVector G;
};

/// Q = kp (-) kq and G = (kp - kq) - Q with plain integer subtraction.
QG gvector(const Mesh& mesh, const KVector& kp, const KVector& kq);

struct Complement {
  KVector negQ;
  GVector notG;
};

/// negQ = 0 (-) Q and notG = -(Q + G + negQ), so that kq - kp = negQ + notG.
Complement complement_g(const Mesh& mesh, const KVector& Q, const GVector& G);

/// Number of Q with Q == (-)Q; equals 2^v for v even extents.
int count_self_inverse_q(const Mesh& mesh);

/// 3-bit flag form of G: bit (2-d) set when component d is nonzero.
int g_flag(const GVector& G);
/// Flag of G(k, k (-) Q) computed directly on flat indices.
int g_flag_of(const Mesh& mesh, int k, int Q);
/// Flag of !G given Q and the flag of G: components where Q is nonzero flip.
int not_g_flag(const Mesh& mesh, int Q, int gflag);
/// Mask of flag bits that can be nonzero for this Q.
int reachable_g_mask(const Mesh& mesh, int Q);

}  // namespace kbloch
