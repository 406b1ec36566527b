// SPDX-License-Identifier: Apache-2.0
#include "kbloch/kmesh.hpp"

#include <sstream>

#include "kbloch/numeric.hpp"

namespace kbloch {

namespace {
constexpr int kSubTableLimit = 1024;
}  // namespace

Mesh::Mesh(std::array<int, 3> dims) : dims_(dims) {
  for (int d : dims_)
    if (d < 1) throw std::invalid_argument("mesh extents must be >= 1");
  const int n = nk();
  if (n > kSubTableLimit) return;
  sub_table_.resize(static_cast<std::size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) sub_table_[static_cast<std::size_t>(a) * n + b] = sub_direct(a, b);
}

int Mesh::sub_direct(int a, int b) const {
  const KVector ka = kvec(a), kb = kvec(b);
  KVector r;
  for (int d = 0; d < 3; ++d) r[d] = ((ka[d] - kb[d]) % dims_[d] + dims_[d]) % dims_[d];
  return index(r);
}

int Mesh::nk_bits() const {
  return ceil_log2(dims_[0]) + ceil_log2(dims_[1]) + ceil_log2(dims_[2]);
}

int Mesh::num_even() const {
  int v = 0;
  for (int d : dims_) v += (d % 2 == 0);
  return v;
}

bool Mesh::valid(const KVector& k) const {
  for (int d = 0; d < 3; ++d)
    if (k[d] < 0 || k[d] >= dims_[d]) return false;
  return true;
}

void Mesh::check(const KVector& k) const {
  if (!valid(k)) {
    std::ostringstream os;
    os << "k-vector (" << k[0] << "," << k[1] << "," << k[2] << ") outside mesh " << str();
    throw InvalidKVector(os.str());
  }
}

int Mesh::index(const KVector& k) const { return (k[0] * dims_[1] + k[1]) * dims_[2] + k[2]; }

KVector Mesh::kvec(int flat) const {
  KVector k;
  k[2] = flat % dims_[2];
  flat /= dims_[2];
  k[1] = flat % dims_[1];
  k[0] = flat / dims_[1];
  return k;
}

std::string Mesh::str() const {
  std::ostringstream os;
  os << "[" << dims_[0] << "," << dims_[1] << "," << dims_[2] << "]";
  return os.str();
}

KVector modsub(const Mesh& mesh, const KVector& a, const KVector& b) {
  mesh.check(a);
  mesh.check(b);
  KVector r;
  for (int d = 0; d < 3; ++d) {
    const int n = mesh.dims()[d];
    r[d] = ((a[d] - b[d]) % n + n) % n;
  }
  return r;
}

KVector modneg(const Mesh& mesh, const KVector& a) { return modsub(mesh, KVector{0, 0, 0}, a); }

KVector modadd(const Mesh& mesh, const KVector& a, const KVector& b) {
  return modsub(mesh, a, modneg(mesh, b));
}

QG gvector(const Mesh& mesh, const KVector& kp, const KVector& kq) {
  QG out;
  out.Q = modsub(mesh, kp, kq);
  for (int d = 0; d < 3; ++d) out.G[d] = (kp[d] - kq[d]) - out.Q[d];
  return out;
}

Complement complement_g(const Mesh& mesh, const KVector& Q, const GVector& G) {
  Complement c;
  c.negQ = modneg(mesh, Q);
  for (int d = 0; d < 3; ++d) c.notG[d] = -(Q[d] + G[d] + c.negQ[d]);
  return c;
}

int count_self_inverse_q(const Mesh& mesh) {
  int count = 0;
  for (int q = 0; q < mesh.nk(); ++q) count += (mesh.neg(q) == q);
  return count;
}

int g_flag(const GVector& G) {
  return ((G[0] != 0) << 2) | ((G[1] != 0) << 1) | static_cast<int>(G[2] != 0);
}

int g_flag_of(const Mesh& mesh, int k, int Q) {
  // G(k, k (-) Q) is nonzero exactly in the components where k_d - Q_d wraps.
  const KVector kv = mesh.kvec(k);
  const KVector qv = mesh.kvec(Q);
  int flag = 0;
  for (int d = 0; d < 3; ++d)
    if (kv[d] - qv[d] < 0) flag |= 1 << (2 - d);
  return flag;
}

int reachable_g_mask(const Mesh& mesh, int Q) {
  const KVector qv = mesh.kvec(Q);
  int mask = 0;
  for (int d = 0; d < 3; ++d)
    if (qv[d] != 0) mask |= 1 << (2 - d);
  return mask;
}

int not_g_flag(const Mesh& mesh, int Q, int gflag) { return gflag ^ reachable_g_mask(mesh, Q); }

}  // namespace kbloch
