// SPDX-License-Identifier: Apache-2.0
#pragma once
#include <array>
#include <vector>

#include "kbloch/kmesh.hpp"

namespace kbloch::testing {

// Worked momentum examples. Two published rows carry a (-)Q that breaks
// kq - kp = (-)Q + !G; `printed_negq` keeps the printed value and `negq`
// holds the value the identity forces.
struct MomentumRow {
  std::array<int, 3> dims;
  KVector kp, kq;
  KVector Q;
  GVector G;
  KVector negq;
  GVector notg;
  KVector printed_negq;
  bool consistent;
};

inline const std::vector<MomentumRow>& momentum_rows() {
  static const std::vector<MomentumRow> rows = {
      {{1, 1, 4}, {0, 0, 3}, {0, 0, 1}, {0, 0, 2}, {0, 0, 0}, {0, 0, 2}, {0, 0, -4}, {0, 0, 2}, true},
      {{1, 4, 4}, {0, 2, 1}, {0, 3, 1}, {0, 3, 0}, {0, -4, 0}, {0, 1, 0}, {0, 0, 0}, {0, 1, 0}, true},
      {{1, 4, 4}, {0, 2, 1}, {0, 3, 3}, {0, 3, 2}, {0, -4, -4}, {0, 1, 2}, {0, 0, 0}, {0, 1, 2}, true},
      {{1, 4, 4}, {0, 1, 2}, {0, 1, 3}, {0, 0, 3}, {0, 0, -4}, {0, 0, 1}, {0, 0, 0}, {0, 0, 2}, false},
      {{1, 4, 4}, {0, 1, 3}, {0, 1, 2}, {0, 0, 1}, {0, 0, 0}, {0, 0, 3}, {0, 0, -4}, {0, 0, 3}, true},
      {{4, 4, 4}, {2, 1, 3}, {3, 1, 2}, {3, 0, 1}, {-4, 0, 0}, {1, 0, 3}, {0, 0, -4}, {0, 0, 3}, false},
      {{4, 4, 4}, {2, 1, 2}, {3, 3, 3}, {3, 2, 3}, {-4, -4, -4}, {1, 2, 1}, {0, 0, 0}, {1, 2, 1}, true},
  };
  return rows;
}

/// Counts pairs on the mesh where kq - kp != (-)Q + !G. Zero means the identity holds.
inline int complement_identity_failures(const Mesh& mesh) {
  int bad = 0;
  for (int a = 0; a < mesh.nk(); ++a)
    for (int b = 0; b < mesh.nk(); ++b) {
      const KVector kp = mesh.kvec(a), kq = mesh.kvec(b);
      const QG qg = gvector(mesh, kp, kq);
      const Complement c = complement_g(mesh, qg.Q, qg.G);
      for (int d = 0; d < 3; ++d)
        if (kq[d] - kp[d] != c.negQ[d] + c.notG[d]) {
          ++bad;
          break;
        }
    }
  return bad;
}

}  // namespace kbloch::testing
