# SPDX-License-Identifier: Apache-2.0
"""numpy reference for dense spectra and lambda values.

Reads hamiltonian directories written by `kbloch gen`, rebuilds the
second-quantized operator from Jordan-Wigner matrices, and recomputes the
lambda values from their defining sums. Output is frozen into
tests/test_lambda.cpp.

    kbloch gen --mesh 1,1,2 --n 2 --seed 7 --model gram -o /tmp/gram
    kbloch gen --mesh 1,2,2 --n 1 --seed 5 --model thc --rank 2 -o /tmp/thc
    python3 tests/oracles/numeric_oracle.py /tmp/gram /tmp/thc
"""
import json
import sys
from functools import reduce
from pathlib import Path

import numpy as np


def load(d, name):
    man = json.loads((Path(d) / "manifest.json").read_text())
    shape = man["shapes"][name]
    raw = np.fromfile(Path(d) / f"{name}.bin", dtype="<f8")
    return man, (raw[0::2] + 1j * raw[1::2]).reshape(shape)


class Mesh:
    def __init__(self, dims):
        self.dims = dims
        self.nk = int(np.prod(dims))

    def kvec(self, i):
        return np.array(np.unravel_index(i, self.dims))

    def sub(self, a, b):
        return int(np.ravel_multi_index(tuple((self.kvec(a) - self.kvec(b)) % self.dims), self.dims))

    def gflag(self, k, Q):
        diff = self.kvec(k) - self.kvec(Q)
        return sum(1 << (2 - d) for d in range(3) if diff[d] < 0)


def annihilators(modes):
    a = np.array([[0, 1], [0, 0]], dtype=complex)
    z = np.diag([1.0, -1.0]).astype(complex)
    eye = np.eye(2, dtype=complex)
    return [reduce(np.kron, [z] * j + [a] + [eye] * (modes - j - 1)) for j in range(modes)]


def many_body(mesh, n, h, V):
    modes = 2 * n * mesh.nk
    c = annihilators(modes)
    cd = [x.conj().T for x in c]
    mode = lambda k, p, s: (k * n + p) * 2 + s
    H = np.zeros((2**modes, 2**modes), dtype=complex)
    K = mesh.nk
    for s in range(2):
        for k in range(K):
            for p in range(n):
                for q in range(n):
                    H += h[k, p, q] * cd[mode(k, p, s)] @ c[mode(k, q, s)]
    for Q in range(K):
        for k in range(K):
            for kp in range(K):
                kq, kpq = mesh.sub(k, Q), mesh.sub(kp, Q)
                for p in range(n):
                    for q in range(n):
                        for r in range(n):
                            for t in range(n):
                                v = V[Q, k, kp, p, q, r, t]
                                if v == 0:
                                    continue
                                for s in range(2):
                                    for u in range(2):
                                        H += 0.5 * v * (cd[mode(k, p, s)] @ c[mode(kq, q, s)]
                                                        @ cd[mode(kpq, r, u)] @ c[mode(kp, t, u)])
    return H


def l1(z):
    return np.abs(z.real) + np.abs(z.imag)


def effective_h(mesh, n, h, V):
    X = np.einsum("kjpqrr->kpq", V[0])
    return h + X


def pivoted_cholesky(A, tol=0.0):
    A = A.copy()
    diag = A.diagonal().real.copy()
    top = diag.max(initial=0.0)
    stop = max(tol, 64 * np.finfo(float).eps * top)
    vecs = []
    while diag.size and diag.max() > stop:
        i = int(np.argmax(diag))
        col = A[:, i] / np.sqrt(diag[i])
        vecs.append(col)
        A = A - np.outer(col, col.conj())
        diag = A.diagonal().real.copy()
    return vecs


def lambdas(mesh, n, h, V):
    K = mesh.nk
    hp = effective_h(mesh, n, h, V)
    one_sparse = l1(hp).sum()
    out = {"sparse": (one_sparse, l1(V).sum())}
    sf_two, df_two = 0.0, 0.0
    for Q in range(K):
        A = np.zeros((K * n * n, K * n * n), dtype=complex)
        for k in range(K):
            for kp in range(K):
                for p in range(n):
                    for q in range(n):
                        for r in range(n):
                            for s in range(n):
                                A[(k * n + p) * n + q, (kp * n + s) * n + r] = V[Q, k, kp, p, q, r, s]
        for vec in pivoted_cholesky(A):
            L = vec.reshape(K, n, n)
            sf_two += 0.5 * l1(L).sum() ** 2
            sa = sb = 0.0
            for k in range(K):
                rho = np.zeros((2 * n, 2 * n), dtype=complex) if Q else None
                if Q:
                    rho[:n, n:] = L[k]
                else:
                    rho = L[k]
                sa += np.abs(np.linalg.eigvalsh((rho + rho.conj().T) / 2)).sum()
                sb += np.abs(np.linalg.eigvalsh(1j * (rho - rho.conj().T) / 2)).sum()
            df_two += 0.25 * (sa**2 + sb**2)
    out["sf"] = (one_sparse, sf_two)
    df_one = sum(np.abs(np.linalg.eigvalsh(hp[k])).sum() for k in range(K))
    out["df"] = (df_one, df_two)
    return out


def thc_lambda(mesh, n, h, d):
    _, chi = load(d, "chi")
    _, zeta = load(d, "zeta")
    K, M = mesh.nk, chi.shape[2]
    norms = np.linalg.norm(chi, axis=1)  # [k][mu]
    one = 2 * sum(np.abs(np.linalg.eigvalsh(h[k])).sum() for k in range(K))
    two = 0.0
    for Q in range(K):
        for k in range(K):
            for kp in range(K):
                g1, g2 = mesh.gflag(k, Q), mesh.gflag(kp, Q)
                kq, kpq = mesh.sub(k, Q), mesh.sub(kp, Q)
                for mu in range(M):
                    for nu in range(M):
                        two += 2 * l1(zeta[Q, g1, g2, mu, nu]) * norms[k, mu] * norms[kq, mu] * norms[kpq, nu] * norms[kp, nu]
    return one, two


def report(d):
    man, h = load(d, "h")
    _, V = load(d, "v")
    mesh, n = Mesh(man["dims"]), man["n_spatial"]
    E = np.linalg.eigvalsh(many_body(mesh, n, h, V))
    print(f"{d}: dims={man['dims']} n={n} seed={man['meta'].get('seed')}")
    print(f"  E[0..2] = {E[0]:.15e} {E[1]:.15e} {E[2]:.15e}  E[-1] = {E[-1]:.15e}")
    print(f"  sum E^2 = {np.sum(E**2):.15e}")
    for name, (one, two) in lambdas(mesh, n, h, V).items():
        print(f"  lambda {name}: one={one:.15e} two={two:.15e}")
    if (Path(d) / "thc").exists():
        one, two = thc_lambda(mesh, n, h, Path(d) / "thc")
        print(f"  lambda thc: one={one:.15e} two={two:.15e}")


if __name__ == "__main__":
    for d in sys.argv[1:]:
        report(d)
