"""Linear algebra over F_2 and bitvector group elements.

Elements of (Z_2)^n are plain ints used as bitmasks: bit ``j`` is coordinate
``j`` and the group law is XOR.  Matrices are ``uint8`` numpy arrays with
entries in {0, 1}.
"""
from __future__ import annotations

from itertools import product

import numpy as np


def bits(x: int, n: int) -> np.ndarray:
    return np.array([(x >> j) & 1 for j in range(n)], dtype=np.uint8)


def from_bits(v) -> int:
    return int(sum(int(b) << j for j, b in enumerate(v)))


def popcount(x: int) -> int:
    return bin(x).count("1")


def parity(x: int) -> int:
    return popcount(x) & 1


def as_f2(m) -> np.ndarray:
    return np.asarray(m, dtype=np.int64).astype(np.uint8) % 2


def matmul(a, b) -> np.ndarray:
    return (as_f2(a).astype(np.int64) @ as_f2(b).astype(np.int64) % 2).astype(np.uint8)


def apply(m: np.ndarray, x: int) -> int:
    """Image of the bitmask ``x`` under ``m`` (acting on column vectors)."""
    out = 0
    for j in range(m.shape[1]):
        if (x >> j) & 1:
            out ^= from_bits(m[:, j])
    return out


def rank(m) -> int:
    a = as_f2(m).copy()
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        piv = None
        for i in range(r, rows):
            if a[i, c]:
                piv = i
                break
        if piv is None:
            continue
        a[[r, piv]] = a[[piv, r]]
        for i in range(rows):
            if i != r and a[i, c]:
                a[i] ^= a[r]
        r += 1
        if r == rows:
            break
    return r


def is_invertible(m) -> bool:
    m = as_f2(m)
    return m.shape[0] == m.shape[1] and rank(m) == m.shape[0]


def inverse(m) -> np.ndarray:
    m = as_f2(m)
    n = m.shape[0]
    if m.shape != (n, n):
        raise ValueError("inverse needs a square matrix")
    a = np.concatenate([m, np.eye(n, dtype=np.uint8)], axis=1)
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i, c]), None)
        if piv is None:
            raise ValueError("matrix is singular over F_2")
        a[[c, piv]] = a[[piv, c]]
        for i in range(n):
            if i != c and a[i, c]:
                a[i] ^= a[c]
    return a[:, n:].copy()


def symmetric_matrices(k: int):
    """All symmetric k x k matrices over F_2, as a generator."""
    slots = [(i, j) for i in range(k) for j in range(i, k)]
    for vals in product((0, 1), repeat=len(slots)):
        m = np.zeros((k, k), dtype=np.uint8)
        for (i, j), v in zip(slots, vals):
            m[i, j] = m[j, i] = v
        yield m


def general_linear(k: int) -> list[np.ndarray]:
    """Every element of GL(k, 2), in a deterministic order."""
    # columns are images of basis vectors; build column by column
    out = []
    full = 1 << k

    def rec(cols, span):
        if len(cols) == k:
            out.append(np.array([bits(c, k) for c in cols], dtype=np.uint8).T.copy())
            return
        for v in range(1, full):
            if v in span:
                continue
            rec(cols + [v], span | {s ^ v for s in span})

    rec([], {0})
    return out


def dot(x: int, y: int) -> int:
    return parity(x & y)
