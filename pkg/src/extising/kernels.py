"""Hot loops, each with a numba implementation and a pure-numpy fallback.

Cyclotomic integers are int64 arrays whose last axis holds the 8
coefficients of ``sum_m c_m zeta^m`` (``zeta^8 = -1``).  Callers keep
magnitudes far from the int64 limit and check bounds before calling in.
"""
from __future__ import annotations

import numpy as np

from ._accel import USE_NUMBA, njit

D = 8
INT_LIMIT = 1 << 62

# MUL[i, j, m]: coefficient of zeta^m in zeta^i * zeta^j
MUL = np.zeros((D, D, D), dtype=np.int64)
for _i in range(D):
    for _j in range(D):
        _m = _i + _j
        if _m >= D:
            MUL[_i, _j, _m - D] = -1
        else:
            MUL[_i, _j, _m] = 1


def poly_mul_np(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.einsum("...i,...j,ijm->...m", a, b, MUL, optimize=True)


@njit
def _pmul(a, b, out):
    for m in range(8):
        out[m] = 0
    for i in range(8):
        ai = a[i]
        if ai == 0:
            continue
        for j in range(8):
            bj = b[j]
            if bj == 0:
                continue
            m = i + j
            if m >= 8:
                out[m - 8] -= ai * bj
            else:
                out[m] += ai * bj


# ---------------------------------------------------------------------------
# equation evaluation: prod(lhs) * lhs_scale == sum_t prod(rhs_t) * rhs_scale
# ---------------------------------------------------------------------------

@njit
def _eval_equations_nb(values, lhs_idx, lhs_scale, rhs_idx, rhs_scale, early_exit):
    n = lhs_idx.shape[0]
    bad = np.zeros(n, dtype=np.bool_)
    acc = np.zeros(8, dtype=np.int64)
    tmp = np.zeros(8, dtype=np.int64)
    lhs = np.zeros(8, dtype=np.int64)
    rhs = np.zeros(8, dtype=np.int64)
    term = np.zeros(8, dtype=np.int64)
    for s in range(n):
        acc[:] = lhs_scale
        for r in range(lhs_idx.shape[1]):
            _pmul(acc, values[lhs_idx[s, r]], tmp)
            acc[:] = tmp
        lhs[:] = acc
        rhs[:] = 0
        for t in range(rhs_idx.shape[1]):
            if rhs_idx[s, t, 0] < 0:
                continue
            term[:] = rhs_scale
            for r in range(rhs_idx.shape[2]):
                _pmul(term, values[rhs_idx[s, t, r]], tmp)
                term[:] = tmp
            rhs += term
        for m in range(8):
            if lhs[m] != rhs[m]:
                bad[s] = True
                break
        if early_exit and bad[s]:
            break
    return bad


def _eval_equations_np(values, lhs_idx, lhs_scale, rhs_idx, rhs_scale, early_exit, chunk=20000):
    n = lhs_idx.shape[0]
    bad = np.zeros(n, dtype=bool)
    zero = np.zeros((1, D), dtype=np.int64)
    padded = np.concatenate([values, zero])  # index -1 gathers the zero row
    for start in range(0, n, chunk):
        sl = slice(start, start + chunk)
        li = lhs_idx[sl]
        lhs = np.broadcast_to(lhs_scale, (li.shape[0], D))
        for r in range(li.shape[1]):
            lhs = poly_mul_np(lhs, values[li[:, r]])
        ri = rhs_idx[sl]
        present = ri[:, :, 0] >= 0
        term = np.broadcast_to(rhs_scale, ri.shape[:2] + (D,))
        for r in range(ri.shape[2]):
            term = poly_mul_np(term, padded[ri[:, :, r]])
        term = term * present[..., None]
        rhs = term.sum(axis=1)
        bad[sl] = np.any(lhs != rhs, axis=1)
        if early_exit and bad[sl].any():
            first = start + int(np.argmax(bad[sl]))
            bad[first + 1:] = False
            break
    return bad


def eval_equations(values, lhs_idx, lhs_scale, rhs_idx, rhs_scale, early_exit=False):
    """Flag instances whose two sides differ.

    ``values``: (V, 8) table of cyclotomic integers.  ``lhs_idx``: (n, nL)
    rows of ``values`` multiplied together.  ``rhs_idx``: (n, nT, nR), a sum
    of nT products; a term whose first index is -1 is absent.
    """
    values = np.ascontiguousarray(values, dtype=np.int64)
    lhs_idx = np.ascontiguousarray(lhs_idx, dtype=np.int64)
    rhs_idx = np.ascontiguousarray(rhs_idx, dtype=np.int64)
    lhs_scale = np.ascontiguousarray(lhs_scale, dtype=np.int64)
    rhs_scale = np.ascontiguousarray(rhs_scale, dtype=np.int64)
    vmax = int(np.abs(values).max(initial=0))
    smax = max(int(np.abs(lhs_scale).max()), int(np.abs(rhs_scale).max()))
    depth = max(lhs_idx.shape[1], rhs_idx.shape[2])
    bound = smax * 8 ** depth * max(vmax, 1) ** depth * max(rhs_idx.shape[1], 1)
    if bound >= INT_LIMIT:
        raise OverflowError("coefficient bound exceeds int64; use the exact Python route")
    if lhs_idx.shape[0] == 0:
        return np.zeros(0, dtype=bool)
    if USE_NUMBA:
        return _eval_equations_nb(values, lhs_idx, lhs_scale, rhs_idx, rhs_scale, early_exit)
    return _eval_equations_np(values, lhs_idx, lhs_scale, rhs_idx, rhs_scale, early_exit)


# ---------------------------------------------------------------------------
# exact matrix product over Z[zeta]
# ---------------------------------------------------------------------------

@njit
def _cyclo_matmul_nb(a, b):
    n, m = a.shape[0], a.shape[1]
    p = b.shape[1]
    out = np.zeros((n, p, 8), dtype=np.int64)
    tmp = np.zeros(8, dtype=np.int64)
    for i in range(n):
        for j in range(p):
            for k in range(m):
                _pmul(a[i, k], b[k, j], tmp)
                out[i, j] += tmp
    return out


def cyclo_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.int64)
    b = np.ascontiguousarray(b, dtype=np.int64)
    bound = 8 * a.shape[1] * (int(np.abs(a).max(initial=0)) * int(np.abs(b).max(initial=0)))
    if bound >= INT_LIMIT:
        raise OverflowError("matrix coefficients too large for int64 kernel")
    if USE_NUMBA:
        return _cyclo_matmul_nb(a, b)
    return np.einsum("ikx,kjy,xym->ijm", a, b, MUL, optimize=True)


# ---------------------------------------------------------------------------
# column-permutation census
# ---------------------------------------------------------------------------

@njit
def _perm_census_nb(h, perms):
    P, n = perms.shape
    sym = np.zeros(P, dtype=np.bool_)
    tr = np.zeros(P, dtype=np.int64)
    for p in range(P):
        ok = True
        for i in range(n):
            for j in range(i + 1, n):
                if h[i, perms[p, j]] != h[j, perms[p, i]]:
                    ok = False
                    break
            if not ok:
                break
        sym[p] = ok
        t = 0
        for i in range(n):
            t += h[i, perms[p, i]]
        tr[p] = t
    return sym, tr


def _perm_census_np(h, perms):
    hp = h[:, perms].transpose(1, 0, 2)  # hp[p, i, j] = h[i, perms[p, j]]
    sym = np.all(hp == hp.transpose(0, 2, 1), axis=(1, 2))
    tr = np.trace(hp, axis1=1, axis2=2).astype(np.int64)
    return sym, tr


def perm_census(h: np.ndarray, perms: np.ndarray):
    """For each column permutation: is ``h[:, perm]`` symmetric, and its trace."""
    h = np.ascontiguousarray(h, dtype=np.int64)
    perms = np.ascontiguousarray(perms, dtype=np.int64)
    if USE_NUMBA:
        return _perm_census_nb(h, perms)
    return _perm_census_np(h, perms)


# ---------------------------------------------------------------------------
# packed F_2 matrices: element = int64 whose byte j is the image of basis j
# ---------------------------------------------------------------------------

@njit
def _compose_nb(a, b, n):
    out = np.zeros(a.shape[0], dtype=np.int64)
    for s in range(a.shape[0]):
        x, y = a[s], b[s]
        r = 0
        for j in range(n):
            col = (y >> (8 * j)) & 0xFF
            img = 0
            for i in range(n):
                if (col >> i) & 1:
                    img ^= (x >> (8 * i)) & 0xFF
            r |= img << (8 * j)
        out[s] = r
    return out


def _compose_np(a, b, n):
    shifts = 8 * np.arange(n, dtype=np.int64)
    acol = (a[:, None] >> shifts) & 0xFF  # (s, i)
    bcol = (b[:, None] >> shifts) & 0xFF  # (s, j)
    out = np.zeros(a.shape[0], dtype=np.int64)
    for j in range(n):
        img = np.zeros(a.shape[0], dtype=np.int64)
        for i in range(n):
            img ^= np.where((bcol[:, j] >> i) & 1, acol[:, i], 0)
        out |= img << (8 * j)
    return out


def compose_packed(a, b, n: int) -> np.ndarray:
    """Elementwise composition ``a[s] o b[s]`` of packed n x n F_2 matrices (n <= 7)."""
    a = np.ascontiguousarray(a, dtype=np.int64)
    b = np.ascontiguousarray(b, dtype=np.int64)
    a, b = np.broadcast_arrays(a, b)
    shape = a.shape
    a = np.ascontiguousarray(a).ravel()
    b = np.ascontiguousarray(b).ravel()
    if USE_NUMBA:
        return _compose_nb(a, b, n).reshape(shape)
    return _compose_np(a, b, n).reshape(shape)
