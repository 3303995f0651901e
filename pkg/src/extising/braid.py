"""Braid-group images on four beta anyons and Clifford recognition.

The fusion space of four betas with total charge vacuum has the internal
alpha label ``x`` of the tree ((b b)_x b)_b b as basis, so it is
2**k-dimensional and ``x`` doubles as a k-bit computational basis state
(qubit ``j`` is bit ``j``).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import f2, kernels
from .cyclo import ONE, ZERO, CycloNumber

# sqrt(2) and conjugation on raw coefficient arrays
_SQRT2 = np.array([0, 0, 1, 0, 0, 0, -1, 0], dtype=np.int64)


def _mul_zeta(a: np.ndarray, m: int) -> np.ndarray:
    m %= 16
    sign = 1
    if m >= 8:
        m -= 8
        sign = -1
    out = np.roll(a, m, axis=-1)
    out[..., :m] *= -1
    return sign * out


def _conj(a: np.ndarray) -> np.ndarray:
    out = np.empty_like(a)
    out[..., 0] = a[..., 0]
    out[..., 1:] = -a[..., :0:-1]
    return out


def _times_sqrt2(a: np.ndarray) -> np.ndarray:
    return _mul_zeta(a, 2) - _mul_zeta(a, 6)


class GateMatrix:
    """Exact square matrix ``entries * 2**(-e/2)`` over Z[zeta_16].

    ``entries`` has shape (n, n, 8); the exponent is shared and kept minimal,
    so equal matrices have equal representations.
    """

    __slots__ = ("entries", "e")

    def __init__(self, entries, e: int = 0):
        a = np.array(entries, dtype=np.int64)
        if a.ndim != 3 or a.shape[0] != a.shape[1] or a.shape[2] != 8:
            raise ValueError("entries must have shape (n, n, 8)")
        e = int(e)
        if not a.any():
            e = 0
        while e >= 2 and not (a % 2).any():
            a //= 2
            e -= 2
        if e >= 1:
            t = _times_sqrt2(a)
            if not (t % 2).any():
                a = t // 2
                e -= 1
        a.setflags(write=False)
        self.entries = a
        self.e = e

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def from_cyclo(cls, rows) -> GateMatrix:
        rows = [[CycloNumber.coerce(x) for x in row] for row in rows]
        e = max(x.e for row in rows for x in row)
        s = CycloNumber.sqrt2() ** e
        return cls([[(x * s).coeffs for x in row] for row in rows], e)

    @classmethod
    def identity(cls, n: int) -> GateMatrix:
        a = np.zeros((n, n, 8), dtype=np.int64)
        a[np.arange(n), np.arange(n), 0] = 1
        return cls(a)

    @classmethod
    def diagonal(cls, diag) -> GateMatrix:
        n = len(diag)
        rows = [[diag[i] if i == j else ZERO for j in range(n)] for i in range(n)]
        return cls.from_cyclo(rows)

    def to_cyclo(self) -> list[list[CycloNumber]]:
        return [[CycloNumber(self.entries[i, j], self.e) for j in range(self.n)]
                for i in range(self.n)]

    def __getitem__(self, ij) -> CycloNumber:
        i, j = ij
        return CycloNumber(self.entries[i, j], self.e)

    def __matmul__(self, other: GateMatrix) -> GateMatrix:
        return GateMatrix(kernels.cyclo_matmul(self.entries, other.entries), self.e + other.e)

    def scale(self, x) -> GateMatrix:
        x = CycloNumber.coerce(x)
        a = kernels.poly_mul_np(self.entries, np.array(x.coeffs, dtype=np.int64))
        return GateMatrix(a, self.e + x.e)

    def times_zeta(self, m: int) -> GateMatrix:
        return GateMatrix(_mul_zeta(self.entries, m), self.e)

    def dagger(self) -> GateMatrix:
        return GateMatrix(_conj(self.entries).transpose(1, 0, 2), self.e)

    def permuted(self, perm) -> GateMatrix:
        """Relabel the basis: result[perm[r], perm[c]] = self[r, c]."""
        perm = np.asarray(perm)
        out = np.empty_like(self.entries)
        out[np.ix_(perm, perm)] = self.entries
        return GateMatrix(out, self.e)

    def __eq__(self, other):
        if not isinstance(other, GateMatrix):
            return NotImplemented
        return self.e == other.e and np.array_equal(self.entries, other.entries)

    def __hash__(self):
        return hash((self.e, self.entries.tobytes()))

    def is_unitary(self) -> bool:
        return self @ self.dagger() == GateMatrix.identity(self.n)

    def is_diagonal(self) -> bool:
        off = self.entries.copy()
        off[np.arange(self.n), np.arange(self.n)] = 0
        return not off.any()

    def phase_to(self, other: GateMatrix):
        """m with self == zeta**m * other, or None."""
        if self.e != other.e:
            return None
        for m in range(16):
            if np.array_equal(self.entries, _mul_zeta(other.entries, m)):
                return m
        return None

    def to_complex(self) -> np.ndarray:
        return np.array([[x.to_complex() for x in row] for row in self.to_cyclo()])

    def to_json(self):
        return [[x.to_json() for x in row] for row in self.to_cyclo()]

    @classmethod
    def from_json(cls, rows) -> GateMatrix:
        return cls.from_cyclo([[CycloNumber.from_json(x) for x in row] for row in rows])

    def __repr__(self):
        return f"GateMatrix(n={self.n}, e={self.e})"


# ---------------------------------------------------------------------------
# braid generators
# ---------------------------------------------------------------------------

def _check_pair(f, r):
    if r.f.model != f.model:
        raise ValueError("F- and R-symbols belong to different models")


def f_matrix(f) -> GateMatrix:
    return GateMatrix.from_cyclo(f.matrix())


def braid_generator(index: int, f, r) -> GateMatrix:
    """sigma_1 = sigma_3 = diag(R_bb^x); sigma_2 = F diag(R_bb^x) F^-1."""
    if index not in (1, 2, 3):
        raise ValueError(f"braid generator index must be 1, 2 or 3, got {index}")
    _check_pair(f, r)
    d = GateMatrix.diagonal(list(r.beta_beta))
    if index in (1, 3):
        return d
    F = f_matrix(f)
    return F @ d @ F.dagger()


def braid_word(word, f, r) -> GateMatrix:
    """Unitary of a braid word; the first letter acts first.

    Letters are nonzero ints: ``g`` for sigma_g and ``-g`` for its inverse.
    """
    word = list(word)
    if not word:
        raise ValueError("braid word must be non-empty")
    gens = {}
    out = None
    for w in word:
        w = int(w)
        if w == 0 or abs(w) > 3:
            raise ValueError(f"bad braid letter {w}")
        if abs(w) not in gens:
            gens[abs(w)] = braid_generator(abs(w), f, r)
        g = gens[abs(w)] if w > 0 else gens[abs(w)].dagger()
        out = g if out is None else g @ out
    return out


# ---------------------------------------------------------------------------
# Pauli / Clifford
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PauliElement:
    """i**phase * X^x Z^z on k qubits (Z applied first)."""
    x_bits: int
    z_bits: int
    phase: int = 0

    def matrix(self, k: int) -> GateMatrix:
        n = 1 << k
        a = np.zeros((n, n, 8), dtype=np.int64)
        for r in range(n):
            s = -1 if f2.dot(self.z_bits, r) else 1
            a[r ^ self.x_bits, r, 0] = s
        return GateMatrix(a).times_zeta(4 * self.phase)

    def label(self, k: int) -> str:
        ops = []
        for j in range(k):
            xb, zb = (self.x_bits >> j) & 1, (self.z_bits >> j) & 1
            ops.append("IXZY"[xb + 2 * zb])
        return "".join(ops)


def _as_pauli(q: GateMatrix, k: int):
    n = 1 << k
    col0 = [r for r in range(n) if q.entries[r, 0].any()]
    if len(col0) != 1:
        return None
    x = col0[0]
    c = q[x, 0]
    m = c.root_index()
    if m is None or m % 4:
        return None
    z = 0
    for j in range(k):
        v = q[(1 << j) ^ x, 1 << j]
        if v == -c:
            z |= 1 << j
        elif v != c:
            return None
    p = PauliElement(x, z, m // 4)
    return p if p.matrix(k) == q else None


def conjugate(g: GateMatrix, p: PauliElement, k: int):
    """g P g^dagger as a PauliElement, or None if it is not one."""
    return _as_pauli(g @ p.matrix(k) @ g.dagger(), k)


def _check_unitary(g: GateMatrix, k: int):
    if g.n != 1 << k:
        raise ValueError(f"matrix dimension {g.n} does not match k={k}")
    if not g.is_unitary():
        raise ValueError("matrix is not unitary")


def clifford_tableau(g: GateMatrix, k: int):
    """Images of X_j and Z_j, or None if some image is not a Pauli."""
    _check_unitary(g, k)
    out = []
    for j in range(k):
        for p in (PauliElement(1 << j, 0), PauliElement(0, 1 << j)):
            q = conjugate(g, p, k)
            if q is None:
                return None
            out.append(q)
    return out


def is_clifford(g: GateMatrix, k: int) -> bool:
    return clifford_tableau(g, k) is not None


# ---------------------------------------------------------------------------
# named gates
# ---------------------------------------------------------------------------

def _swap_pairs(r: int, k: int) -> int:
    out = 0
    for t in range(0, k - 1, 2):
        out |= ((r >> t) & 1) << (t + 1) | ((r >> (t + 1)) & 1) << t
    return out


def _sign_gate(k: int, sign_fn) -> GateMatrix:
    n = 1 << k
    a = np.zeros((n, n, 8), dtype=np.int64)
    for r in range(n):
        for c in range(n):
            a[r, c, 0] = sign_fn(r, c)
    return GateMatrix(a, k)


def hadamard_power(k: int) -> GateMatrix:
    return _sign_gate(k, lambda r, c: -1 if f2.dot(r, c) else 1)


def swap_hh_power(k: int) -> GateMatrix:
    if k % 2:
        raise ValueError("SWAP.(H x H) tensor powers need even k")
    return _sign_gate(k, lambda r, c: -1 if f2.dot(_swap_pairs(r, k), c) else 1)


def s_product(signs) -> GateMatrix:
    """Tensor product of S (sign +1) and S^dagger (sign -1), qubit j = signs[j]."""
    k = len(signs)
    diag = []
    for r in range(1 << k):
        m = sum(s for j, s in enumerate(signs) if (r >> j) & 1)
        diag.append(CycloNumber.zeta(4 * m))
    return GateMatrix.diagonal(diag)


def cz_power(k: int) -> GateMatrix:
    if k % 2:
        raise ValueError("CZ tensor powers need even k")
    diag = []
    for r in range(1 << k):
        m = sum((r >> t) & (r >> (t + 1)) & 1 for t in range(0, k, 2))
        diag.append(-ONE if m % 2 else ONE)
    return GateMatrix.diagonal(diag)


def _s_name(signs) -> str:
    return "⊗".join("S" if s > 0 else "S†" for s in signs)


def named_gates(k: int) -> list[tuple[str, GateMatrix]]:
    """Reference forms in match priority order."""
    out = [("H" if k == 1 else f"H^⊗{k}", hadamard_power(k))]
    if k % 2 == 0:
        out.append(("SWAP·(H⊗H)" if k == 2 else f"(SWAP·(H⊗H))^⊗{k // 2}", swap_hh_power(k)))
    out.append(("S" if k == 1 else f"S^⊗{k}", s_product([1] * k)))
    if k % 2 == 0:
        out.append(("CZ" if k == 2 else f"CZ^⊗{k // 2}", cz_power(k)))
    for signs in itertools.product((1, -1), repeat=k):
        if any(s < 0 for s in signs):
            out.append((_s_name(signs), s_product(list(signs))))
    return out


PRIMARY_NAMES = ("H", "SWAP·(H⊗H)", "S", "CZ")


@dataclass
class NamedForm:
    """g == zeta**phase * P^-1 target P with P|r> = |A r + t>."""
    name: str
    relabeling: list          # images of the basis vectors under A
    translation: int = 0      # t, i.e. a Pauli-X conjugation
    phase: int = 0            # power of zeta_16
    out_of_contract: bool = False
    extra: dict = field(default_factory=dict)

    @property
    def is_primary(self) -> bool:
        return self.translation == 0 and self.name.split("^")[0].strip("()") in PRIMARY_NAMES

    def to_json(self):
        return {"name": self.name, "relabeling": self.relabeling, "translation": self.translation,
                "phase_zeta16": self.phase, "out_of_contract": self.out_of_contract,
                "primary": self.is_primary}


def _gl_perms(k: int):
    for A in f2.general_linear(k):
        yield [f2.apply(A, r) for r in range(1 << k)], [f2.apply(A, 1 << j) for j in range(k)]


def match_named_gate(g: GateMatrix, k: int, allow_translation: bool = True,
                     allow_permutations: bool = False):
    """First named form matching g up to global phase and GL(k,2) relabeling.

    Pure linear relabelings are tried before affine ones (a translation is
    conjugation by a Pauli X string).  With ``allow_permutations`` an
    arbitrary basis permutation is tried last, flagged out of contract.
    """
    _check_unitary(g, k)
    n = 1 << k
    targets = named_gates(k)
    by_e = [(name, t) for name, t in targets if t.e == g.e]
    if not by_e:
        return None
    perms = list(_gl_perms(k))
    translations = range(n) if allow_translation else range(1)
    for t in translations:
        for name, target in by_e:
            for perm, cols in perms:
                p = [x ^ t for x in perm]
                m = g.permuted(p).phase_to(target)
                if m is not None:
                    return NamedForm(name, cols, t, m)
    if allow_permutations:
        for p in itertools.permutations(range(n)):
            for name, target in by_e:
                m = g.permuted(list(p)).phase_to(target)
                if m is not None:
                    return NamedForm(name, list(p), 0, m, out_of_contract=True)
    return None
