"""Multiplicity-free anyon models and the extended Ising hierarchy."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path

import numpy as np

from .cyclo import ONE, CycloNumber


@dataclass(frozen=True, eq=False)
class AnyonModel:
    """Charges, fusion tensor ``fusion[a, b, c] = N_ab^c`` and quantum dimensions.

    Charge 0 is the vacuum.  For members of the hierarchy (``k`` set) the
    Abelian charges are indices ``0 .. 2**k - 1`` with XOR fusion, and the
    non-Abelian charge is the last index.
    """

    charges: tuple[str, ...]
    fusion: np.ndarray
    qdim: tuple[CycloNumber, ...] | None = None
    k: int | None = None
    name: str = ""
    notes: tuple[str, ...] = field(default=())

    def __post_init__(self):
        f = np.asarray(self.fusion, dtype=np.uint8)
        f.setflags(write=False)
        object.__setattr__(self, "fusion", f)

    @property
    def n(self) -> int:
        return len(self.charges)

    @property
    def beta(self) -> int:
        if self.k is None:
            raise ValueError("not a hierarchy model")
        return 1 << self.k

    def index(self, charge) -> int:
        if isinstance(charge, (int, np.integer)):
            if not 0 <= charge < self.n:
                raise KeyError(f"charge index {charge} not in model")
            return int(charge)
        try:
            return self.charges.index(charge)
        except ValueError:
            raise KeyError(f"charge {charge!r} not in model") from None

    def outcomes(self, a: int, b: int) -> list[int]:
        return [int(c) for c in np.nonzero(self.fusion[a, b])[0]]

    def N(self, a: int, b: int, c: int) -> int:
        return int(self.fusion[a, b, c])

    def __eq__(self, other):
        if not isinstance(other, AnyonModel):
            return NotImplemented
        return (self.charges == other.charges and self.k == other.k
                and np.array_equal(self.fusion, other.fusion) and self.qdim == other.qdim)

    def __hash__(self):
        return hash((self.charges, self.k, self.fusion.tobytes()))

    # io -------------------------------------------------------------------
    def to_json(self) -> dict:
        triples = [[int(a), int(b), int(c)] for a, b, c in zip(*np.nonzero(self.fusion))]
        d = {"k": self.k, "charges": list(self.charges), "fusion": triples}
        if self.qdim is not None:
            d["qdim"] = [q.to_json() for q in self.qdim]
        if self.name:
            d["name"] = self.name
        return d

    @classmethod
    def from_json(cls, d: dict) -> AnyonModel:
        charges = tuple(str(c) for c in d["charges"])
        n = len(charges)
        fusion = np.zeros((n, n, n), dtype=np.uint8)
        lookup = {c: i for i, c in enumerate(charges)}
        for triple in d["fusion"]:
            a, b, c = (t if isinstance(t, int) else lookup[t] for t in triple)
            fusion[a, b, c] = 1
        qdim = None
        if d.get("qdim") is not None:
            qdim = tuple(CycloNumber.from_json(q) for q in d["qdim"])
        return cls(charges, fusion, qdim, d.get("k"), d.get("name", ""))

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=1) + "\n")

    @classmethod
    def load(cls, path) -> AnyonModel:
        return cls.from_json(json.loads(Path(path).read_text()))


def alpha_name(i: int) -> str:
    return f"a{i}"


def build_extended_ising(k: int) -> AnyonModel:
    """The level-``k`` model I_k: 2**k self-inverse Abelian charges plus beta."""
    if k < 0:
        raise ValueError("k must be non-negative")
    n_ab = 1 << k
    n = n_ab + 1
    b = n_ab
    fusion = np.zeros((n, n, n), dtype=np.uint8)
    for i in range(n_ab):
        for j in range(n_ab):
            fusion[i, j, i ^ j] = 1
        fusion[i, b, b] = fusion[b, i, b] = 1
        fusion[b, b, i] = 1
    qdim = (ONE,) * n_ab + (CycloNumber.inv_sqrt2_pow(k).inv(),)
    notes = ("k = 0 is the trivial-plus-beta toy model",) if k == 0 else ()
    return AnyonModel(tuple(alpha_name(i) for i in range(n_ab)) + ("b",), fusion, qdim, k,
                      f"I_{k}", notes)


def toric_code_model() -> AnyonModel:
    """Quantum double of Z_2: charges 1, e, m, eps."""
    charges = ("1", "e", "m", "eps")
    fusion = np.zeros((4, 4, 4), dtype=np.uint8)
    for a in range(4):
        for b in range(4):
            fusion[a, b, a ^ b] = 1
    return AnyonModel(charges, fusion, (ONE,) * 4, None, "D(Z2)")


def ising_model() -> AnyonModel:
    """The Ising model, identical to I_1 with charges renamed 1, psi, sigma."""
    m = build_extended_ising(1)
    return AnyonModel(("1", "psi", "sigma"), m.fusion, m.qdim, 1, "Ising")


@dataclass
class ValidationReport:
    violations: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, axiom: str, **detail):
        self.violations.append({"axiom": axiom, **detail})

    def to_json(self) -> dict:
        return {"ok": self.ok, "violations": self.violations}


def validate_model(m: AnyonModel) -> ValidationReport:
    """Check the model axioms; never raises on an invalid model."""
    rep = ValidationReport()
    N = m.fusion.astype(np.int64)
    n = m.n
    if N.shape != (n, n, n):
        rep.add("shape", shape=list(N.shape))
        return rep
    if np.any(N > 1):
        rep.add("multiplicity_free", triples=np.argwhere(N > 1).tolist())
    eye = np.eye(n, dtype=np.int64)
    if not (np.array_equal(N[:, 0, :], eye) and np.array_equal(N[0, :, :], eye)):
        rep.add("vacuum", detail="N(a, 1, c) != delta(a, c)")
    for a in range(n):
        inv = np.nonzero(N[a, :, 0])[0].tolist()
        if len(inv) != 1:
            rep.add("inverse", charge=m.charges[a], candidates=[m.charges[i] for i in inv])
    for a, b in product(range(n), repeat=2):
        if not N[a, b].any():
            rep.add("closure", a=m.charges[a], b=m.charges[b])
    if not np.array_equal(N, N.transpose(1, 0, 2)):
        bad = np.argwhere(N != N.transpose(1, 0, 2))
        rep.add("commutativity", count=len(bad))
    # sum_e N_ab^e N_ec^d == sum_f N_bc^f N_af^d
    lhs = np.einsum("abe,ecd->abcd", N, N)
    rhs = np.einsum("bcf,afd->abcd", N, N)
    if not np.array_equal(lhs, rhs):
        bad = np.argwhere(lhs != rhs)
        rep.add("associativity", count=len(bad),
                first=[m.charges[i] for i in bad[0]])
    if m.qdim is not None:
        for a in range(n):
            # d_a^2 = sum_b N_{a abar}^b d_b
            inv = np.nonzero(N[a, :, 0])[0]
            if len(inv) != 1:
                continue
            rhs_d = sum((m.qdim[b] * int(N[a, inv[0], b]) for b in range(n)), CycloNumber())
            if m.qdim[a] * m.qdim[a] != rhs_d:
                rep.add("quantum_dimension", charge=m.charges[a])
    return rep


def fusion_space_dim(m: AnyonModel, n_anyons: int, total) -> int:
    """Dimension of the space of ``n_anyons`` betas fusing to ``total``."""
    if n_anyons < 2:
        raise ValueError("need at least two anyons")
    t = m.index(total)
    b = m.beta
    N = m.fusion.astype(np.int64)
    v = np.zeros(m.n, dtype=object)
    v[b] = 1
    for _ in range(n_anyons - 1):
        v = np.array([sum(int(v[a]) * int(N[a, b, c]) for a in range(m.n)) for c in range(m.n)],
                     dtype=object)
    return int(v[t])
