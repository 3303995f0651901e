"""F-symbols of the extended Ising models from symmetric bicharacters."""
from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import f2, kernels
from .cyclo import ONE, ZERO, CycloNumber
from .model import AnyonModel

MAX_ENUM_K = 4


class IntegrityError(AssertionError):
    """A value that the mathematics rules out was produced upstream."""


@dataclass(frozen=True, eq=False)
class Bicharacter:
    """chi_M(i, j) = (-1)**(i . M j) for a symmetric invertible F_2 matrix M."""

    M: np.ndarray

    def __post_init__(self):
        m = f2.as_f2(self.M)
        m.setflags(write=False)
        object.__setattr__(self, "M", m)

    @property
    def k(self) -> int:
        return self.M.shape[0]

    def is_valid(self) -> bool:
        return bool(np.array_equal(self.M, self.M.T)) and f2.is_invertible(self.M)

    def __call__(self, i: int, j: int) -> int:
        return bicharacter_eval(self.M, i, j)

    def __eq__(self, other):
        return isinstance(other, Bicharacter) and np.array_equal(self.M, other.M)

    def __hash__(self):
        return hash(self.M.tobytes())

    def to_json(self):
        return self.M.astype(int).tolist()


def bicharacter_eval(M, i: int, j: int) -> int:
    M = f2.as_f2(M)
    k = M.shape[0]
    if M.shape != (k, k):
        raise ValueError("bicharacter matrix must be square")
    if i >> k or j >> k:
        raise ValueError(f"group elements must have at most {k} bits")
    return -1 if f2.dot(i, f2.apply(M, j)) else 1


def enumerate_bicharacters(k: int) -> list[Bicharacter]:
    """All symmetric non-degenerate bicharacters on (Z_2)^k.

    Ordered by Hamming distance from the identity matrix, so index 0 is
    always the Sylvester bicharacter.
    """
    if not 1 <= k <= MAX_ENUM_K:
        raise ValueError(f"k must be in 1..{MAX_ENUM_K}")
    eye = np.eye(k, dtype=np.uint8)
    found = [m for m in f2.symmetric_matrices(k) if f2.is_invertible(m)]
    found.sort(key=lambda m: (int((m != eye).sum()), m.tobytes()))
    return [Bicharacter(m) for m in found]


def phi_from_bicharacter(b: Bicharacter) -> np.ndarray:
    """The 2**k x 2**k sign matrix phi[i, j] = chi(i, j)."""
    n = 1 << b.k
    # i . M j parity via bit tables
    cols = np.array([f2.apply(b.M, j) for j in range(n)], dtype=np.int64)
    rows = np.arange(n, dtype=np.int64)
    anded = rows[:, None] & cols[None, :]
    par = np.zeros_like(anded)
    for s in range(b.k):
        par ^= (anded >> s) & 1
    return (1 - 2 * par).astype(np.int8)


def phi_violations(phi: np.ndarray) -> list[str]:
    """Which defining properties of a phi matrix fail (empty when valid)."""
    phi = np.asarray(phi, dtype=np.int64)
    n = phi.shape[0]
    out = []
    if not np.all(np.abs(phi) == 1):
        out.append("entries")
    if not np.array_equal(phi, phi.T):
        out.append("symmetric")
    if not (np.all(phi[0] == 1) and np.all(phi[:, 0] == 1)):
        out.append("first_row_column")
    if not np.array_equal(phi @ phi.T, n * np.eye(n, dtype=np.int64)):
        out.append("hadamard")
    idx = np.arange(n)
    if not np.array_equal(phi[idx[:, None] ^ idx[None, :]],
                          phi[idx][:, None, :] * phi[idx][None, :, :]):
        out.append("row_multiplicative")
    return out


def trace_class(phi: np.ndarray) -> int:
    n = phi.shape[0]
    t = int(np.trace(np.asarray(phi, dtype=np.int64)))
    if t not in (0, n):
        raise IntegrityError(f"trace {t} of a {n}x{n} phi matrix is not 0 or {n}")
    return t


def sylvester(k: int) -> np.ndarray:
    h = np.array([[1, 1], [1, -1]], dtype=np.int64)
    out = np.ones((1, 1), dtype=np.int64)
    for _ in range(k):
        out = np.kron(h, out)
    return out.astype(np.int8)


@dataclass(eq=False)
class FSymbols:
    """Complete F-data in the gauge f = 1.

    ``values[(a, b, c, d, u, v)]`` is (F_{abc}^d)_u^v; fusion-disallowed
    entries are absent and read as zero.
    """

    model: AnyonModel
    overall_sign: int
    phi: np.ndarray
    values: dict
    bicharacter: Bicharacter | None = None
    _dense: tuple | None = field(default=None, repr=False)

    def __call__(self, a, b, c, d, u, v) -> CycloNumber:
        return self.values.get((a, b, c, d, u, v), ZERO)

    @property
    def k(self) -> int:
        return self.model.k

    def matrix(self) -> list[list[CycloNumber]]:
        """F_{bbb}^b indexed by Abelian labels."""
        B = self.model.beta
        n = 1 << self.k
        return [[self(B, B, B, B, i, j) for j in range(n)] for i in range(n)]

    def dense(self):
        """(table, E0): int64 (N**6, 8) integer table, value = table * 2**(-E0/2)."""
        if self._dense is None:
            self._dense = _dense_table(self.values, self.model.n)
        return self._dense

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "sign": self.overall_sign,
            "bicharacter": None if self.bicharacter is None else self.bicharacter.to_json(),
            "phi": np.asarray(self.phi).astype(int).tolist(),
            "entries": [[*key, val.to_json()] for key, val in sorted(self.values.items())],
        }

    @classmethod
    def from_json(cls, d: dict, model: AnyonModel) -> FSymbols:
        if d["k"] != model.k:
            raise ValueError("F-symbol file does not match model level")
        values = {tuple(e[:6]): CycloNumber.from_json(e[6]) for e in d["entries"]}
        b = None if d.get("bicharacter") is None else Bicharacter(np.array(d["bicharacter"]))
        return cls(model, d["sign"], np.array(d["phi"], dtype=np.int8), values, b)

    def save(self, path):
        Path(path).write_text(json.dumps(self.to_json()) + "\n")

    @classmethod
    def load(cls, path, model: AnyonModel) -> FSymbols:
        return cls.from_json(json.loads(Path(path).read_text()), model)

    def same_values(self, other: FSymbols) -> bool:
        return self.values == other.values and self.overall_sign == other.overall_sign


def _dense_table(values: dict, n: int):
    e0 = max((v.e for v in values.values()), default=0)
    table = np.zeros((n ** 6, 8), dtype=np.int64)
    for (a, b, c, d, u, v), x in values.items():
        y = x * CycloNumber.inv_sqrt2_pow(e0).inv()  # x * 2^(e0/2), integral
        if y.e:
            raise IntegrityError("dense scaling left a denominator")
        table[(((((a * n + b) * n + c) * n + d) * n + u) * n + v)] = y.coeffs
    return table, e0


def f_symbols_from_phi(model: AnyonModel, phi, overall_sign: int, bicharacter=None) -> FSymbols:
    """Assemble the F-data of I_k from a sign matrix without validating it."""
    if model.k is None:
        raise ValueError("model is not a member of the extended Ising hierarchy")
    if overall_sign not in (1, -1):
        raise ValueError("overall sign must be +1 or -1")
    k = model.k
    n_ab = 1 << k
    phi = np.asarray(phi, dtype=np.int8)
    if phi.shape != (n_ab, n_ab):
        raise ValueError(f"phi must be {n_ab}x{n_ab} for k={k}")
    B = n_ab
    tau = CycloNumber.inv_sqrt2_pow(k) * overall_sign
    N = model.fusion
    n = model.n
    values = {}
    for a in range(n):
        for b in range(n):
            for c in range(n):
                for d in range(n):
                    for u in model.outcomes(a, b):
                        if not N[u, c, d]:
                            continue
                        for v in model.outcomes(b, c):
                            if not N[a, v, d]:
                                continue
                            if a == b == c == d == B:
                                val = tau * int(phi[u, v])
                            elif a == c == B and b < B and d < B:
                                val = CycloNumber.from_int(int(phi[b, d]))
                            elif b == d == B and a < B and c < B:
                                val = CycloNumber.from_int(int(phi[a, c]))
                            else:
                                val = ONE
                            values[(a, b, c, d, u, v)] = val
    return FSymbols(model, overall_sign, phi, values, bicharacter)


def build_f_symbols(model: AnyonModel, b: Bicharacter, overall_sign: int) -> FSymbols:
    if model.k != b.k:
        raise ValueError(f"bicharacter level {b.k} does not match model level {model.k}")
    if not b.is_valid():
        raise ValueError("bicharacter matrix must be symmetric and invertible")
    return f_symbols_from_phi(model, phi_from_bicharacter(b), overall_sign, b)


def all_f_symbols(model: AnyonModel) -> list[FSymbols]:
    """Every (bicharacter, sign) solution; index = 2 * bicharacter_index + (sign == -1)."""
    return [build_f_symbols(model, b, s) for b in enumerate_bicharacters(model.k) for s in (1, -1)]


# ---------------------------------------------------------------------------
# pentagon
# ---------------------------------------------------------------------------

PENTAGON_LABELS = ("1", "2", "3", "4", "5", "a", "b", "c", "d")


@dataclass
class PentagonReport:
    instances_total: int
    instances_checked: int
    instances_skipped: int
    violation_count: int
    violations: list = field(default_factory=list)
    backend: str = ""

    @property
    def passed(self) -> bool:
        return self.violation_count == 0

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "instances_total": self.instances_total,
            "instances_checked": self.instances_checked,
            "instances_skipped": self.instances_skipped,
            "violation_count": self.violation_count,
            "violations": self.violations,
        }


def pentagon_instances(model: AnyonModel) -> np.ndarray:
    """Label tuples (1,2,3,4,5,a,b,c,d) where both fusion trees are admissible."""
    n = model.n
    N = model.fusion
    out = [[x1, x2, x3, x4, x5, a, b, c, d]
           for x1 in range(n) for x2 in range(n) for a in model.outcomes(x1, x2)
           for x3 in range(n) for b in model.outcomes(a, x3)
           for x4 in range(n) for x5 in model.outcomes(b, x4)
           for c in model.outcomes(x3, x4) for d in model.outcomes(x2, c)
           if N[x1, d, x5]]
    return np.array(out, dtype=np.int64).reshape(-1, 9)


def _pentagon_sides_exact(f: FSymbols, inst):
    x1, x2, x3, x4, x5, a, b, c, d = (int(t) for t in inst)
    lhs = f(x1, x2, c, x5, a, d) * f(a, x3, x4, x5, b, c)
    rhs = ZERO
    for e in range(f.model.n):
        t = f(x1, x2, x3, b, a, e)
        if not t:
            continue
        rhs = rhs + f(x2, x3, x4, d, e, c) * f(x1, e, x4, x5, b, d) * t
    return lhs, rhs


def _pentagon_chunk_kernel(table, e0, n, inst):
    def flat(a, b, c, d, u, v):
        return (((((a * n + b) * n + c) * n + d) * n + u) * n + v)

    x1, x2, x3, x4, x5, a, b, c, d = inst.T
    lhs_idx = np.stack([flat(x1, x2, c, x5, a, d), flat(a, x3, x4, x5, b, c)], axis=1)
    e = np.arange(n)
    rhs_idx = np.stack([
        flat(x2[:, None], x3[:, None], x4[:, None], d[:, None], e[None, :], c[:, None]),
        flat(x1[:, None], e[None, :], x4[:, None], x5[:, None], b[:, None], d[:, None]),
        flat(x1[:, None], x2[:, None], x3[:, None], b[:, None], a[:, None], e[None, :]),
    ], axis=2)
    # drop terms that vanish by fusion (any factor zero in the table)
    nz = np.any(table != 0, axis=1)
    present = nz[rhs_idx].all(axis=2)
    rhs_idx = np.where(present[..., None], rhs_idx, -1)
    # lhs has exponent 2*e0, rhs 3*e0: scale lhs by sqrt(2)^e0
    lhs_scale = np.array(CycloNumber.inv_sqrt2_pow(e0).inv().coeffs, dtype=np.int64)
    one = np.array(ONE.coeffs, dtype=np.int64)
    return kernels.eval_equations(table, lhs_idx, lhs_scale, rhs_idx, one)


def _kernel_worker(args):
    table, e0, n, inst = args
    return _pentagon_chunk_kernel(table, e0, n, inst)


def verify_pentagon(f: FSymbols, backend: str = "kernel", jobs: int = 1,
                    max_reported: int = 100) -> PentagonReport:
    """Check every admissible pentagon instance exactly.

    ``backend="kernel"`` evaluates on an integer table (numba or numpy);
    ``backend="python"`` uses :class:`CycloNumber` throughout.
    """
    model = f.model
    n = model.n
    inst = pentagon_instances(model)
    total = n ** 9
    if backend == "python":
        bad = np.array([lhs != rhs for lhs, rhs in (_pentagon_sides_exact(f, row) for row in inst)],
                       dtype=bool).reshape(-1)
    elif backend == "kernel":
        table, e0 = f.dense()
        if jobs > 1 and len(inst) > 1:
            chunks = np.array_split(inst, jobs)
            with ProcessPoolExecutor(jobs) as ex:
                parts = list(ex.map(_kernel_worker, [(table, e0, n, ch) for ch in chunks]))
            bad = np.concatenate(parts)
        else:
            bad = _pentagon_chunk_kernel(table, e0, n, inst)
    else:
        raise ValueError(f"unknown backend {backend!r}")
    viol = []
    for row in inst[bad][:max_reported]:
        lhs, rhs = _pentagon_sides_exact(f, row)
        viol.append({"labels": dict(zip(PENTAGON_LABELS, (model.charges[int(t)] for t in row))),
                     "lhs": lhs.to_json(), "rhs": rhs.to_json()})
    return PentagonReport(total, len(inst), total - len(inst), int(bad.sum()), viol, backend)
