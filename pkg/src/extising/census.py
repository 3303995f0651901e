"""Trace changes under symmetry-preserving column permutations of phi matrices."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import permutations

import numpy as np

from . import kernels
from .fsymbols import enumerate_bicharacters, phi_from_bicharacter

MAX_ORDER = 8


@dataclass
class CensusReport:
    order: int
    matrices: int
    permutations_per_matrix: int
    symmetric_count: int
    delta_distribution: dict
    per_matrix: list = field(default_factory=list)

    @property
    def allowed(self) -> set[int]:
        return {0, self.order, -self.order}

    @property
    def passed(self) -> bool:
        return set(self.delta_distribution) <= self.allowed

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "passed": self.passed,
            "matrices": self.matrices,
            "permutations_per_matrix": self.permutations_per_matrix,
            "symmetric_count": self.symmetric_count,
            "delta_distribution": {str(d): c for d, c in sorted(self.delta_distribution.items())},
            "per_matrix": self.per_matrix,
        }


def all_permutations(n: int) -> np.ndarray:
    return np.array(list(permutations(range(n))), dtype=np.int64).reshape(-1, n)


def permuted_trace_delta(h: np.ndarray, perm) -> tuple[bool, int]:
    """(symmetric?, trace change) for the column permutation ``h[:, perm]``."""
    hp = np.asarray(h)[:, list(perm)]
    return bool(np.array_equal(hp, hp.T)), int(np.trace(hp)) - int(np.trace(h))


def symmetric_column_permutation_census(order: int) -> CensusReport:
    """Exhaustive census over all order! column permutations of every phi."""
    if order not in (2, 4, 8):
        raise ValueError(f"order must be 2, 4 or {MAX_ORDER}; {order}! permutations is out of reach"
                         if order > MAX_ORDER else "order must be a power of two <= 8")
    k = order.bit_length() - 1
    perms = all_permutations(order)
    dist: Counter = Counter()
    per = []
    sym_total = 0
    for idx, b in enumerate(enumerate_bicharacters(k)):
        h = phi_from_bicharacter(b).astype(np.int64)
        sym, tr = kernels.perm_census(h, perms)
        deltas = tr[sym] - int(np.trace(h))
        c = Counter(int(d) for d in deltas)
        dist.update(c)
        sym_total += int(sym.sum())
        per.append({"bicharacter": idx, "trace": int(np.trace(h)), "symmetric": int(sym.sum()),
                    "delta_distribution": {str(d): n for d, n in sorted(c.items())}})
    return CensusReport(order, len(per), len(perms), sym_total, dict(dist), per)
