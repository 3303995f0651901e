"""Hexagon solutions (R-symbols) for the extended Ising models."""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import kernels
from .cyclo import ONE, ZERO, CycloNumber, I
from .fsymbols import FSymbols, IntegrityError, trace_class, verify_pentagon

HEXAGON_LABELS = ("1", "2", "3", "4", "a", "c")


class Statistics(enum.Enum):
    BOSON = "boson"
    FERMION = "fermion"


def statistics(i: int, phi) -> Statistics:
    return Statistics.BOSON if int(np.asarray(phi)[i, i]) == 1 else Statistics.FERMION


def base_phase_candidates(k: int) -> list[CycloNumber]:
    """Allowed R_{bb}^{a0}: even powers of zeta16 for even k, odd powers for odd k."""
    return [CycloNumber.zeta(2 * m + (k % 2)) for m in range(8)]


def sqrt_sign(s: int) -> CycloNumber:
    return ONE if s == 1 else I


@dataclass(eq=False)
class RSymbols:
    f: FSymbols
    beta_beta: tuple       # R_{bb}^{a_i}
    alpha_beta: tuple      # R_{a_i b}^b
    beta_alpha: tuple      # R_{b a_i}^b
    alpha_alpha: dict      # (i, j) -> R_{a_i a_j}^{a_i a_j}

    @property
    def model(self):
        return self.f.model

    @property
    def k(self) -> int:
        return self.f.k

    @property
    def base_phase(self) -> CycloNumber:
        return self.beta_beta[0]

    def __call__(self, a: int, b: int, c: int) -> CycloNumber:
        B = self.model.beta
        if a < B and b < B:
            return self.alpha_alpha[(a, b)] if c == a ^ b else ZERO
        if a < B and b == B:
            return self.alpha_beta[a] if c == B else ZERO
        if a == B and b < B:
            return self.beta_alpha[b] if c == B else ZERO
        return self.beta_beta[c] if c < B else ZERO

    def normalized_diagonal(self) -> list[CycloNumber]:
        r0 = self.base_phase.inv()
        return [x * r0 for x in self.beta_beta]

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "beta_beta": [x.to_json() for x in self.beta_beta],
            "alpha_beta": [x.to_json() for x in self.alpha_beta],
            "beta_alpha": [x.to_json() for x in self.beta_alpha],
            "alpha_alpha": [[i, j, v.to_json()] for (i, j), v in sorted(self.alpha_alpha.items())],
        }

    @classmethod
    def from_json(cls, d: dict, f: FSymbols) -> RSymbols:
        if d["k"] != f.k:
            raise ValueError("R-symbol file does not match F-symbol level")
        cj = CycloNumber.from_json
        return cls(f, tuple(map(cj, d["beta_beta"])), tuple(map(cj, d["alpha_beta"])),
                   tuple(map(cj, d["beta_alpha"])),
                   {(i, j): cj(v) for i, j, v in d["alpha_alpha"]})

    def save(self, path):
        Path(path).write_text(json.dumps(self.to_json()) + "\n")

    @classmethod
    def load(cls, path, f: FSymbols) -> RSymbols:
        return cls.from_json(json.loads(Path(path).read_text()), f)

    def same_values(self, other: RSymbols) -> bool:
        return (self.beta_beta == other.beta_beta and self.alpha_beta == other.alpha_beta
                and self.beta_alpha == other.beta_alpha and self.alpha_alpha == other.alpha_alpha)


def mirrored(r: RSymbols) -> RSymbols:
    """Reverse braiding: R'_{ab}^c = (R_{ba}^c)^-1."""
    B = r.model.beta
    n_ab = B
    return RSymbols(
        r.f,
        tuple(x.inv() for x in r.beta_beta),
        tuple(x.inv() for x in r.beta_alpha),
        tuple(x.inv() for x in r.alpha_beta),
        {(i, j): r.alpha_alpha[(j, i)].inv() for i in range(n_ab) for j in range(n_ab)},
    )


# ---------------------------------------------------------------------------
# hexagon
# ---------------------------------------------------------------------------

def hexagon_instances(model) -> np.ndarray:
    """Label tuples (1,2,3,4,a,c), beta-only instances first."""
    n, N = model.n, model.fusion
    rows = [[x1, x2, x3, x4, a, c]
            for x1 in range(n) for x2 in range(n) for a in model.outcomes(x1, x2)
            for x3 in range(n) for x4 in model.outcomes(a, x3)
            for c in model.outcomes(x1, x3) if N[x2, c, x4]]
    B = model.beta
    rows.sort(key=lambda t: -sum(x == B for x in t[:4]))
    return np.array(rows, dtype=np.int64).reshape(-1, 6)


def _hexagon_sides_exact(r: RSymbols, inst):
    f = r.f
    x1, x2, x3, x4, a, c = (int(t) for t in inst)
    lhs = r(x1, x3, c) * f(x2, x1, x3, x4, a, c) * r(x1, x2, a)
    rhs = ZERO
    for b in range(f.model.n):
        t = f(x1, x2, x3, x4, a, b)
        if t:
            rhs = rhs + f(x2, x3, x1, x4, b, c) * r(x1, b, x4) * t
    return lhs, rhs


class _HexagonPlan:
    """Index arrays for evaluating all hexagon instances on the int kernel."""

    def __init__(self, f: FSymbols):
        model = f.model
        n = model.n
        self.n = n
        self.inst = hexagon_instances(model)
        table, e0 = f.dense()
        x1, x2, x3, x4, a, c = self.inst.T

        def fl(p, q, s, t, u, v):
            return (((((p * n + q) * n + s) * n + t) * n + u) * n + v)

        def rl(p, q, s):
            return (p * n + q) * n + s

        b = np.arange(n)[None, :]
        f_lhs = fl(x2, x1, x3, x4, a, c)
        f_r1 = fl(x2[:, None], x3[:, None], x1[:, None], x4[:, None], b, c[:, None])
        f_r2 = fl(x1[:, None], x2[:, None], x3[:, None], x4[:, None], a[:, None], b)
        used, inv = np.unique(np.concatenate([f_lhs.ravel(), f_r1.ravel(), f_r2.ravel()]),
                              return_inverse=True)
        self.f_values = table[used]
        nf = len(used)
        inv_lhs = inv[:f_lhs.size].reshape(f_lhs.shape)
        inv_r1 = inv[f_lhs.size:f_lhs.size + f_r1.size].reshape(f_r1.shape)
        inv_r2 = inv[f_lhs.size + f_r1.size:].reshape(f_r2.shape)
        self.lhs_idx = np.stack([nf + rl(x1, x3, c), inv_lhs, nf + rl(x1, x2, a)], axis=1)
        rhs = np.stack([inv_r1, nf + rl(x1[:, None], b, x4[:, None]), inv_r2], axis=2)
        nz = np.any(self.f_values != 0, axis=1)
        present = nz[inv_r1] & nz[inv_r2]
        self.rhs_idx = np.where(present[..., None], rhs, -1)
        self.lhs_scale = np.array(CycloNumber.inv_sqrt2_pow(e0).inv().coeffs, dtype=np.int64)
        self.rhs_scale = np.array(ONE.coeffs, dtype=np.int64)

    def r_table(self, r: RSymbols) -> np.ndarray:
        n = self.n
        t = np.zeros((n ** 3, 8), dtype=np.int64)
        for p in range(n):
            for q in range(n):
                for s in range(n):
                    v = r(p, q, s)
                    if v:
                        if v.e:
                            raise IntegrityError("R-symbol with a dyadic denominator")
                        t[(p * n + q) * n + s] = v.coeffs
        return t

    def check(self, r: RSymbols, early_exit=False) -> np.ndarray:
        values = np.concatenate([self.f_values, self.r_table(r)])
        return kernels.eval_equations(values, self.lhs_idx, self.lhs_scale, self.rhs_idx,
                                      self.rhs_scale, early_exit)


_PLANS: dict = {}


def _plan(f: FSymbols) -> _HexagonPlan:
    key = id(f)
    p = _PLANS.get(key)
    if p is None or p[0] is not f:
        _PLANS.clear()
        p = (f, _HexagonPlan(f))
        _PLANS[key] = p
    return p[1]


@dataclass
class HexagonReport:
    instances_checked: int
    violation_count: int
    violations: list = field(default_factory=list)
    mirror: bool = False

    @property
    def passed(self) -> bool:
        return self.violation_count == 0

    def to_json(self):
        return {"passed": self.passed, "mirror": self.mirror,
                "instances_checked": self.instances_checked,
                "violation_count": self.violation_count, "violations": self.violations}


def verify_hexagon(r: RSymbols, mirror: bool = False, backend: str = "kernel",
                   max_reported: int = 20) -> HexagonReport:
    rr = mirrored(r) if mirror else r
    if backend == "kernel":
        plan = _plan(r.f)
        inst = plan.inst
        bad = plan.check(rr)
    elif backend == "python":
        inst = hexagon_instances(r.model)
        bad = np.array([lhs != rhs for lhs, rhs in (_hexagon_sides_exact(rr, t) for t in inst)],
                       dtype=bool).reshape(-1)
    else:
        raise ValueError(f"unknown backend {backend!r}")
    viol = []
    for row in inst[bad][:max_reported]:
        lhs, rhs = _hexagon_sides_exact(rr, row)
        viol.append({"labels": dict(zip(HEXAGON_LABELS, (r.model.charges[int(t)] for t in row))),
                     "lhs": lhs.to_json(), "rhs": rhs.to_json()})
    return HexagonReport(len(inst), int(bad.sum()), viol, mirror)


class _Derivation:
    """Candidate-independent pieces of the R-symbol derivation."""

    def __init__(self, f: FSymbols):
        B = f.model.beta
        self.f = f
        self.n_ab = n_ab = B
        aa = {}
        for i in range(n_ab):
            for j in range(n_ab):
                den = f(j, i, B, B, i ^ j, B)
                aa[(i, j)] = f(j, B, i, B, B, B) * f(i, j, B, B, i ^ j, B) / den
        self.alpha_alpha = aa
        F = f.matrix()
        self.col0 = [F[u][0] for u in range(n_ab)]
        self.fdag = [[F[u][b].conj() for u in range(n_ab)] for b in range(n_ab)]
        self.inv_col0 = [x.inv() if x else None for x in self.col0]
        self.sqrt_phi = [sqrt_sign(int(f.phi[i, i])) for i in range(n_ab)]

    def candidate(self, base: CycloNumber, signs) -> RSymbols | None:
        n_ab = self.n_ab
        bb = tuple(base * self.sqrt_phi[i] * signs[i] for i in range(n_ab))
        y = [bb[0] * self.col0[u] * bb[u] for u in range(n_ab)]
        ba = []
        for b in range(n_ab):
            if self.inv_col0[b] is None:
                return None
            w = ZERO
            for u in range(n_ab):
                w = w + self.fdag[b][u] * y[u]
            rb = w * self.inv_col0[b]
            if not rb.is_unit_modulus():
                return None
            ba.append(rb)
        if ba[0] != ONE:
            return None
        return RSymbols(self.f, bb, tuple(ba), tuple(ba), dict(self.alpha_alpha))


def derive_candidate(f: FSymbols, base: CycloNumber, signs) -> RSymbols | None:
    """Fill in all R-symbols from a trial diagonal R_{bb}; None if inconsistent.

    ``signs[i]`` picks the branch of R_{bb}^{a_i} = +-sqrt(phi_ii) R_{bb}^{a_0}.
    The remaining entries are solved from hexagon instances in which they
    appear linearly:

    * R_{a_i a_j} from (1,2,3,4,a,c) = (a_i, a_j, b, b, a_i a_j, b), where
      R_{a_i b} cancels;
    * R_{b a_j} from the all-beta instances with c = a_0, a linear system
      with matrix F_{bbb}^b (unitary, so inverted by its adjoint);
    * R_{a_i b} is only fixed up to sign by the forward hexagon; it is set
      equal to R_{b a_i}, the unique choice compatible with the reversed
      braiding.
    """
    return _Derivation(f).candidate(base, signs)


def solve_r(f: FSymbols, check_pentagon: bool = True) -> list[RSymbols]:
    """All R-symbol solutions of the forward hexagon for the given F-data.

    Brute force over the 8 base phases for the parity of k and all
    2**(2**k - 1) sign vectors of the remaining diagonal entries.
    """
    if check_pentagon and not verify_pentagon(f).passed:
        raise ValueError("F-symbols fail the pentagon equation; refusing to solve the hexagon")
    k = f.k
    n_ab = 1 << k
    plan = _plan(f)
    der = _Derivation(f)
    out = []
    for base in base_phase_candidates(k):
        for mask in range(1 << (n_ab - 1)):
            signs = [1] + [(-1 if (mask >> (i - 1)) & 1 else 1) for i in range(1, n_ab)]
            r = der.candidate(base, signs)
            if r is None:
                continue
            if not plan.check(r, early_exit=True).any():
                out.append(r)
    return out


def trace_constraint_holds(r: RSymbols) -> bool:
    """sign(F) * R_{bb}^{a0} * Tr(R_bb) / sqrt(2^k) == 1."""
    tr = sum(r.beta_beta, ZERO)
    return r.f.overall_sign * r.base_phase * tr * CycloNumber.inv_sqrt2_pow(r.k) == ONE


# ---------------------------------------------------------------------------
# census of the normalised diagonal
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RCensus:
    n_plus_one: int
    n_minus_one: int
    n_plus_i: int
    n_minus_i: int
    rotation: int = 0   # power of i applied after dividing by R_{bb}^{a0}

    def as_tuple(self):
        return (self.n_plus_one, self.n_minus_one, self.n_plus_i, self.n_minus_i)

    def to_json(self):
        return {"+1": self.n_plus_one, "-1": self.n_minus_one, "+i": self.n_plus_i,
                "-i": self.n_minus_i, "rotation": self.rotation}


_QUARTER = {0: 0, 8: 1, 4: 2, 12: 3}  # zeta power -> slot (+1, -1, +i, -i)


def _counts(diag) -> tuple:
    c = [0, 0, 0, 0]
    for x in diag:
        m = x.root_index()
        if m not in _QUARTER:
            raise IntegrityError(f"normalised R entry {x} is not in {{+-1, +-i}}")
        c[_QUARTER[m]] += 1
    return tuple(c)


def census(r: RSymbols) -> RCensus:
    """Counts of +1, -1, +i, -i on the diagonal of R_bb up to global phase.

    Divides by R_{bb}^{a0}, then multiplies by the power of i that maximises
    (#+1, #+i); no rotation is preferred on ties.
    """
    diag = r.normalized_diagonal()
    best = None
    for rot in range(4):
        ph = CycloNumber.zeta(4 * rot)
        c = _counts([x * ph for x in diag])
        key = (c[0], c[2], -rot)
        if best is None or key > best[0]:
            best = (key, c, rot)
    _, c, rot = best
    return RCensus(*c, rotation=rot)


def table_row(k: int, trace: int) -> tuple:
    """Expected (#+1, #-1, #+i, #-i) for level k and Tr(phi) (header signs +)."""
    h = Fraction(2) ** (k - 2)
    if k % 2 == 0:
        s = Fraction(2) ** (Fraction(k, 2) - 1)
        if trace == 2 ** k:
            big = Fraction(2) ** (k - 1)
            row = (big + s, big - s, 0, 0)
        elif trace == 0:
            row = (h + s, h - s, h, h)
        else:
            raise IntegrityError(f"no table row for even k and trace {trace}")
    else:
        if trace != 0:
            raise IntegrityError(f"no table row for odd k and trace {trace}")
        s = Fraction(2) ** Fraction(k - 3, 2)
        row = (h + s, h - s, h + s, h - s)
    for x in row:
        if x.denominator != 1:
            raise IntegrityError("non-integral table entry")
    return tuple(int(x) for x in row)


def census_matches_table(r: RSymbols) -> bool:
    return census(r).as_tuple() == table_row(r.k, trace_class(r.f.phi))


def sum_of_squares_solutions(k: int) -> list[tuple[int, int]]:
    """Brute force: all integer (a, b), |a|, |b| <= 2**ceil(k/2), with a^2 + b^2 = 2^k."""
    lim = 1 << ((k + 1) // 2)
    v = np.arange(-lim, lim + 1, dtype=np.int64)
    sq = v * v
    hit = np.argwhere(sq[:, None] + sq[None, :] == (1 << k))
    return sorted((int(v[i]), int(v[j])) for i, j in hit)


def sum_of_squares_characterization(k: int) -> list[tuple[int, int]]:
    if k % 2 == 0:
        t = 1 << (k // 2)
        return sorted([(t, 0), (-t, 0), (0, t), (0, -t)])
    t = 1 << ((k - 1) // 2)
    return sorted((sa * t, sb * t) for sa in (1, -1) for sb in (1, -1))


def sum_of_squares_check(k: int) -> list[tuple[int, int]]:
    if not 1 <= k <= 20:
        raise ValueError("k must be in 1..20")
    found = sum_of_squares_solutions(k)
    if found != sum_of_squares_characterization(k):
        raise IntegrityError(f"a^2 + b^2 = 2^{k}: brute force {found} disagrees")
    return found
