"""Symmetries (twists) of k stacked toric codes.

A charge is a 2k-bit vector with bit ``2i`` = x_i (e_i) and bit ``2i+1`` =
z_i (m_i), layers counted from 0.  A symmetry is an F_2-linear map that
preserves the mutual-braiding form lambda and the self-statistics theta.
Maps are stored packed in one int: byte ``j`` holds the image of basis
vector ``j``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import f2, kernels
from .fsymbols import IntegrityError

MAX_K = 3


def e(i: int) -> int:
    return 1 << (2 * i)


def m(i: int) -> int:
    return 1 << (2 * i + 1)


def eps(i: int) -> int:
    return e(i) | m(i)


def _swap_xz(a, k: int):
    lo = sum(e(i) for i in range(k))
    return ((a & lo) << 1) | ((a >> 1) & lo)


def monodromy(a: int, b: int, k: int) -> int:
    """lambda(a, b): 1 iff a and b braid nontrivially."""
    return f2.parity(a & _swap_xz(b, k))


def theta(a: int, k: int) -> int:
    """1 for fermions, 0 for bosons."""
    lo = sum(e(i) for i in range(k))
    return f2.parity(a & (a >> 1) & lo)


def pack(images) -> int:
    return sum(int(v) << (8 * j) for j, v in enumerate(images))


def unpack(packed: int, k: int) -> list[int]:
    return [(packed >> (8 * j)) & 0xFF for j in range(2 * k)]


def identity_packed(k: int) -> int:
    return pack([1 << j for j in range(2 * k)])


def preserves_forms(images, k: int) -> bool:
    n = 2 * k
    for i in range(n):
        if theta(images[i], k) != theta(1 << i, k):
            return False
        for j in range(i + 1, n):
            if monodromy(images[i], images[j], k) != monodromy(1 << i, 1 << j, k):
                return False
    return f2.rank(np.array([f2.bits(v, n) for v in images]).T) == n


@dataclass(frozen=True)
class SymmetryMap:
    packed: int
    k: int
    name: str = field(default="", compare=False)

    @classmethod
    def from_images(cls, images, k: int, name: str = "") -> SymmetryMap:
        return cls(pack(images), k, name)

    @classmethod
    def from_matrix(cls, mat, name: str = "") -> SymmetryMap:
        mat = f2.as_f2(mat)
        k = mat.shape[0] // 2
        return cls.from_images([f2.from_bits(mat[:, j]) for j in range(2 * k)], k, name)

    @classmethod
    def identity(cls, k: int) -> SymmetryMap:
        return cls(identity_packed(k), k, "id")

    @property
    def images(self) -> list[int]:
        return unpack(self.packed, self.k)

    def matrix(self) -> np.ndarray:
        return np.array([f2.bits(v, 2 * self.k) for v in self.images], dtype=np.uint8).T.copy()

    def __call__(self, a: int) -> int:
        out = 0
        for j, img in enumerate(self.images):
            if (a >> j) & 1:
                out ^= img
        return out

    def compose(self, other: SymmetryMap) -> SymmetryMap:
        """self o other."""
        return SymmetryMap(pack([self(v) for v in other.images]), self.k)

    def __matmul__(self, other):
        return self.compose(other)

    def inverse(self) -> SymmetryMap:
        return SymmetryMap.from_matrix(f2.inverse(self.matrix()))

    @property
    def is_identity(self) -> bool:
        return self.packed == identity_packed(self.k)

    def is_valid(self) -> bool:
        return preserves_forms(self.images, self.k)

    def to_json(self):
        d = {"matrix": self.matrix().tolist(), "images": self.images}
        if self.name:
            d["name"] = self.name
        return d


# ---------------------------------------------------------------------------
# generators and closure
# ---------------------------------------------------------------------------

def generators(k: int, families=(1, 2, 3)) -> list[SymmetryMap]:
    if k < 1:
        raise ValueError("k must be at least 1")
    out = []
    base = [1 << j for j in range(2 * k)]
    if 1 in families:
        for i in range(k):
            img = list(base)
            img[2 * i], img[2 * i + 1] = m(i), e(i)
            out.append(SymmetryMap.from_images(img, k, f"e{i + 1}<->m{i + 1}"))
    if 2 in families:
        for i in range(k):
            for j in range(i + 1, k):
                img = list(base)
                img[2 * i], img[2 * j] = e(j), e(i)
                img[2 * i + 1], img[2 * j + 1] = m(j), m(i)
                out.append(SymmetryMap.from_images(img, k, f"swap{i + 1}{j + 1}"))
    if 3 in families:
        for i in range(k):
            for j in range(k):
                if i == j:
                    continue
                img = list(base)
                img[2 * i] = e(i) | e(j)
                img[2 * j + 1] = m(i) | m(j)
                out.append(SymmetryMap.from_images(img, k, f"cnot{i + 1}{j + 1}"))
    for g in out:
        if not g.is_valid():
            raise IntegrityError(f"generator {g.name} breaks the braiding forms")
    return out


def _closure(gens_packed, k: int) -> np.ndarray:
    n = 2 * k
    ident = identity_packed(k)
    seen = {ident}
    frontier = np.array([ident], dtype=np.int64)
    gens = np.asarray(gens_packed, dtype=np.int64)
    while frontier.size:
        prod = kernels.compose_packed(gens[:, None], frontier[None, :], n).ravel()
        new = []
        for x in np.unique(prod).tolist():
            if x not in seen:
                seen.add(x)
                new.append(x)
        frontier = np.array(new, dtype=np.int64)
    return np.array(sorted(seen), dtype=np.int64)


def _forms_ok_vectorized(packed: np.ndarray, k: int) -> np.ndarray:
    n = 2 * k
    imgs = (packed[:, None] >> (8 * np.arange(n))) & 0xFF
    lo = sum(e(i) for i in range(k))

    def par(x):
        x = x.copy()
        out = np.zeros_like(x)
        while x.any():
            out ^= x & 1
            x >>= 1
        return out

    ok = np.ones(len(packed), dtype=bool)
    for i in range(n):
        ok &= par(imgs[:, i] & (imgs[:, i] >> 1) & lo) == theta(1 << i, k)
        swapped = ((imgs[:, i] & lo) << 1) | ((imgs[:, i] >> 1) & lo)
        for j in range(i + 1, n):
            ok &= par(imgs[:, j] & swapped) == monodromy(1 << j, 1 << i, k)
    return ok


def generate_group(k: int, families=(1, 2, 3)) -> list[SymmetryMap]:
    """Closure of the generator families, sorted by packed value."""
    if k > MAX_K:
        raise ValueError(f"k={k} is too large; group closure supports k <= {MAX_K}")
    gens = [g.packed for g in generators(k, families)]
    elems = _closure(gens, k)
    if not _forms_ok_vectorized(elems, k).all():
        raise IntegrityError("closure contains a map that breaks the braiding forms")
    return [SymmetryMap(int(p), k) for p in elems]


def group_order_formula(k: int) -> int:
    """|O+(2k, 2)| = 2 q^{k(k-1)} (q^k - 1) prod_{i<k} (q^{2i} - 1), q = 2."""
    return 2 * 2 ** (k * (k - 1)) * (2 ** k - 1) * math.prod(4 ** i - 1 for i in range(1, k))


def enumerate_all_form_preserving(k: int) -> np.ndarray:
    """Every invertible map preserving lambda and theta, by backtracking over basis images."""
    if k > MAX_K:
        raise ValueError(f"k={k} is too large")
    n = 2 * k
    size = 1 << n
    th = [theta(v, k) for v in range(size)]
    lam = [[monodromy(a, b, k) for b in range(size)] for a in range(size)]
    out = []

    def rec(imgs, span):
        j = len(imgs)
        if j == n:
            out.append(pack(imgs))
            return
        tj = th[1 << j]
        want = [lam[1 << i][1 << j] for i in range(j)]
        for v in range(1, size):
            if (span >> v) & 1 or th[v] != tj:
                continue
            if any(lam[imgs[i]][v] != want[i] for i in range(j)):
                continue
            new_span = span
            s = span
            while s:
                low = s & -s
                u = low.bit_length() - 1
                new_span |= 1 << (u ^ v)
                s ^= low
            rec(imgs + [v], new_span)

    rec([], 1)
    return np.array(sorted(out), dtype=np.int64)


# ---------------------------------------------------------------------------
# conjugacy classes
# ---------------------------------------------------------------------------

@dataclass
class ConjugacyClass:
    index: int
    elements: list

    @property
    def size(self) -> int:
        return len(self.elements)

    @property
    def representative(self) -> SymmetryMap:
        return self.elements[0]


def _generating_subset(packed: np.ndarray, k: int):
    gens = []
    covered = {identity_packed(k)}
    for p in packed.tolist():
        if p not in covered:
            gens.append(p)
            covered = set(_closure(gens, k).tolist())
    return gens, covered


def conjugacy_classes(group) -> list[ConjugacyClass]:
    """Orbits of g -> h g h^-1, sorted by (size, smallest packed element)."""
    group = list(group)
    if not group:
        raise ValueError("empty group")
    k = group[0].k
    n = 2 * k
    packed = np.array(sorted(g.packed for g in group), dtype=np.int64)
    members = set(packed.tolist())
    if identity_packed(k) not in members:
        raise ValueError("input is not a group: identity missing")
    gens, closure = _generating_subset(packed, k)
    if closure != members:
        raise ValueError("input is not closed under composition")
    g_arr = np.array(gens, dtype=np.int64)
    g_inv = np.array([SymmetryMap(p, k).inverse().packed for p in gens], dtype=np.int64)
    unassigned = set(members)
    classes = []
    for seed in packed.tolist():
        if seed not in unassigned:
            continue
        orbit = {seed}
        frontier = np.array([seed], dtype=np.int64)
        while frontier.size:
            left = kernels.compose_packed(g_arr[:, None], frontier[None, :], n)
            conj = kernels.compose_packed(left, g_inv[:, None], n).ravel()
            new = [x for x in np.unique(conj).tolist() if x not in orbit]
            orbit.update(new)
            frontier = np.array(new, dtype=np.int64)
        unassigned -= orbit
        classes.append(sorted(orbit))
    classes.sort(key=lambda c: (len(c), c[0]))
    return [ConjugacyClass(i, [SymmetryMap(p, k) for p in c]) for i, c in enumerate(classes)]


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

def localisable_charges(s: SymmetryMap) -> tuple:
    """The subgroup {a + S(a)}, sorted."""
    lset = sorted({a ^ s(a) for a in range(1 << (2 * s.k))})
    members = set(lset)
    if any((a ^ b) not in members for a in lset for b in lset):
        raise IntegrityError("localisable set is not closed under fusion")
    return tuple(lset)


@dataclass
class TwistClassification:
    symmetry: SymmetryMap
    self_inverse: bool
    localisable: tuple
    localisable_invariant: bool
    level: int | None
    boson_count: int
    fermion_count: int
    conjugacy_class_id: int | None = None

    @property
    def letter(self) -> str | None:
        return signature_letter(self)

    def to_json(self, labels: bool = False):
        k = self.symmetry.k
        d = {"symmetry": self.symmetry.to_json(), "self_inverse": self.self_inverse,
             "localisable": list(self.localisable),
             "localisable_invariant": self.localisable_invariant, "level": self.level,
             "boson_count": self.boson_count, "fermion_count": self.fermion_count,
             "conjugacy_class_id": self.conjugacy_class_id, "letter": self.letter}
        if labels and k == 2:
            d["localisable_labels"] = [colour_code_labels(a) for a in self.localisable]
        return d


def classify_twist(s: SymmetryMap, class_id: int | None = None) -> TwistClassification:
    k = s.k
    self_inverse = (s @ s).is_identity
    loc = localisable_charges(s)
    invariant = all(s(b) == b for b in loc)
    level = int(math.log2(len(loc))) if self_inverse and invariant else None
    fermions = sum(theta(b, k) for b in loc)
    return TwistClassification(s, self_inverse, loc, invariant, level,
                               len(loc) - fermions, fermions, class_id)


def signature_letter(c: TwistClassification) -> str | None:
    """Colour-code class letter by (level, boson census); None for the rest."""
    if c.level == 2 and c.fermion_count == 0:
        return "B"
    if c.level == 2 and c.boson_count == 2 and c.fermion_count == 2:
        return "C"
    if c.level == 1:
        return "G"
    return None


@dataclass
class ClassSummary:
    cls: ConjugacyClass
    classification: TwistClassification

    def to_json(self, labels: bool = False):
        d = self.classification.to_json(labels)
        d["size"] = self.cls.size
        return d


def classify_group(k: int) -> list[ClassSummary]:
    classes = conjugacy_classes(generate_group(k))
    out = []
    for c in classes:
        cl = [classify_twist(g, c.index) for g in c.elements]
        keys = {(x.self_inverse, x.localisable_invariant, x.level, x.boson_count) for x in cl}
        if len(keys) != 1:
            raise IntegrityError(f"class {c.index} is not homogeneous: {keys}")
        out.append(ClassSummary(c, cl[0]))
    return out


@dataclass
class TheoremReport:
    k: int
    elements_checked: int
    self_inverse_count: int
    counterexamples: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.counterexamples

    def to_json(self):
        return {"k": self.k, "passed": self.passed, "elements_checked": self.elements_checked,
                "self_inverse_count": self.self_inverse_count,
                "counterexamples": [g.to_json() for g in self.counterexamples]}


def verify_selfinverse_theorem(k: int) -> TheoremReport:
    """Localisable set pointwise invariant <=> S^2 = 1, over the whole group."""
    group = generate_group(k)
    bad = []
    n_inv = 0
    for s in group:
        c = classify_twist(s)
        n_inv += c.self_inverse
        if c.self_inverse != c.localisable_invariant:
            bad.append(s)
        if c.self_inverse:
            # S(a + S a) = S a + a
            if any(s(a ^ s(a)) != (s(a) ^ a) for a in range(1 << (2 * k))):
                bad.append(s)
    return TheoremReport(k, len(group), n_inv, bad)


# ---------------------------------------------------------------------------
# k = 2 colour-code dictionary
# ---------------------------------------------------------------------------

# rows r/g/b, columns x/y/z; the y column is x + z
_BOSONS = {
    "rx": e(0), "gx": e(1), "bx": e(0) | e(1),
    "rz": m(1), "gz": m(0), "bz": m(0) | m(1),
}
_BOSONS.update({c + "y": _BOSONS[c + "x"] ^ _BOSONS[c + "z"] for c in "rgb"})
_FERMIONS = {
    "eps1": eps(0), "eps2": eps(1),
    "e1*eps2": e(0) | eps(1), "eps1*e2": eps(0) | e(1),
    "m1*eps2": m(0) | eps(1), "eps1*m2": eps(0) | m(1),
}
_LABELS = {0: "1"}
_LABELS.update({v: name for name, v in _BOSONS.items()})
_LABELS.update({v: name for name, v in _FERMIONS.items()})
COLOUR_CODE_TABLE = [[r + c for c in "xyz"] for r in "rgb"]


def colour_code_labels(a: int, k: int = 2) -> str:
    if k != 2:
        raise ValueError("colour-code labels exist only for two layers")
    if not 0 <= a < 16:
        raise ValueError(f"{a} is not a two-layer charge")
    return _LABELS[a]


def colour_code_charge(label: str) -> int:
    for v, name in _LABELS.items():
        if name == label:
            return v
    raise KeyError(label)
