"""Exact arithmetic in Z[zeta_16, 1/sqrt(2)].

A value is ``(sum_m c_m zeta^m) * 2**(-e/2)`` with ``zeta = exp(i*pi/8)`` and
``zeta**8 == -1``.  Coefficients are Python ints, so nothing overflows.
"""
from __future__ import annotations

import cmath
from typing import Iterable

ORDER = 16
DEGREE = 8

# sqrt(2) = zeta^2 - zeta^6
_SQRT2 = (0, 0, 1, 0, 0, 0, -1, 0)


def _poly_mul(a: tuple[int, ...], b: tuple[int, ...]) -> list[int]:
    out = [0] * DEGREE
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            if not y:
                continue
            m = i + j
            if m >= DEGREE:
                out[m - DEGREE] -= x * y
            else:
                out[m] += x * y
    return out


def _canonical(coeffs: list[int], e: int) -> tuple[tuple[int, ...], int]:
    if not any(coeffs):
        return (0,) * DEGREE, 0
    # minimal e such that value * sqrt(2)**e lies in Z[zeta]
    while e >= 2 and all(c % 2 == 0 for c in coeffs):
        coeffs = [c // 2 for c in coeffs]
        e -= 2
    if e >= 1:
        t = _poly_mul(tuple(coeffs), _SQRT2)
        if all(c % 2 == 0 for c in t):
            coeffs = [c // 2 for c in t]
            e -= 1
    return tuple(coeffs), e


class CycloNumber:
    """Immutable exact element of Z[zeta_16, 1/sqrt(2)] in canonical form."""

    __slots__ = ("_c", "_e", "_hash")

    def __init__(self, coeffs: Iterable[int] = (0,) * DEGREE, e: int = 0):
        coeffs = [int(c) for c in coeffs]
        if len(coeffs) != DEGREE:
            raise ValueError(f"need {DEGREE} coefficients, got {len(coeffs)}")
        if e < 0:
            raise ValueError("half-log denominator must be non-negative")
        self._c, self._e = _canonical(coeffs, int(e))
        self._hash = hash((self._c, self._e))

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self._c

    @property
    def e(self) -> int:
        return self._e

    @classmethod
    def from_int(cls, n: int) -> CycloNumber:
        return cls((n, 0, 0, 0, 0, 0, 0, 0))

    @classmethod
    def zeta(cls, m: int = 1) -> CycloNumber:
        """zeta**m for any integer m."""
        m %= ORDER
        c = [0] * DEGREE
        if m >= DEGREE:
            c[m - DEGREE] = -1
        else:
            c[m] = 1
        return cls(c)

    @classmethod
    def sqrt2(cls) -> CycloNumber:
        return cls(_SQRT2)

    @classmethod
    def inv_sqrt2_pow(cls, k: int) -> CycloNumber:
        """1 / sqrt(2**k)."""
        return cls((1, 0, 0, 0, 0, 0, 0, 0), k)

    @classmethod
    def coerce(cls, x) -> CycloNumber:
        if isinstance(x, CycloNumber):
            return x
        if isinstance(x, int):
            return cls.from_int(x)
        return NotImplemented

    # arithmetic -----------------------------------------------------------
    def _aligned(self, other: CycloNumber):
        a, b = list(self._c), list(other._c)
        e = max(self._e, other._e)
        for pos, d in ((0, e - self._e), (1, e - other._e)):
            v = a if pos == 0 else b
            if d % 2:
                v = _poly_mul(tuple(v), _SQRT2)
            v = [c << (d // 2) for c in v]
            if pos == 0:
                a = v
            else:
                b = v
        return a, b, e

    def __add__(self, other):
        other = CycloNumber.coerce(other)
        if other is NotImplemented:
            return other
        a, b, e = self._aligned(other)
        return CycloNumber([x + y for x, y in zip(a, b)], e)

    __radd__ = __add__

    def __neg__(self):
        return CycloNumber([-c for c in self._c], self._e)

    def __sub__(self, other):
        other = CycloNumber.coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = CycloNumber.coerce(other)
        if other is NotImplemented:
            return other
        return CycloNumber(_poly_mul(self._c, other._c), self._e + other._e)

    __rmul__ = __mul__

    def conj(self) -> CycloNumber:
        # zeta^m -> zeta^-m = -zeta^(8-m)
        c = [0] * DEGREE
        c[0] = self._c[0]
        for m in range(1, DEGREE):
            c[DEGREE - m] = -self._c[m]
        return CycloNumber(c, self._e)

    def galois(self, j: int) -> CycloNumber:
        """Apply the automorphism zeta -> zeta**j (j odd)."""
        if j % 2 == 0:
            raise ValueError("Galois automorphisms of Q(zeta_16) need odd j")
        out = [0] * DEGREE
        for m, c in enumerate(self._c):
            r = (m * j) % ORDER
            if r >= DEGREE:
                out[r - DEGREE] -= c
            else:
                out[r] += c
        # sigma_j(sqrt2) = +sqrt2 iff j = +-1 mod 8
        if self._e % 2 and j % 8 not in (1, 7):
            out = [-c for c in out]
        return CycloNumber(out, self._e)

    def norm(self) -> CycloNumber:
        """Product of all Galois conjugates (a rational number)."""
        out = CycloNumber.from_int(1)
        for j in range(1, ORDER, 2):
            out = out * self.galois(j)
        return out

    def inv(self) -> CycloNumber:
        """Exact inverse; raises ValueError when it leaves the ring."""
        if not self:
            raise ZeroDivisionError("inverse of zero")
        if self.is_unit_modulus():
            return self.conj()
        rest = CycloNumber.from_int(1)
        for j in range(3, ORDER, 2):
            rest = rest * self.galois(j)
        n = self * rest
        r = n.rational()
        if r is None:
            raise ArithmeticError("norm is not rational; internal error")
        num, e = r
        # n = num * 2^(-e/2) rational => e even
        if num == 0 or abs(num) & (abs(num) - 1):
            raise ValueError(f"{self!r} is not invertible in Z[zeta16, 1/2]")
        sign = 1 if num > 0 else -1
        p = abs(num).bit_length() - 1
        # 1/n = sign * 2^(e/2) / 2^p = sign * 2^((e - 2p)/2)
        shift = e - 2 * p
        scale = CycloNumber((sign, 0, 0, 0, 0, 0, 0, 0), 0)
        if shift >= 0:
            scale = scale * CycloNumber.from_int(1 << (shift // 2))
            if shift % 2:
                scale = scale * CycloNumber.sqrt2()
        else:
            scale = scale * CycloNumber.inv_sqrt2_pow(-shift)
        return rest * scale

    def __truediv__(self, other):
        other = CycloNumber.coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inv()

    def __pow__(self, n: int):
        if n < 0:
            return self.inv() ** (-n)
        out = CycloNumber.from_int(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # predicates -----------------------------------------------------------
    def __eq__(self, other):
        other = CycloNumber.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._c == other._c and self._e == other._e

    def __hash__(self):
        return self._hash

    def __bool__(self):
        return any(self._c)

    def abs2(self) -> CycloNumber:
        return self * self.conj()

    def is_unit_modulus(self) -> bool:
        return self.abs2() == 1

    def rational(self):
        """(num, e) when the value is the rational num * 2**(-e/2), else None."""
        if any(self._c[1:]) or self._e % 2:
            return None
        return self._c[0], self._e

    def root_index(self):
        """m with self == zeta**m, or None."""
        if self._e:
            return None
        nz = [m for m, c in enumerate(self._c) if c]
        if len(nz) != 1 or abs(self._c[nz[0]]) != 1:
            return None
        m = nz[0]
        return m if self._c[m] == 1 else m + DEGREE

    # display / io ---------------------------------------------------------
    def to_complex(self) -> complex:
        """Floating-point rendering for display only; never used in checks."""
        z = cmath.exp(1j * cmath.pi / 8)
        return sum(c * z**m for m, c in enumerate(self._c)) * 2 ** (-self._e / 2)

    def to_json(self) -> dict:
        return {"c": list(self._c), "e": self._e}

    @classmethod
    def from_json(cls, d: dict) -> CycloNumber:
        return cls(d["c"], d["e"])

    def __repr__(self):
        return f"CycloNumber({list(self._c)}, e={self._e})"

    def __str__(self):
        m = self.root_index()
        if m is not None:
            return {0: "1", 8: "-1", 4: "i", 12: "-i"}.get(m, f"zeta^{m}")
        z = self.to_complex()
        return f"~({z.real:.6g}{z.imag:+.6g}j)"


ZERO = CycloNumber()
ONE = CycloNumber.from_int(1)
I = CycloNumber.zeta(4)
