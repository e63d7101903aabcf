"""Elements u + v*sqrt(d) of a quadratic field, with exact rational parts."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Sequence, Union

import sympy

from .arith import is_squarefree

Scalar = Union[int, Fraction, "QuadElem"]


class MixedFields(ValueError):
    pass


class NotSquarefree(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class QuadElem:
    u: Fraction
    v: Fraction
    d: int

    def __post_init__(self):
        object.__setattr__(self, "u", Fraction(self.u))
        object.__setattr__(self, "v", Fraction(self.v))

    @classmethod
    def checked(cls, u, v, d: int) -> "QuadElem":
        if d in (0, 1) or not is_squarefree(d):
            raise NotSquarefree(f"{d} is not a squarefree non-unit")
        return cls(u, v, d)

    def _coerce(self, other) -> "QuadElem":
        if isinstance(other, QuadElem):
            if other.d != self.d:
                raise MixedFields(f"sqrt({self.d}) vs sqrt({other.d})")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadElem(Fraction(other), Fraction(0), self.d)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadElem(self.u + o.u, self.v + o.v, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadElem(-self.u, -self.v, self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadElem(self.u - o.u, self.v - o.v, self.d)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadElem(
            self.u * o.u + self.d * self.v * o.v, self.u * o.v + self.v * o.u, self.d
        )

    __rmul__ = __mul__

    def conjugate(self) -> "QuadElem":
        return QuadElem(self.u, -self.v, self.d)

    def norm(self) -> Fraction:
        return self.u * self.u - self.d * self.v * self.v

    def inverse(self) -> "QuadElem":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of 0 in quadratic field")
        return QuadElem(self.u / n, -self.v / n, self.d)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = QuadElem(Fraction(1), Fraction(0), self.d)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def is_rational(self) -> bool:
        return self.v == 0

    def __eq__(self, other):
        if isinstance(other, QuadElem):
            if self.v == 0 and other.v == 0:
                return self.u == other.u
            return self.d == other.d and self.u == other.u and self.v == other.v
        if isinstance(other, (int, Fraction)):
            return self.v == 0 and self.u == other
        return NotImplemented

    def __hash__(self):
        if self.v == 0:
            return hash(self.u)
        return hash((self.u, self.v, self.d))

    def __bool__(self):
        return self.u != 0 or self.v != 0

    def __repr__(self):
        if self.v == 0:
            return f"{self.u}"
        return f"({self.u} + {self.v}*sqrt({self.d}))"


def _rational_sqrt(x: Fraction) -> Fraction | None:
    if x < 0:
        return None
    n, m = isqrt(x.numerator), isqrt(x.denominator)
    if n * n == x.numerator and m * m == x.denominator:
        return Fraction(n, m)
    return None


def sqrt_in_field(z, d: int | None):
    """A square root of ``z`` in Q (d is None) or Q(sqrt d), or None."""
    if d is None:
        return _rational_sqrt(Fraction(z))
    if not isinstance(z, QuadElem):
        z = QuadElem(Fraction(z), Fraction(0), d)
    if z.v == 0:
        s = _rational_sqrt(z.u)
        if s is not None:
            return QuadElem(s, 0, d)
        t = _rational_sqrt(z.u / d)
        if t is not None:
            return QuadElem(0, t, d)
        return None
    n = _rational_sqrt(z.norm())
    if n is None:
        return None
    for sign in (1, -1):
        s = _rational_sqrt((z.u + sign * n) / 2)
        if s:
            cand = QuadElem(s, z.v / (2 * s), d)
            if cand * cand == z:
                return cand
    return None


def _to_sympy_poly(coeffs: Sequence[Fraction], x):
    return sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in coeffs], x, domain="QQ")


def _poly_eval(coeffs, z):
    acc = 0
    for c in coeffs:
        acc = acc * z + c
    return acc


def rational_factors(coeffs: Sequence[Fraction]) -> list[list[Fraction]]:
    """Irreducible factors over Q of degree <= 2 (coefficients highest first)."""
    x = sympy.Symbol("x")
    _, facs = _to_sympy_poly([Fraction(c) for c in coeffs], x).factor_list()
    out = []
    for f, _ in facs:
        if f.degree() <= 2:
            out.append([Fraction(int(c.p), int(c.q)) for c in f.all_coeffs()])
    return out


def roots_in_field(coeffs: Sequence, d: int | None) -> list:
    """Distinct roots in Q or Q(sqrt d) of a polynomial with coefficients there.

    Coefficients are listed highest degree first.  When a coefficient is
    irrational the norm polynomial f * conj(f) is factored over Q instead.
    """
    coeffs = list(coeffs)
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
    irrational = any(isinstance(c, QuadElem) and c.v != 0 for c in coeffs)
    if irrational:
        q = [c if isinstance(c, QuadElem) else QuadElem(Fraction(c), 0, d) for c in coeffs]
        conj = [c.conjugate() for c in q]
        prod = [QuadElem(0, 0, d)] * (2 * len(q) - 1)
        for i, a in enumerate(q):
            for j, b in enumerate(conj):
                prod[i + j] = prod[i + j] + a * b
        rat = [c.u for c in prod]
    else:
        rat = [c.u if isinstance(c, QuadElem) else Fraction(c) for c in coeffs]
    if len(rat) <= 1:
        return []
    roots = []
    for f in rational_factors(rat):
        if len(f) == 2:
            roots.append(-f[1] / f[0])
        elif len(f) == 3 and d is not None:
            a, b, c = f
            disc = b * b - 4 * a * c
            s = _rational_sqrt(disc / d)
            if s is not None:
                for sign in (1, -1):
                    roots.append(QuadElem(-b / (2 * a), sign * s / (2 * a), d))
    out = []
    for r in roots:
        if d is not None and not isinstance(r, QuadElem):
            r = QuadElem(r, 0, d)
        if _poly_eval(coeffs, r) == 0 and r not in out:
            out.append(r)
    return out
