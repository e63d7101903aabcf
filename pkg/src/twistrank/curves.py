"""Weierstrass models over Q, the chord-tangent law, twists and the 2-isogeny."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd, lcm
from typing import Callable

import sympy

from .arith import is_squarefree, small_prime_factors
from .quadfield import MixedFields, NotSquarefree, QuadElem, roots_in_field


class SingularCurve(ValueError):
    pass


class PointNotOnCurve(ValueError):
    pass


class SingularIsogenyTarget(ValueError):
    pass


class NoRationalTwoTorsion(ValueError):
    pass


class OutOfRange(ValueError):
    pass


def _frac(x) -> Fraction:
    return Fraction(x)


@dataclass(frozen=True)
class Point:
    """Affine point (x, y), or the point at infinity when both are None."""

    x: object = None
    y: object = None

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def field(self) -> int | None:
        """The d of Q(sqrt d) the coordinates live in, None for rational points."""
        for c in (self.x, self.y):
            if isinstance(c, QuadElem) and c.v != 0:
                return c.d
        return None

    def __repr__(self):
        return "O" if self.is_infinity else f"({self.x}, {self.y})"


INFINITY = Point()


@dataclass(frozen=True)
class CurveModel:
    a1: Fraction
    a2: Fraction
    a3: Fraction
    a4: Fraction
    a6: Fraction

    def __post_init__(self):
        for name in ("a1", "a2", "a3", "a4", "a6"):
            object.__setattr__(self, name, _frac(getattr(self, name)))
        if self.discriminant == 0:
            raise SingularCurve(f"singular model {self.ainvs}")

    @property
    def ainvs(self) -> tuple[Fraction, ...]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @property
    def b2(self):
        return self.a1**2 + 4 * self.a2

    @property
    def b4(self):
        return 2 * self.a4 + self.a1 * self.a3

    @property
    def b6(self):
        return self.a3**2 + 4 * self.a6

    @property
    def b8(self):
        a1, a2, a3, a4, a6 = self.ainvs
        return a1**2 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3**2 - a4**2

    @property
    def c4(self):
        return self.b2**2 - 24 * self.b4

    @property
    def c6(self):
        return -self.b2**3 + 36 * self.b2 * self.b4 - 216 * self.b6

    @property
    def discriminant(self) -> Fraction:
        b2, b4, b6, b8 = self.b2, self.b4, self.b6, self.b8
        return -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    @property
    def j_invariant(self) -> Fraction:
        return self.c4**3 / self.discriminant

    def contains(self, P: Point) -> bool:
        if P.is_infinity:
            return True
        x, y = P.x, P.y
        a1, a2, a3, a4, a6 = self.ainvs
        return y * y + a1 * x * y + a3 * y - (x * x * x + a2 * x * x + a4 * x + a6) == 0

    def point(self, x, y) -> Point:
        P = Point(x, y)
        if not self.contains(P):
            raise PointNotOnCurve(f"{P} not on {self}")
        return P

    def to_strings(self) -> dict:
        return {f"a{i}": str(c) for i, c in zip((1, 2, 3, 4, 6), self.ainvs)}

    @classmethod
    def from_strings(cls, coeffs) -> "CurveModel":
        if isinstance(coeffs, dict):
            coeffs = [coeffs[k] for k in ("a1", "a2", "a3", "a4", "a6")]
        return cls(*(Fraction(c) for c in coeffs))

    def __repr__(self):
        return "CurveModel[" + ",".join(str(c) for c in self.ainvs) + "]"


@dataclass(frozen=True)
class TwoTorsionModel:
    """y^2 = x(x^2 + a x + b)."""

    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", _frac(self.a))
        object.__setattr__(self, "b", _frac(self.b))
        if self.b == 0 or self.a * self.a - 4 * self.b == 0:
            raise SingularCurve(f"y^2 = x(x^2 + {self.a}x + {self.b}) is singular")

    @cached_property
    def model(self) -> CurveModel:
        return CurveModel(0, self.a, 0, self.b, 0)

    def contains(self, P: Point) -> bool:
        return self.model.contains(P)

    def isogenous_params(self) -> tuple[Fraction, Fraction]:
        return -2 * self.a, self.a * self.a - 4 * self.b

    def __repr__(self):
        return f"TwoTorsionModel(a={self.a}, b={self.b})"


def as_model(E) -> CurveModel:
    return E.model if isinstance(E, TwoTorsionModel) else E


# ---------------------------------------------------------------------------
# group law


def _check_fields(P: Point, Q: Point):
    dp, dq = P.field(), Q.field()
    if dp is not None and dq is not None and dp != dq:
        raise MixedFields(f"points over sqrt({dp}) and sqrt({dq})")


def negate(E, P: Point) -> Point:
    E = as_model(E)
    if P.is_infinity:
        return P
    return Point(P.x, -P.y - E.a1 * P.x - E.a3)


def _add(E: CurveModel, P: Point, Q: Point) -> Point:
    if P.is_infinity:
        return Q
    if Q.is_infinity:
        return P
    a1, a2, a3, a4, a6 = E.ainvs
    x1, y1, x2, y2 = P.x, P.y, Q.x, Q.y
    if x1 == x2:
        if y1 + y2 + a1 * x2 + a3 == 0:
            return INFINITY
        lam = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) / (2 * y1 + a1 * x1 + a3)
        nu = (-x1 * x1 * x1 + a4 * x1 + 2 * a6 - a3 * y1) / (2 * y1 + a1 * x1 + a3)
    else:
        lam = (y2 - y1) / (x2 - x1)
        nu = (y1 * x2 - y2 * x1) / (x2 - x1)
    x3 = lam * lam + a1 * lam - a2 - x1 - x2
    y3 = -(lam + a1) * x3 - nu - a3
    return Point(x3, y3)


def add_points(E, P: Point, Q: Point) -> Point:
    E = as_model(E)
    _check_fields(P, Q)
    for R in (P, Q):
        if not E.contains(R):
            raise PointNotOnCurve(f"{R} not on {E}")
    return _add(E, P, Q)


def scalar_mul(E, k: int, P: Point) -> Point:
    E = as_model(E)
    if not E.contains(P):
        raise PointNotOnCurve(f"{P} not on {E}")
    if k < 0:
        return scalar_mul(E, -k, negate(E, P))
    R, S = INFINITY, P
    while k:
        if k & 1:
            R = _add(E, R, S)
        S = _add(E, S, S)
        k >>= 1
    return R


def point_order(E, P: Point, limit: int = 24) -> int | None:
    """Exact order of P if it is at most ``limit``, else None."""
    E = as_model(E)
    R = P
    for n in range(1, limit + 1):
        if R.is_infinity:
            return n
        R = _add(E, R, P)
    return None


# ---------------------------------------------------------------------------
# changes of coordinates


@dataclass(frozen=True)
class Iso:
    """Standard change of variables x = u^2 x' + r, y = u^3 y' + s u^2 x' + t."""

    u: Fraction
    r: Fraction
    s: Fraction
    t: Fraction

    def apply_curve(self, E: CurveModel) -> CurveModel:
        u, r, s, t = self.u, self.r, self.s, self.t
        a1, a2, a3, a4, a6 = E.ainvs
        return CurveModel(
            (a1 + 2 * s) / u,
            (a2 - s * a1 + 3 * r - s * s) / u**2,
            (a3 + r * a1 + 2 * t) / u**3,
            (a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t) / u**4,
            (a6 + r * a4 + r * r * a2 + r**3 - t * a3 - t * t - r * t * a1) / u**6,
        )

    def forward(self, P: Point) -> Point:
        if P.is_infinity:
            return P
        u, r, s, t = self.u, self.r, self.s, self.t
        x = (P.x - r) / u**2
        y = (P.y - s * (P.x - r) - t) / u**3
        return Point(x, y)

    def backward(self, P: Point) -> Point:
        if P.is_infinity:
            return P
        u, r, s, t = self.u, self.r, self.s, self.t
        return Point(u * u * P.x + r, u**3 * P.y + s * u * u * P.x + t)

    def then(self, other: "Iso") -> "Iso":
        u1, r1, s1, t1 = self.u, self.r, self.s, self.t
        u2, r2, s2, t2 = other.u, other.r, other.s, other.t
        return Iso(
            u1 * u2,
            r1 + u1 * u1 * r2,
            s1 + u1 * s2,
            t1 + u1 * u1 * s1 * r2 + u1**3 * t2,
        )


IDENTITY_ISO = Iso(Fraction(1), Fraction(0), Fraction(0), Fraction(0))


@dataclass(frozen=True)
class ShortModel:
    """Integral y^2 = x^3 + A x + B isomorphic to ``source`` via ``iso``."""

    A: int
    B: int
    source: CurveModel
    iso: Iso

    @property
    def model(self) -> CurveModel:
        return CurveModel(0, 0, 0, self.A, self.B)


def short_model(E) -> ShortModel:
    """Integral short Weierstrass model, with sixth-power content removed."""
    E = as_model(E)
    r = -E.b2 / 12
    s = -E.a1 / 2
    t = -(E.a3 + r * E.a1) / 2
    iso = Iso(Fraction(1), r, s, t)
    S = iso.apply_curve(E)
    A, B = S.a4, S.a6
    k = lcm(A.denominator, B.denominator)
    # u = 1/k scales A by k^4, B by k^6
    iso = iso.then(Iso(Fraction(1, k), Fraction(0), Fraction(0), Fraction(0)))
    A, B = int(A * k**4), int(B * k**6)
    g = gcd(A, B)
    if g:
        # partial minimisation: large prime factors of g are left alone, the
        # model stays integral either way
        for p in small_prime_factors(g):
            while A % p**4 == 0 and B % p**6 == 0:
                A //= p**4
                B //= p**6
                iso = iso.then(Iso(Fraction(p), Fraction(0), Fraction(0), Fraction(0)))
    out = ShortModel(A, B, E, iso)
    assert iso.apply_curve(E) == out.model
    return out


def to_two_torsion_model(E) -> tuple[TwoTorsionModel, Iso]:
    """Model y^2 = x(x^2 + a x + b) of E together with the isomorphism to it."""
    E = as_model(E)
    e_roots = roots_in_field([Fraction(1), E.b2 / 4, E.b4 / 2, E.b6 / 4], None)
    if not e_roots:
        raise NoRationalTwoTorsion(f"{E} has no rational 2-torsion point")
    e = 0 if 0 in e_roots else sorted(e_roots, key=lambda z: (abs(z), z < 0))[0]
    iso = Iso(Fraction(1), Fraction(e), -E.a1 / 2, -E.a3 / 2 - E.a1 * Fraction(e) / 2)
    M = iso.apply_curve(E)
    assert M.a1 == 0 and M.a3 == 0 and M.a6 == 0
    return TwoTorsionModel(M.a2, M.a4), iso


# ---------------------------------------------------------------------------
# twists and the 2-isogeny


def twist(E: TwoTorsionModel, d: int) -> TwoTorsionModel:
    """Quadratic twist y^2 = x(x^2 + a d x + b d^2)."""
    d = int(d)
    if d == 0 or not is_squarefree(d):
        raise NotSquarefree(f"{d} is not squarefree")
    return TwoTorsionModel(E.a * d, E.b * d * d)


def twist_short(S: ShortModel, d: int) -> CurveModel:
    """y^2 = x^3 + A d^2 x + B d^3, the twist of a short model by d."""
    return CurveModel(0, 0, 0, S.A * d * d, S.B * d**3)


@dataclass(frozen=True)
class IsogenyMap:
    source: TwoTorsionModel
    target: TwoTorsionModel
    _fn: Callable[[Point], Point]

    def __call__(self, P: Point) -> Point:
        if not self.source.contains(P):
            raise PointNotOnCurve(f"{P} not on {self.source}")
        return self._fn(P)


def _phi_formula(a, b):
    def fn(P: Point) -> Point:
        if P.is_infinity or P.x == 0:
            return INFINITY
        x, y = P.x, P.y
        return Point(x + a + b / x, y - b * y / (x * x))

    return fn


def two_isogeny(E: TwoTorsionModel) -> tuple[TwoTorsionModel, IsogenyMap]:
    a2, b2 = E.isogenous_params()
    if b2 == 0 or a2 * a2 - 4 * b2 == 0:
        raise SingularIsogenyTarget(f"a^2 = 4b for {E}")
    Ep = TwoTorsionModel(a2, b2)
    return Ep, IsogenyMap(E, Ep, _phi_formula(E.a, E.b))


def dual_isogeny(Ep: TwoTorsionModel) -> IsogenyMap:
    """The isogeny E' -> E with kernel {O, (0,0)}; dual of :func:`two_isogeny`.

    Goes through E'' = (4a, 16b) and then (x, y) -> (x/4, y/8), so the
    composite with phi is multiplication by 2 on E.
    """
    a2, b2 = Ep.a, Ep.b
    E = TwoTorsionModel(-a2 / 2, (a2 * a2 / 4 - b2) / 4)
    step = _phi_formula(a2, b2)

    def fn(P: Point) -> Point:
        Q = step(P)
        if Q.is_infinity:
            return Q
        return Point(Q.x / 4, Q.y / 8)

    return IsogenyMap(Ep, E, fn)


# ---------------------------------------------------------------------------
# division polynomials

_X = sympy.Symbol("x")


def _division_table(E: CurveModel, m: int) -> dict[int, sympy.Poly]:
    x = _X

    def P(expr):
        return sympy.Poly(expr, x, domain="QQ")

    b2, b4, b6, b8 = (sympy.Rational(c.numerator, c.denominator) for c in (E.b2, E.b4, E.b6, E.b8))
    F = P(4 * x**3 + b2 * x**2 + 2 * b4 * x + b6)
    F2 = F * F
    f = {0: P(0), 1: P(1), 2: P(1)}
    f[3] = P(3 * x**4 + b2 * x**3 + 3 * b4 * x**2 + 3 * b6 * x + b8)
    f[4] = P(
        2 * x**6
        + b2 * x**5
        + 5 * b4 * x**4
        + 10 * b6 * x**3
        + 10 * b8 * x**2
        + (b2 * b8 - b4 * b6) * x
        + (b4 * b8 - b6 * b6)
    )

    def get(n):
        if n in f:
            return f[n]
        k = n // 2
        if n % 2:
            if k % 2 == 0:
                val = get(k + 2) * get(k) ** 3 * F2 - get(k - 1) * get(k + 1) ** 3
            else:
                val = get(k + 2) * get(k) ** 3 - F2 * get(k - 1) * get(k + 1) ** 3
        else:
            val = get(k) * (get(k + 2) * get(k - 1) ** 2 - get(k - 2) * get(k + 1) ** 2)
        f[n] = val
        return val

    get(m)
    f["F"] = F
    return f


def division_polynomial(E, m: int) -> sympy.Poly:
    """Polynomial in x whose roots are the x-coordinates of nonzero m-torsion.

    For odd m this is psi_m; for even m it is psi_m * psi_2, which lies in Q[x].
    """
    E = as_model(E)
    if m < 1 or m > 24:
        raise OutOfRange(f"m={m} outside 1..24")
    table = _division_table(E, max(m, 4))
    if m == 1:
        return table[1]
    if m % 2:
        return table[m]
    return table[m] * table["F"]
