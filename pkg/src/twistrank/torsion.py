"""Torsion subgroups over Q and over quadratic fields Q(sqrt d).

All work happens on an integral short model y^2 = x^3 + A x + B; generators
are mapped back to the caller's model at the end.

* 2-primary part: repeated halving.  The x-coordinates of the halves of
  P = (x0, y0) are the roots of x^4 - 2Ax^2 - 8Bx + A^2 - 4 x0 (x^3 + Ax + B),
  searched for in the field with :func:`roots_in_field`.
* odd part over Q: the order is bounded by #E(F_p) at several good primes,
  and points are located from rational roots of division polynomials.
* odd part over Q(sqrt d): E(K)[n] = E(Q)[n] + E_d(Q)[n] for odd n.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

import sympy

from .arith import is_squarefree, primes_up_to
from .curves import (
    INFINITY,
    CurveModel,
    Point,
    _add,
    as_model,
    division_polynomial,
    short_model,
    twist_short,
)
from .quadfield import NotSquarefree, QuadElem, roots_in_field, sqrt_in_field

#: largest 2-power order searched for over a quadratic field (Najman: 16)
MAX_TWO_POWER = 16


@dataclass(frozen=True)
class TorsionStructure:
    """The group Z/m x Z/mn together with generators of exact orders m and mn."""

    m: int
    n: int
    generators: tuple[Point, ...] = ()
    points: frozenset = field(default=frozenset(), compare=False, repr=False)

    @property
    def order(self) -> int:
        return self.m * self.m * self.n

    @property
    def invariants(self) -> tuple[int, int]:
        return (self.m, self.m * self.n)

    def label(self) -> str:
        if self.m == 1:
            return f"Z/{self.n}"
        return f"Z/{self.m} x Z/{self.m * self.n}"

    def is_group(self, m: int, mn: int) -> bool:
        return self.invariants == (m, mn)


# ---------------------------------------------------------------------------
# helpers on y^2 = x^3 + A x + B


def _halves(A: int, B: int, P: Point, d: int | None) -> list[Point]:
    E = CurveModel(0, 0, 0, A, B)
    if P.is_infinity:
        coeffs = [1, 0, A, B]
    else:
        x0 = P.x
        coeffs = [1, -4 * x0, -2 * A, -8 * B - 4 * A * x0, A * A - 4 * B * x0]
    out = []
    for x in roots_in_field(coeffs, d):
        y = sqrt_in_field(x * x * x + A * x + B, d)
        if y is None:
            continue
        for Q in {Point(x, y), Point(x, -y)}:
            if _add(E, Q, Q) == P:
                out.append(Q)
    return out


def _two_primary(A: int, B: int, d: int | None) -> set[Point]:
    group = {INFINITY}
    frontier = [INFINITY]
    while frontier:
        nxt = []
        for P in frontier:
            for Q in _halves(A, B, P, d):
                if Q not in group:
                    group.add(Q)
                    nxt.append(Q)
        frontier = nxt
        if len(group) > 4 * MAX_TWO_POWER:
            raise RuntimeError("2-primary torsion larger than the quadratic classification allows")
    return group


def _count_points_mod_p(A: int, B: int, p: int) -> int:
    squares = [0] * p
    for y in range(p):
        squares[y * y % p] += 1
    return 1 + sum(squares[(x * x * x + A * x + B) % p] for x in range(p))


def reduction_bound(A: int, B: int, nprimes: int = 6) -> int:
    """gcd of #E(F_p) over good primes p >= 5; torsion order divides it."""
    disc = 4 * A**3 + 27 * B * B
    g, used = 0, 0
    for p in primes_up_to(2000):
        if p < 5 or disc % p == 0:
            continue
        g = gcd(g, _count_points_mod_p(A, B, p))
        used += 1
        if used >= nprimes:
            break
    return g


def _odd_generator_Q(A: int, B: int) -> tuple[Point, int]:
    """A generator of the (cyclic) odd part of E(Q)_tors and its order."""
    bound = reduction_bound(A, B)
    while bound % 2 == 0:
        bound //= 2
    E = CurveModel(0, 0, 0, A, B)
    gen, order = INFINITY, 1
    for ell, e in sympy.factorint(bound).items():
        best, best_order = INFINITY, 1
        for k in range(e, 0, -1):
            q = ell**k
            psi = division_polynomial(E, q)
            for x in roots_in_field([Fraction(int(c.p), int(c.q)) for c in psi.all_coeffs()], None):
                y = sqrt_in_field(x**3 + A * x + B, None)
                if y is None:
                    continue
                P = Point(x, y)
                if _order(E, P, q) == q:
                    best, best_order = P, q
                    break
            if best_order > 1:
                break
        gen = _add(E, gen, best)
        order *= best_order
    return gen, order


def _order(E: CurveModel, P: Point, limit: int) -> int | None:
    R = P
    for k in range(1, limit + 1):
        if R.is_infinity:
            return k
        R = _add(E, R, P)
    return None


def _multiples(E: CurveModel, P: Point) -> list[Point]:
    out = [INFINITY]
    R = P
    while not R.is_infinity:
        out.append(R)
        R = _add(E, R, P)
    return out


def _structure(E: CurveModel, elements: set[Point]) -> tuple[int, int, list[Point]]:
    size = len(elements)
    if size == 1:
        return 1, 1, []
    orders = {P: _order(E, P, size) for P in elements}
    exponent = max(orders.values())
    m = 1
    while m * m * (exponent // m) != size:
        m += 1
        if m > size:
            raise RuntimeError("torsion set is not a group of rank <= 2")
    n = exponent // m
    big = min((P for P in elements if orders[P] == exponent), key=_height_key)
    if m == 1:
        return 1, n, [big]
    span = set(_multiples(E, big))
    small = min(
        (P for P in elements if orders[P] == m and not (set(_multiples(E, P)) & span) - {INFINITY} and P not in span),
        key=_height_key,
    )
    return m, n, [small, big]


def _height_key(P: Point):
    def h(c):
        if isinstance(c, QuadElem):
            return max(abs(c.u.numerator), c.u.denominator, abs(c.v.numerator), c.v.denominator)
        return max(abs(c.numerator), c.denominator)

    return (h(P.x) + h(P.y), str(P.x), str(P.y))


def _as_quad(P: Point, d: int) -> Point:
    if P.is_infinity:
        return P
    conv = lambda c: c if isinstance(c, QuadElem) else QuadElem(Fraction(c), 0, d)
    return Point(conv(P.x), conv(P.y))


def _short_torsion_Q(A: int, B: int) -> set[Point]:
    E = CurveModel(0, 0, 0, A, B)
    two = _two_primary(A, B, None)
    gen, _ = _odd_generator_Q(A, B)
    odd = _multiples(E, gen)
    return {_add(E, P, Q) for P in two for Q in odd}


def torsion_over_Q(E) -> TorsionStructure:
    E = as_model(E)
    S = short_model(E)
    elements = _short_torsion_Q(S.A, S.B)
    m, n, gens = _structure(S.model, elements)
    back = S.iso.backward
    return TorsionStructure(m, n, tuple(back(P) for P in gens), frozenset(back(P) for P in elements))


def torsion_over_quadratic(E, d: int) -> TorsionStructure:
    """Torsion of E over Q(sqrt d); generator coordinates are :class:`QuadElem`."""
    d = int(d)
    if d in (0, 1) or not is_squarefree(d):
        raise NotSquarefree(f"{d} is not a squarefree non-unit")
    E = as_model(E)
    S = short_model(E)
    Es = S.model
    sqrt_d = QuadElem(0, 1, d)

    two = {_as_quad(P, d) for P in _two_primary(S.A, S.B, d)}

    gen, _ = _odd_generator_Q(S.A, S.B)
    Ed = twist_short(S, d)
    Sd = short_model(Ed)
    gen_d, _ = _odd_generator_Q(Sd.A, Sd.B)
    gen_d = Sd.iso.backward(gen_d)  # point on y^2 = x^3 + A d^2 x + B d^3
    if not gen_d.is_infinity:
        gen_d = Point(QuadElem(gen_d.x / d, 0, d), gen_d.y / (d * d) * sqrt_d)
    odd = {
        _add(Es, P, Q)
        for P in map(lambda R: _as_quad(R, d), _multiples(Es, gen))
        for Q in _multiples(Es, gen_d)
    }
    elements = {_add(Es, P, Q) for P in two for Q in odd}
    m, n, gens = _structure(Es, elements)
    back = S.iso.backward
    return TorsionStructure(m, n, tuple(back(P) for P in gens), frozenset(back(P) for P in elements))
