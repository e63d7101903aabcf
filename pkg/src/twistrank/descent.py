"""2-descent via a rational 2-isogeny.

For E: y^2 = x(x^2 + a x + b) and E': y^2 = x(x^2 + a' x + b') with
a' = -2a, b' = a^2 - 4b, the connecting maps send a point to the square class
of its x-coordinate ((0,0) goes to the class of the curve's b coefficient read
off the *other* curve, i.e. a^2 - 4b on E').  A squarefree r dividing b' lies
in the image of E'(Q) exactly when

    r^2 l^4 + a' r l^2 m^2 + b' m^4 = r n^2

has a solution with gcd(l, m) = 1, and then

    2^rank = |im phi| * |im phi'| / 4.

Classes are sorted into three buckets: *confirmed* (witness found, or coming
from torsion), *excluded* (no Q_v-point for some place v) and *undecided*
(locally soluble everywhere, no witness within the search bound).  When E or
E' has three rational 2-torsion points the upper bound is sharpened with a
full 2-descent on that curve (see :func:`full_two_selmer_bound`).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import lcm, log2
from typing import Union

from .arith import (
    factorize,
    is_prime,
    is_squarefree,
    rational_squarefree_class,
    squarefree_divisors,
    squarefree_part,
)
from .curves import (
    INFINITY,
    Point,
    SingularCurve,
    TwoTorsionModel,
    two_isogeny,
)
from .local import (
    even_quartic_soluble_real,
    local_image_full_two,
    qp_square_class,
    quartic_soluble_qp,
    real_image_full_two,
)
from .quadfield import roots_in_field
from .search import first_quartic_square, point_search

DEFAULT_BOUND = 1 << 10
DEFAULT_HEIGHT = 10**4

SquareClass = int  # signed squarefree integer standing for its class in Q*/Q*^2


def class_product(r: int, s: int) -> int:
    return squarefree_part(r * s)[0]


def _class_key(r: int):
    return (abs(r), r < 0)


# ---------------------------------------------------------------------------
# torsor outcomes


@dataclass(frozen=True)
class Solvable:
    l: int
    m: int
    n: int

    def to_json(self):
        return {"outcome": "solvable", "witness": [self.l, self.m, self.n]}


@dataclass(frozen=True)
class LocallyObstructed:
    place: Union[int, str]  # a prime, or "real"
    reason: str

    def to_json(self):
        return {"outcome": "obstructed", "place": self.place, "reason": self.reason}


@dataclass(frozen=True)
class Undecided:
    bound: int

    def to_json(self):
        return {"outcome": "undecided", "bound": self.bound}


TorsorOutcome = Union[Solvable, LocallyObstructed, Undecided]


def _integral(a, b) -> tuple[int, int, int]:
    """(A, B, k) with A = a k^2, B = b k^4 integral; same square classes."""
    a, b = Fraction(a), Fraction(b)
    k = lcm(a.denominator, b.denominator)
    return int(a * k * k), int(b * k**4), k


def torsor_places(r: int, a: int, b: int) -> list[Union[int, str]]:
    """Places checked by :func:`torsor_solvable`, in the order they are tried."""
    main = set(factorize(r * b).primes) - {2}
    extra = set(factorize(a * a - 4 * b).primes) - {2} - main
    return ["real", *sorted(main), *sorted(extra), 2]


def local_obstruction(r: int, a: int, b: int) -> LocallyObstructed | None:
    """First place where r l^4 + a l^2 m^2 + (b/r) m^4 = n^2 has no local point."""
    if b % r:
        return LocallyObstructed(abs(r), "divisibility")
    s = b // r
    for place in torsor_places(r, a, b):
        if place == "real":
            if not even_quartic_soluble_real(r, a, s):
                return LocallyObstructed("real", "sign")
        elif not quartic_soluble_qp([r, 0, a, 0, s], place):
            return LocallyObstructed(place, "no p-adic point")
    return None


def torsor_solvable(r: int, a, b, bound: int = DEFAULT_BOUND) -> TorsorOutcome:
    """Decide (as far as possible) whether r^2 l^4 + a r l^2 m^2 + b m^4 = r n^2
    has a solution with gcd(l, m) = 1.

    Local conditions are tried first (divisibility, real place, odd primes,
    then 2); afterwards coprime pairs with max(l, m) <= bound are searched.
    The witness satisfies the equation for the given (a, b).
    """
    A, B, k = _integral(a, b)
    if B == 0 or A * A == 4 * B:
        raise SingularCurve(f"y^2 = x(x^2 + {a}x + {b}) is singular")
    r = int(r)
    if r == 0 or not is_squarefree(r):
        raise ValueError(f"{r} is not a squarefree class")
    obstruction = local_obstruction(r, A, B)
    if obstruction is not None:
        return obstruction
    hit = first_quartic_square(r, A, B // r, bound)
    if hit is None:
        return Undecided(bound)
    l, m, n = hit
    # undo the scaling a -> a k^2, b -> b k^4 (m absorbs k)
    return Solvable(l, m * k, n)


def check_witness(r: int, a, b, w: Solvable) -> bool:
    l, m, n = w.l, w.m, w.n
    return r * r * l**4 + Fraction(a) * r * l * l * m * m + Fraction(b) * m**4 == r * n * n


# ---------------------------------------------------------------------------
# images of the connecting maps


@dataclass
class DescentImage:
    """Classification of the squarefree divisors of a curve's b coefficient."""

    confirmed: set = field(default_factory=set)
    excluded: set = field(default_factory=set)
    undecided: set = field(default_factory=set)
    evidence: dict = field(default_factory=dict)

    @property
    def upper(self) -> set:
        return self.confirmed | self.undecided

    def log_confirmed(self) -> int:
        return int(log2(len(self.confirmed)))

    def log_upper(self) -> int:
        return int(log2(len(self.upper)))

    def confirm(self, r: int, why) -> None:
        """Add r and close the confirmed set under products."""
        if r in self.confirmed:
            return
        for c in list(self.confirmed) + [1]:
            s = class_product(r, c)
            if s not in self.confirmed:
                self.confirmed.add(s)
                self.undecided.discard(s)
                self.excluded.discard(s)
                self.evidence.setdefault(s, why if s == r else ("product", r, c))
        assert self._closed()

    def _closed(self) -> bool:
        return all(class_product(x, y) in self.confirmed for x in self.confirmed for y in self.confirmed)

    def to_json(self) -> dict:
        srt = lambda s: sorted(s, key=_class_key)
        return {
            "confirmed": srt(self.confirmed),
            "excluded": srt(self.excluded),
            "undecided": srt(self.undecided),
        }


def _torsion_classes(A: Fraction, B: Fraction) -> list[int]:
    """Image classes of the rational 2-torsion of y^2 = x(x^2 + A x + B)."""
    out = [rational_squarefree_class(B)]  # (0,0) maps to the class of B
    for e in roots_in_field([Fraction(1), Fraction(A), Fraction(B)], None):
        out.append(rational_squarefree_class(e))
    return out


def _local_image(A: Fraction, B: Fraction) -> DescentImage:
    """Local part of the image of y^2 = x(x^2 + A x + B) under x -> class of x.

    Torsion classes are confirmed, locally obstructed classes excluded and
    everything else left undecided.
    """
    Ai, Bi, _ = _integral(A, B)
    img = DescentImage()
    img.confirm(1, ("identity",))
    for c in _torsion_classes(A, B):
        img.confirm(c, ("torsion",))
    for r in sorted(squarefree_divisors(Bi), key=_class_key):
        if r in img.confirmed:
            continue
        obs = local_obstruction(r, Ai, Bi)
        if obs is None:
            img.undecided.add(r)
        else:
            img.excluded.add(r)
            img.evidence[r] = obs
    return img


def _search_image(img: DescentImage, A, B, bound: int, stop=lambda: False) -> None:
    """Look for torsor points on the undecided classes, smallest |r| first."""
    for r in sorted(img.undecided, key=_class_key):
        if stop():
            return
        if r not in img.undecided:
            continue  # settled by closure in the meantime
        out = torsor_solvable(r, A, B, bound)
        img.evidence[r] = out
        if isinstance(out, Solvable):
            assert check_witness(r, A, B, out)
            img.confirm(r, out)


def descent_images(E: TwoTorsionModel, bound: int = DEFAULT_BOUND) -> tuple[DescentImage, DescentImage]:
    """(image of phi on E', image of phi' on E), classes of b' resp. b."""
    Ep, _ = two_isogeny(E)
    out = []
    for C in (Ep, E):
        img = _local_image(C.a, C.b)
        _search_image(img, C.a, C.b, bound)
        out.append(img)
    return out[0], out[1]


# ---------------------------------------------------------------------------
# full 2-descent on a curve with three rational 2-torsion points


def _rational_roots(E: TwoTorsionModel) -> tuple[Fraction, Fraction, Fraction] | None:
    rts = roots_in_field([Fraction(1), E.a, E.b], None)
    if len(rts) < 2:
        return None
    e2, e3 = sorted(rts)
    return Fraction(0), e2, e3


def full_two_selmer(E: TwoTorsionModel) -> int:
    """Order of the 2-Selmer group of E, which must have full rational 2-torsion.

    Uses the map P -> (x - e1, x - e2) into (Q*/Q*^2)^2, restricted to
    classes supported on -1 and the primes dividing 2 and the root
    differences; a pair survives when it lies in the local image at every
    such prime and at the real place.
    """
    roots = _rational_roots(E)
    if roots is None:
        raise ValueError(f"{E} does not have full rational 2-torsion")
    e1, e2, e3 = roots
    S = {2}
    for z in (e1 - e2, e1 - e3, e2 - e3):
        S |= set(factorize(z.numerator).primes) | set(factorize(z.denominator).primes)
    S = sorted(S)
    units = [1]
    for g in [-1, *S]:
        units += [u * g for u in units]
    real = real_image_full_two(roots)
    local = {p: local_image_full_two(roots, p) for p in S}
    cls = {p: {u: qp_square_class(u, p) for u in units} for p in S}
    count = 0
    for b1, b2 in product(units, repeat=2):
        if (b1 > 0, b2 > 0) not in real:
            continue
        if all((cls[p][b1], cls[p][b2]) in local[p] for p in S):
            count += 1
    return count


def full_two_selmer_bound(E: TwoTorsionModel) -> int:
    """Rank bound log2 |Sel^2| - 2 for a curve with full rational 2-torsion."""
    return int(log2(full_two_selmer(E))) - 2


# ---------------------------------------------------------------------------
# rank bounds


@dataclass
class DescentReport:
    curve: TwoTorsionModel
    image_phi: DescentImage
    image_phi_dual: DescentImage
    rank_lower: int
    rank_upper: int
    status: str  # "Exact" or "Interval"
    isogeny_upper: int
    full_two_upper: int | None = None
    points: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "a": str(self.curve.a),
            "b": str(self.curve.b),
            "image_phi": self.image_phi.to_json(),
            "image_phi_dual": self.image_phi_dual.to_json(),
            "rank_lower": self.rank_lower,
            "rank_upper": self.rank_upper,
            "isogeny_upper": self.isogeny_upper,
            "full_two_upper": self.full_two_upper,
            "status": self.status,
            "points": [[str(P.x), str(P.y)] for P in self.points],
        }


def _x_class(P: Point, B) -> int:
    return rational_squarefree_class(B) if P.x == 0 else rational_squarefree_class(P.x)


def rank_bounds(
    E: TwoTorsionModel, bound: int = DEFAULT_BOUND, height: int | None = None
) -> DescentReport:
    """Rank interval for E from 2-isogeny descent.

    With ``height`` set, points found by :func:`point_search` are pushed
    through both connecting maps and their classes confirmed.  If E or E'
    has full rational 2-torsion the upper bound is also capped by a full
    2-descent.  When the bounds meet, still-undecided classes are moved to
    ``excluded`` (they cannot lie in the image).
    """
    Ep, phi = two_isogeny(E)
    im_phi, im_dual = _local_image(Ep.a, Ep.b), _local_image(E.a, E.b)
    full = None
    for C in (E, Ep):
        if _rational_roots(C) is not None:
            f = full_two_selmer_bound(C)
            full = f if full is None else min(full, f)
    found = []
    if height:
        for fp in point_search(E, height):
            if fp.is_torsion:
                continue
            P = fp.point
            found.append(P)
            im_dual.confirm(_x_class(P, E.b), ("point", str(P)))
            Q = phi(P)
            if Q != INFINITY:
                im_phi.confirm(_x_class(Q, Ep.b), ("point", str(P)))

    def lower():
        return max(0, im_phi.log_confirmed() + im_dual.log_confirmed() - 2)

    def upper():
        u = im_phi.log_upper() + im_dual.log_upper() - 2
        return u if full is None else min(u, full)

    stop = lambda: lower() >= upper()
    _search_image(im_phi, Ep.a, Ep.b, bound, stop)
    _search_image(im_dual, E.a, E.b, bound, stop)
    lo, hi = lower(), upper()
    iso_upper = im_phi.log_upper() + im_dual.log_upper() - 2
    assert lo <= hi, (lo, hi)
    if lo == hi:
        for img in (im_phi, im_dual):
            for r in img.undecided:
                img.evidence[r] = ("rank bound", img.evidence.get(r))
            img.excluded |= img.undecided
            img.undecided = set()
    status = "Exact" if lo == hi else "Interval"
    return DescentReport(E, im_phi, im_dual, lo, hi, status, iso_upper, full, found)


# ---------------------------------------------------------------------------
# congruence certificates


class NotInFamily(ValueError):
    def __init__(self, d: int, reason: str):
        super().__init__(f"d={d}: {reason}")
        self.d = d
        self.reason = reason


@dataclass(frozen=True)
class Condition:
    prime: int
    modulus: int
    residue: int
    allowed: tuple
    ok: bool

    def replay(self) -> bool:
        return (
            is_prime(self.prime)
            and self.prime % self.modulus == self.residue
            and (self.residue in self.allowed) == self.ok
        )

    def to_json(self) -> dict:
        return {
            "prime": self.prime,
            "modulus": self.modulus,
            "residue": self.residue,
            "allowed": list(self.allowed),
            "ok": self.ok,
        }


@dataclass(frozen=True)
class RankZeroCertificate:
    family: str
    d: int
    conditions: tuple
    conclusion: str

    def verify(self) -> bool:
        """Re-check every recorded congruence and that the primes rebuild d."""
        primes = sorted({c.prime for c in self.conditions})
        prod = 1
        for p in primes:
            prod *= -p
        sign_ok = prod == self.d if self.family == "X1_2_10" else (
            (len(primes) == 1 and self.d == -primes[0]) or (len(primes) == 2 and self.d == primes[0] * primes[1])
        )
        return sign_ok and all(c.ok and c.replay() for c in self.conditions)

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "d": self.d,
            "conditions": [c.to_json() for c in self.conditions],
            "conclusion": self.conclusion,
        }

    @classmethod
    def from_json(cls, obj) -> "RankZeroCertificate":
        if isinstance(obj, str):
            obj = json.loads(obj)
        conds = tuple(
            Condition(c["prime"], c["modulus"], c["residue"], tuple(c["allowed"]), c["ok"])
            for c in obj["conditions"]
        )
        return cls(obj["family"], obj["d"], conds, obj["conclusion"])


def _prime_list(d: int) -> list[int]:
    if d == 0:
        raise NotInFamily(d, "d = 0")
    fac = factorize(d)
    for p, e in fac.factors:
        if e > 1:
            raise NotInFamily(d, f"{p}^{e} divides d (not squarefree)")
    return list(fac.primes)


def _check(d: int, p: int, modulus: int, allowed: tuple) -> Condition:
    c = Condition(p, modulus, p % modulus, allowed, p % modulus in allowed)
    if not c.ok:
        raise NotInFamily(d, f"{p} = {c.residue} mod {modulus}, need one of {list(allowed)}")
    return c


def prove_rank_zero_2_10(d: int) -> RankZeroCertificate:
    """Certificate for rank 0 of the X1(2,10) twist by d = prod(-p_i), p_i = 3, 7 mod 20."""
    primes = _prime_list(d)
    if 2 in primes:
        raise NotInFamily(d, "2 divides d")
    expected = (-1) ** len(primes)
    if (d > 0) != (expected > 0):
        raise NotInFamily(d, f"sign of d is not (-1)^{len(primes)}")
    conds = []
    for p in primes:
        conds.append(_check(d, p, 4, (3,)))
        conds.append(_check(d, p, 5, (2, 3)))
    return RankZeroCertificate(
        "X1_2_10", d, tuple(conds), f"rank of the twist of X1(2,10) by {d} is 0"
    )


def prove_rank_zero_2_12(d: int) -> RankZeroCertificate:
    """Certificate for rank 0 of the X1(2,12) twist by d = -p or d = pq, p, q = 11 mod 24."""
    primes = _prime_list(d)
    if len(primes) == 1:
        if d > 0:
            raise NotInFamily(d, "single prime with d > 0 (need d = -p)")
    elif len(primes) == 2:
        if d < 0:
            raise NotInFamily(d, "two primes with d < 0 (need d = pq)")
    else:
        raise NotInFamily(d, f"{len(primes)} prime factors (need d = -p or d = pq)")
    conds = []
    for p in primes:
        conds.append(_check(d, p, 8, (3,)))
        conds.append(_check(d, p, 3, (2,)))
    return RankZeroCertificate(
        "X1_2_12", d, tuple(conds), f"rank of the twist of X1(2,12) by {d} is 0"
    )
