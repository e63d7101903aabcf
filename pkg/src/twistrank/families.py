"""Modular-curve models, their twists, and the torsion-curve constructors.

Two models of the d-twist of y^2 = f(x) = x(x^2 + a x + b) are in play:

* the *scaled* model E_d: Y^2 = X(X^2 + a d X + b d^2) used for all
  computations here (integral, Weierstrass), and
* the *twisted* model d y^2 = f(x) on which the parametrisations are written.

They are related by x = X/d, y = Y/d^2.  ``point_to_parameter_*`` accept a
point on E_d together with d and perform this change of variables first.

Parametrisations (each checked by substituting back):

* X1(2,10): x = 2t - 1 turns d y^2 = x^3 + x^2 - x into d y^2 = 8t^3 - 8t^2 + 1.
* X1(2,12): t = (x + 1)/(x - 1), z = 4y/(x - 1)^2 turns d y^2 = x^3 - x^2 + x
  into d z^2 = (t^2 - 1)(t^2 + 3); the point x = 1 is the pole of the map.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .arith import is_squarefree, squarefree_part
from .curves import (
    CurveModel,
    Point,
    SingularCurve,
    TwoTorsionModel,
    add_points,
    scalar_mul,
    twist,
)
from .descent import (
    DEFAULT_BOUND,
    DescentReport,
    NotInFamily,
    RankZeroCertificate,
    prove_rank_zero_2_10,
    prove_rank_zero_2_12,
    rank_bounds,
)
from .quadfield import NotSquarefree
from .search import point_search
from .torsion import TorsionStructure, torsion_over_quadratic


class FamilyId(str, enum.Enum):
    X1_11 = "X1_11"
    X1_2_10 = "X1_2_10"
    X1_2_12 = "X1_2_12"


_MODELS = {
    FamilyId.X1_11: (0, -1, -1, 0, 0),  # y^2 - y = x^3 - x^2
    FamilyId.X1_2_10: (0, 1, 0, -1, 0),  # y^2 = x^3 + x^2 - x
    FamilyId.X1_2_12: (0, -1, 0, 1, 0),  # y^2 = x^3 - x^2 + x
}

_TWO_TORSION = {
    FamilyId.X1_2_10: TwoTorsionModel(1, -1),
    FamilyId.X1_2_12: TwoTorsionModel(-1, 1),
}

TARGETS = {"2x10": (FamilyId.X1_2_10, (2, 10)), "2x12": (FamilyId.X1_2_12, (2, 12))}


def family_model(fid) -> CurveModel:
    return CurveModel(*_MODELS[FamilyId(fid)])


def family_two_torsion(fid) -> TwoTorsionModel:
    """The model y^2 = x(x^2 + ax + b) of X1(2,10) or X1(2,12)."""
    return _TWO_TORSION[FamilyId(fid)]


def family_twist(fid, d: int) -> TwoTorsionModel:
    return twist(family_two_torsion(fid), d)


class ExcludedParameter(ValueError):
    pass


class InfinityPoint(ValueError):
    pass


class ExceptionalX(ValueError):
    """The point sits on the pole of the parametrisation."""


class NoPointsFound(RuntimeError):
    def __init__(self, message: str, report: DescentReport | None = None,
                 certificate: RankZeroCertificate | None = None):
        super().__init__(message)
        self.report = report
        self.certificate = certificate


@dataclass(frozen=True)
class ConstructedCurve:
    curve: CurveModel
    t: Fraction
    d_class: int
    target: str
    verified: bool = False
    torsion: TorsionStructure | None = None

    @property
    def j_invariant(self) -> Fraction:
        return self.curve.j_invariant

    def to_json(self) -> dict:
        out = dict(self.curve.to_strings())
        out.update(
            t=str(self.t),
            d_class=self.d_class,
            target=self.target,
            verified=self.verified,
            j_invariant=str(self.j_invariant),
        )
        if self.torsion is not None:
            out["torsion"] = self.torsion.label()
        return out


def _d_class(value: Fraction, hint: int | None = None) -> int:
    """Squarefree class of d(t); ``hint`` is tried first to avoid factoring
    the (possibly huge) numerator of d(t)."""
    value = Fraction(value)
    if value == 0:
        raise ExcludedParameter("d(t) = 0")
    if hint is not None and hint != 1 and _sqrt(value / hint) is not None:
        return hint
    s = squarefree_part(value.numerator * value.denominator)[0]
    if s == 1:
        raise ExcludedParameter(f"d(t) = {value} is a square; the field would be Q")
    return s


def _build(a1, a2, a3, t, d_class, target) -> ConstructedCurve:
    try:
        E = CurveModel(a1, a2, a3, 0, 0)
    except SingularCurve as exc:
        raise ExcludedParameter(f"t = {t} gives a singular curve") from exc
    return ConstructedCurve(E, t, d_class, target)


def jkl_curve_2_10(t, d_hint: int | None = None) -> ConstructedCurve:
    """y^2 + (1 - c)xy - by = x^3 - bx^2 acquiring Z/2 x Z/10 over Q(sqrt d(t))."""
    t = Fraction(t)
    if t in (0, Fraction(1, 2), 1):
        raise ExcludedParameter(f"t = {t} is excluded")
    q = t * t - 3 * t + 1
    if q == 0:
        raise ExcludedParameter("t^2 - 3t + 1 = 0")
    s = 2 * t * t - 3 * t + 1
    b = t**3 * s / q**2
    c = -t * s / q
    d = 8 * t**3 - 8 * t * t + 1
    return _build(1 - c, -b, -b, t, _d_class(d, d_hint), "2x10")


def jkl_curve_2_12(t, d_hint: int | None = None) -> ConstructedCurve:
    """y^2 + (1 - c)xy - (c + c^2)y = x^3 - (c + c^2)x^2 acquiring Z/2 x Z/12."""
    t = Fraction(t)
    if t in (-1, 0, 1):
        raise ExcludedParameter(f"t = {t} is excluded")
    c = (1 - t * t) / (t**4 + 3 * t * t)
    e = c + c * c
    d = (t * t - 1) * (t * t + 3)
    return _build(1 - c, -e, -e, t, _d_class(d, d_hint), "2x12")


def _unscale(P: Point, d: int) -> tuple[Fraction, Fraction]:
    if P.is_infinity:
        raise InfinityPoint("the point at infinity has no parameter")
    return P.x / d, P.y / (d * d)


def point_to_parameter_2_10(P: Point, d: int = 1) -> Fraction:
    """t = (x + 1)/2 for P = (X, Y) on the scaled twist, x = X/d."""
    x, _ = _unscale(P, d)
    return (x + 1) / 2


def point_to_parameter_2_12(P: Point, d: int = 1) -> tuple[Fraction, Fraction]:
    """(t, z) on d z^2 = (t^2 - 1)(t^2 + 3) for P on the scaled twist."""
    x, y = _unscale(P, d)
    if x == 1:
        raise ExceptionalX("x = 1 is the pole of t = (x + 1)/(x - 1)")
    return (x + 1) / (x - 1), 4 * y / (x - 1) ** 2


def parameter_to_point_2_10(t, d: int) -> Point:
    """Inverse of :func:`point_to_parameter_2_10` when d(t) / d is a square."""
    t = Fraction(t)
    x = 2 * t - 1
    y2 = (x**3 + x * x - x) / d
    y = _sqrt(y2)
    if y is None:
        raise ValueError(f"d(t)/d = {y2} is not a square")
    return Point(x * d, y * d * d)


def parameter_to_point_2_12(t, d: int) -> Point:
    t = Fraction(t)
    if t == 1:
        raise ExcludedParameter("t = 1 has no preimage")
    x = (t + 1) / (t - 1)
    y2 = (x**3 - x * x + x) / d
    y = _sqrt(y2)
    if y is None:
        raise ValueError(f"{y2} is not a square")
    return Point(x * d, y * d * d)


def _sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    n, m = isqrt(q.numerator), isqrt(q.denominator)
    if n * n == q.numerator and m * m == q.denominator:
        return Fraction(n, m)
    return None


def _candidates(E: TwoTorsionModel, height: int, count: int) -> list[Point]:
    """Searched points, then small multiples and torsion translates of the
    non-torsion ones, in a deterministic order."""
    found = point_search(E, height)
    pts = [fp.point for fp in found]
    torsion = [fp.point for fp in found if fp.is_torsion]
    gens = [fp.point for fp in found if not fp.is_torsion]
    for P in gens[:4]:
        for k in range(2, count + 3):
            Q = scalar_mul(E.model, k, P)
            pts.append(Q)
            pts.extend(add_points(E.model, Q, T) for T in torsion)
    seen, out = set(), []
    for P in pts:
        if not P.is_infinity and P not in seen:
            seen.add(P)
            out.append(P)
    return out


def construct_torsion_curves(
    target: str, d: int, count: int = 1, height_bound: int = 10**4, bound: int = DEFAULT_BOUND
) -> list[ConstructedCurve]:
    """Curves over Q whose torsion over Q(sqrt d) is Z/2 x Z/10 or Z/2 x Z/12.

    Rational points on the d-twist of X1(2,10) (resp. X1(2,12)) are mapped to
    parameters t and then to curves; each curve's torsion over Q(sqrt d) is
    recomputed and only exact matches are returned, with distinct
    j-invariants.  Raises NoPointsFound, carrying the descent report and (if
    d is in a certified family) a rank-zero certificate, when nothing works.
    """
    if target not in TARGETS:
        raise ValueError(f"unknown target {target!r}; expected one of {sorted(TARGETS)}")
    if count < 1:
        raise ValueError("count must be >= 1")
    d = int(d)
    if d in (0, 1) or not is_squarefree(d):
        raise NotSquarefree(f"{d} is not a squarefree integer != 0, 1")
    fid, (m, mn) = TARGETS[target]
    E = family_twist(fid, d)
    out: list[ConstructedCurve] = []
    js = set()
    for P in _candidates(E, height_bound, count):
        try:
            if fid is FamilyId.X1_2_10:
                cc = jkl_curve_2_10(point_to_parameter_2_10(P, d), d)
            else:
                cc = jkl_curve_2_12(point_to_parameter_2_12(P, d)[0], d)
        except (ExcludedParameter, ExceptionalX):
            continue
        if cc.d_class != d or cc.j_invariant in js:
            continue
        T = torsion_over_quadratic(cc.curve, d)
        if not T.is_group(m, mn):
            continue
        js.add(cc.j_invariant)
        out.append(ConstructedCurve(cc.curve, cc.t, cc.d_class, target, True, T))
        if len(out) >= count:
            break
    if not out:
        report = rank_bounds(E, bound)
        prover = prove_rank_zero_2_10 if fid is FamilyId.X1_2_10 else prove_rank_zero_2_12
        try:
            cert = prover(d)
        except NotInFamily:
            cert = None
        raise NoPointsFound(
            f"no {target} curve over Q(sqrt {d}) from points of height <= {height_bound}",
            report,
            cert,
        )
    return out
