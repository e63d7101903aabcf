from fractions import Fraction
from math import isqrt

import pytest
import sympy
from hypothesis import assume, given, strategies as st

from oracles import is_rational_square
from twistrank.curves import (
    INFINITY,
    CurveModel,
    NoRationalTwoTorsion,
    OutOfRange,
    Point,
    PointNotOnCurve,
    SingularCurve,
    SingularIsogenyTarget,
    TwoTorsionModel,
    add_points,
    division_polynomial,
    dual_isogeny,
    scalar_mul,
    short_model,
    to_two_torsion_model,
    twist,
    two_isogeny,
)
from twistrank.quadfield import MixedFields, NotSquarefree, QuadElem

X210 = CurveModel(0, 1, 0, -1, 0)
X212 = CurveModel(0, -1, 0, 1, 0)
X111 = CurveModel(0, -1, -1, 0, 0)

small = st.integers(-12, 12)
nz = small.filter(lambda v: v != 0)


@st.composite
def curve_with_point(draw):
    """y^2 = x(x^2 + ax + b) built through a chosen rational point."""
    x0 = Fraction(draw(nz), draw(st.integers(1, 4)) ** 2)
    y0 = Fraction(draw(small), draw(st.integers(1, 4)) ** 3)
    a = Fraction(draw(small))
    b = y0 * y0 / x0 - x0 * x0 - a * x0
    assume(b != 0 and a * a != 4 * b)
    return TwoTorsionModel(a, b), Point(x0, y0)


def test_twist_examples():
    p = 7
    assert twist(TwoTorsionModel(1, -1), -p) == TwoTorsionModel(-p, -p * p)
    assert twist(TwoTorsionModel(-1, 1), 5) == TwoTorsionModel(-5, 25)
    E = TwoTorsionModel(3, 2)
    assert twist(E, 1) == E
    with pytest.raises(NotSquarefree):
        twist(E, 12)


@given(small, nz, st.sampled_from([-1, 2, -3, 5, -7, 10, 21, -59]))
def test_twice_twisted_is_isomorphic(a, b, d):
    assume(a * a != 4 * b)
    E = TwoTorsionModel(a, b)
    E2 = twist(twist(E, d), d)
    # (a d^2, b d^4): the same curve after x -> d^2 x
    assert (E2.a, E2.b) == (a * d * d, b * d**4)
    assert E2.model.j_invariant == E.model.j_invariant


def test_addition_examples():
    P = Point(1, 1)
    assert add_points(X210, P, INFINITY) == P
    assert add_points(X210, P, P) == Point(1, -1)
    T = Point(0, 0)
    assert add_points(TwoTorsionModel(3, 7), T, T) == INFINITY
    with pytest.raises(PointNotOnCurve):
        add_points(X210, Point(2, 2), P)


def test_mixed_field_points():
    E = CurveModel(0, 0, 0, -5, 0)
    P = Point(QuadElem(0, 0, 5), QuadElem(0, 0, 5))
    with pytest.raises(MixedFields):
        add_points(E, P, Point(QuadElem(0, 0, 3), QuadElem(0, 0, 3)))


def test_scalar_mul_examples():
    assert scalar_mul(X210, 3, Point(1, 1)) == INFINITY
    assert scalar_mul(X210, 2, Point(0, 0)) == INFINITY
    assert scalar_mul(X210, 1, Point(1, 1)) == Point(1, 1)
    assert scalar_mul(X210, 0, Point(1, 1)) == INFINITY


@given(curve_with_point(), st.integers(-5, 5), st.integers(-5, 5))
def test_group_law_is_linear(cp, j, k):
    E, P = cp
    lhs = scalar_mul(E.model, j + k, P)
    rhs = add_points(E.model, scalar_mul(E.model, j, P), scalar_mul(E.model, k, P))
    assert lhs == rhs
    assert lhs.is_infinity or E.contains(lhs)


@given(curve_with_point(), curve_with_point())
def test_associativity(c1, c2):
    E, P = c1
    Q = scalar_mul(E.model, 2, P)
    T = Point(0, 0)
    assert add_points(E, add_points(E, P, Q), T) == add_points(E, P, add_points(E, Q, T))


def test_two_isogeny_examples():
    Ep, phi = two_isogeny(TwoTorsionModel(-3, -9))
    assert Ep == TwoTorsionModel(6, 45)
    assert two_isogeny(TwoTorsionModel(0, -1))[0] == TwoTorsionModel(0, 4)
    for d in (-11, 7, 21):
        assert two_isogeny(twist(TwoTorsionModel(-1, 1), d))[0] == TwoTorsionModel(2 * d, -3 * d * d)
    assert phi(Point(0, 0)) == INFINITY


def test_singular_inputs():
    with pytest.raises(SingularCurve):
        TwoTorsionModel(2, 1)
    with pytest.raises(SingularCurve):
        TwoTorsionModel(1, 0)
    with pytest.raises(SingularCurve):
        CurveModel(0, 0, 0, 0, 0)


def test_dual_isogeny_examples():
    E = TwoTorsionModel(1, -1)
    Ep, phi = two_isogeny(E)
    dual = dual_isogeny(Ep)
    assert dual(phi(Point(1, 1))) == Point(1, -1)
    assert dual(phi(Point(0, 0))) == INFINITY
    assert dual.target == E


@given(curve_with_point(), st.integers(-3, 3))
def test_dual_after_phi_is_doubling(cp, k):
    E, P = cp
    P = add_points(E, scalar_mul(E.model, k, P), P)
    Ep, phi = two_isogeny(E)
    Q = phi(P)
    assert Q.is_infinity or Ep.contains(Q)
    assert dual_isogeny(Ep)(Q) == scalar_mul(E.model, 2, P)


def test_division_polynomials():
    x = sympy.Symbol("x")
    E = TwoTorsionModel(3, -5)
    f2 = division_polynomial(E.model, 2)
    ratio = sympy.cancel(f2.as_expr() / (x * (x * x + 3 * x - 5)))
    assert ratio.is_number
    assert division_polynomial(E.model, 1).as_expr() == 1
    assert division_polynomial(X210, 3).eval(1) == 0
    with pytest.raises(OutOfRange):
        division_polynomial(X210, 25)
    with pytest.raises(OutOfRange):
        division_polynomial(X210, 0)


@given(curve_with_point(), st.sampled_from([3, 4, 5, 6]))
def test_division_polynomial_roots_are_torsion(cp, m):
    E, _ = cp
    psi = division_polynomial(E.model, m)
    for r in sympy.Poly(psi, sympy.Symbol("x")).ground_roots():
        xr = Fraction(int(r.p), int(r.q))
        y2 = xr * (xr * xr + E.a * xr + E.b)
        if is_rational_square(y2):
            y = Fraction(isqrt(y2.numerator), isqrt(y2.denominator))
            assert scalar_mul(E.model, m, Point(xr, y)) == INFINITY


def test_to_two_torsion_model_examples():
    assert to_two_torsion_model(X210)[0] == TwoTorsionModel(1, -1)
    assert to_two_torsion_model(X212)[0] == TwoTorsionModel(-1, 1)
    with pytest.raises(NoRationalTwoTorsion):
        to_two_torsion_model(X111)


@given(st.integers(-5, 5), st.integers(-5, 5), st.integers(-5, 5), small, small)
def test_change_of_coordinates_round_trip(a1, a2, a3, a4, a6):
    try:
        E = CurveModel(a1, a2, a3, a4, a6)
    except SingularCurve:
        assume(False)
    S = short_model(E)
    assert S.model.j_invariant == E.j_invariant
    assert S.iso.apply_curve(E) == S.model


def test_serialisation_round_trip():
    E = CurveModel(Fraction(1, 2), -3, Fraction(-7, 5), 0, 11)
    assert CurveModel.from_strings(E.to_strings()) == E
    assert E.to_strings()["a1"] == "1/2"


def test_singular_isogeny_target_is_reported():
    # a^2 = 4b makes E itself singular, so the target error surfaces as SingularCurve
    with pytest.raises((SingularCurve, SingularIsogenyTarget)):
        two_isogeny(TwoTorsionModel(4, 4))
