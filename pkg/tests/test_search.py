from fractions import Fraction
from math import gcd, isqrt

from hypothesis import assume, given, strategies as st

from twistrank.curves import CurveModel, Point, TwoTorsionModel
from twistrank.search import first_quartic_square, point_search, quartic_squares


def brute_quartic(c4, c2, c0, bound):
    best = None
    for l in range(bound + 1):
        for m in range(bound + 1):
            if (l, m) == (0, 0) or gcd(l, m) != 1:
                continue
            v = c4 * l**4 + c2 * l * l * m * m + c0 * m**4
            if v >= 0 and isqrt(v) ** 2 == v:
                key = (max(l, m), l, m)
                if best is None or key < best:
                    best = key
    return best


@given(st.integers(-30, 30).filter(bool), st.integers(-30, 30), st.integers(-30, 30).filter(bool))
def test_first_quartic_square_is_minimal(c4, c2, c0):
    hit = first_quartic_square(c4, c2, c0, 14)
    best = brute_quartic(c4, c2, c0, 14)
    if best is None:
        assert hit is None
    else:
        l, m, n = hit
        assert n * n == c4 * l**4 + c2 * l * l * m * m + c0 * m**4
        assert max(l, m) == best[0]


@given(st.integers(-30, 30).filter(bool), st.integers(-30, 30), st.integers(-30, 30).filter(bool))
def test_quartic_squares_complete(c4, c2, c0):
    got = {(l, m) for l, m, _ in quartic_squares(c4, c2, c0, 10, 10)}
    want = set()
    for l in range(11):
        for m in range(1, 11):
            if gcd(l, m) == 1:
                v = c4 * l**4 + c2 * l * l * m * m + c0 * m**4
                if v >= 0 and isqrt(v) ** 2 == v:
                    want.add((l, m))
    if c4 >= 0 and isqrt(c4) ** 2 == c4:
        want.add((1, 0))
    assert got == want


def brute_points(a, b, H):
    pts = set()
    for v in range(1, H + 1):
        for u in range(-H, H + 1):
            if gcd(u, v) != 1:
                continue
            x = Fraction(u, v * v)
            y2 = x * (x * x + a * x + b)
            if y2 >= 0 and isqrt(y2.numerator) ** 2 == y2.numerator and isqrt(y2.denominator) ** 2 == y2.denominator:
                y = Fraction(isqrt(y2.numerator), isqrt(y2.denominator))
                pts |= {Point(x, y), Point(x, -y)}
    return pts


@given(st.integers(-15, 15), st.integers(-15, 15).filter(bool))
def test_point_search_is_exhaustive(a, b):
    assume(a * a != 4 * b)
    E = TwoTorsionModel(a, b)
    found = {fp.point for fp in point_search(E, 12)}
    assert found == brute_points(a, b, 12)


def test_point_search_examples():
    found = point_search(CurveModel(0, 1, 0, -1, 0), 10)
    pts = {fp.point for fp in found}
    assert {Point(0, 0), Point(1, 1), Point(1, -1)} <= pts
    assert all(fp.is_torsion for fp in found)
    E = CurveModel(0, -1, -1, 0, 0)  # no rational 2-torsion: short-model path
    found = point_search(E, 100)  # heights measured on the integral short model
    assert all(E.contains(fp.point) for fp in found)
    assert {fp.point for fp in found} == {Point(0, 0), Point(0, 1), Point(1, 0), Point(1, 1)}
    assert {fp.torsion_order for fp in found} == {5}
    assert point_search(TwoTorsionModel(3, 7), 1)[0].point == Point(0, 0)
