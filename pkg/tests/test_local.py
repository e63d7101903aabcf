from fractions import Fraction
from itertools import product

import pytest
from hypothesis import assume, given, strategies as st

from twistrank.local import (
    even_quartic_soluble_real,
    is_qp_square,
    local_image_full_two,
    qp_square_class,
    quartic_soluble_qp,
    real_image_full_two,
)

PRIMES = [2, 3, 5, 7, 11, 13]


def soluble_mod_pk(coeffs, p, k):
    """Necessary condition: y^2 = g(x, z) mod p^k with (x, z) primitive."""
    q = p**k
    squares = {y * y % q for y in range(q)}
    for x, z in product(range(q), repeat=2):
        if x % p == 0 and z % p == 0:
            continue
        g = sum(c * x ** (4 - i) * z**i for i, c in enumerate(coeffs)) % q
        if g in squares:
            return True
    return False


def test_square_classes():
    assert is_qp_square(17, 2) and not is_qp_square(5, 2) and not is_qp_square(2, 2)
    assert not is_qp_square(-1, 7) and is_qp_square(-1, 5)
    assert is_qp_square(Fraction(9, 49), 7) and not is_qp_square(7, 7)
    assert qp_square_class(12, 3) == qp_square_class(3, 3)
    assert qp_square_class(Fraction(1, 8), 2) == qp_square_class(2, 2)


@given(st.integers(-10**6, 10**6).filter(bool), st.sampled_from(PRIMES))
def test_squares_are_squares(n, p):
    assert is_qp_square(n * n, p)
    assert qp_square_class(n * n * 7, p) == qp_square_class(7, p)


@given(st.integers(-20, 20).filter(bool), st.integers(-20, 20), st.integers(0, 9),
       st.integers(0, 9), st.sampled_from(PRIMES))
def test_global_points_are_local_points(r, a, l, n, p):
    # choose s so that (l, 1, n) is a rational point of n^2 = r l^4 + a l^2 m^2 + s m^4
    s = n * n - r * l**4 - a * l * l
    assume(s != 0)
    assert quartic_soluble_qp([r, 0, a, 0, s], p)
    assert even_quartic_soluble_real(r, a, s)


@given(st.integers(-12, 12).filter(bool), st.integers(-12, 12), st.integers(-12, 12).filter(bool),
       st.sampled_from([3, 5, 7]))
def test_soluble_implies_congruence_solution(r, a, s, p):
    assume(a * a != 4 * r * s)
    if quartic_soluble_qp([r, 0, a, 0, s], p):
        assert soluble_mod_pk([r, 0, a, 0, s], p, 2)


@given(st.integers(-6, 6).filter(bool), st.integers(-6, 6), st.integers(-6, 6).filter(bool))
def test_soluble_at_two_implies_congruence_solution(r, a, s):
    assume(a * a != 4 * r * s)
    if quartic_soluble_qp([r, 0, a, 0, s], 2):
        assert soluble_mod_pk([r, 0, a, 0, s], 2, 4)


@pytest.mark.parametrize("p", [3, 7, 23, 43, 47])
def test_torsor_r_equals_p_is_obstructed_at_p(p):
    # n^2 = p l^4 + 2p l^2 m^2 + 5p m^4  (class p on the twist by -p of X1(2,10))
    assert not quartic_soluble_qp([p, 0, 2 * p, 0, 5 * p], p)


def test_real_place():
    assert not even_quartic_soluble_real(-1, -1, -1)
    assert even_quartic_soluble_real(-1, 4, -1)  # -X^2 + 4X - 1 > 0 at X = 2
    assert not even_quartic_soluble_real(-1, 1, -1)
    assert even_quartic_soluble_real(1, -100, -1)


@pytest.mark.parametrize("roots", [(0, 1, -1), (0, 5, -5), (0, 33, -11), (0, Fraction(1, 2), -3)])
def test_full_two_local_image_sizes(roots):
    roots = tuple(Fraction(e) for e in roots)
    for p in (2, 3, 5, 7, 11):
        assert len(local_image_full_two(roots, p)) == (8 if p == 2 else 4)
    assert len(real_image_full_two(roots)) == 2
