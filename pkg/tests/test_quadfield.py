from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from twistrank.quadfield import MixedFields, NotSquarefree, QuadElem, roots_in_field, sqrt_in_field

rats = st.fractions(max_denominator=50).filter(lambda q: abs(q) < 1000)
ds = st.sampled_from([-1, -3, -23, -59, 2, 5, 21, 33])


@given(rats, rats, rats, rats, ds)
def test_field_arithmetic(u1, v1, u2, v2, d):
    x, y = QuadElem(u1, v1, d), QuadElem(u2, v2, d)
    assert (x + y) - y == x
    assert x * y == y * x
    assert x.norm() == (x * x.conjugate()).u
    if x.norm() != 0:
        assert x * x.inverse() == 1
        assert (y / x) * x == y


def test_mixed_fields_rejected():
    with pytest.raises(MixedFields):
        QuadElem(1, 1, 5) + QuadElem(1, 1, 3)


def test_checked_constructor():
    with pytest.raises(NotSquarefree):
        QuadElem.checked(1, 1, 12)


def test_rational_values_compare_as_fractions():
    assert QuadElem(Fraction(3, 2), 0, 7) == Fraction(3, 2)
    assert hash(QuadElem(Fraction(3, 2), 0, 7)) == hash(Fraction(3, 2))


@given(rats, rats, ds)
def test_sqrt_of_square(u, v, d):
    z = QuadElem(u, v, d)
    s = sqrt_in_field(z * z, d)
    assert s is not None and s * s == z * z


def test_roots_in_field():
    assert sorted(roots_in_field([1, 0, -4], None)) == [-2, 2]
    r = roots_in_field([1, 0, 5], -5)
    assert len(r) == 2 and all(x * x == -5 for x in r)
    assert roots_in_field([1, 0, 5], None) == []
    # irrational coefficients: (x - sqrt 2)(x - 1)
    s = QuadElem(0, 1, 2)
    r = roots_in_field([1, -(s + 1), s], 2)
    assert set(map(str, r)) == {str(s), str(QuadElem(1, 0, 2))}
