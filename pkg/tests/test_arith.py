import random

import pytest
from hypothesis import given, strategies as st

from oracles import kronecker_oracle, legendre_bruteforce
from twistrank.arith import (
    Factorization,
    NonPositive,
    NotPrime,
    ZeroInput,
    ZeroResidue,
    euler_phi,
    factorize,
    is_quadratic_residue,
    is_squarefree,
    kronecker,
    primes_up_to,
    squarefree_divisors,
    squarefree_part,
)

nonzero = st.integers(-10**9, 10**9).filter(lambda n: n != 0)


def test_factorize_examples():
    assert factorize(45) == Factorization(1, ((3, 2), (5, 1)))
    assert factorize(-59) == Factorization(-1, ((59, 1),))
    assert factorize(1) == Factorization(1, ())
    with pytest.raises(ZeroInput):
        factorize(0)


@given(nonzero)
def test_factorize_reconstructs(n):
    f = factorize(n)
    assert f.value() == n
    assert list(f.primes) == sorted(f.primes)


def test_squarefree_part_examples():
    assert squarefree_part(12) == (3, 2)
    assert squarefree_part(-45) == (-5, 3)
    assert squarefree_part(7) == (7, 1)
    with pytest.raises(ZeroInput):
        squarefree_part(0)


@given(nonzero)
def test_squarefree_part_reconstruction(n):
    s, f = squarefree_part(n)
    assert s * f * f == n and f >= 1
    assert is_squarefree(s) and (s > 0) == (n > 0)


def test_squarefree_divisors_examples():
    assert squarefree_divisors(45) == {1, -1, 3, -3, 5, -5, 15, -15}
    assert squarefree_divisors(1) == {1, -1}
    assert squarefree_divisors(-4) == {1, -1, 2, -2}


@given(st.integers(-10**6, 10**6).filter(lambda n: n != 0))
def test_squarefree_divisor_count(n):
    divs = squarefree_divisors(n)
    assert len(divs) == 2 ** (len(factorize(n).primes) + 1)
    assert all(n % r == 0 and is_squarefree(r) for r in divs)


def test_kronecker_examples():
    assert kronecker(-59, 5) == 1
    assert kronecker(2, 7) == 1
    assert kronecker(5, 1) == 1


@given(st.integers(-500, 500), st.integers(-500, 500))
def test_kronecker_matches_definition(a, n):
    assert kronecker(a, n) == kronecker_oracle(a, n)


@given(st.integers(-300, 300), st.integers(-300, 300), st.integers(-300, 300))
def test_kronecker_multiplicative(a, b, n):
    assert kronecker(a * b, n) == kronecker(a, n) * kronecker(b, n)
    assert kronecker(a, b * n) == kronecker(a, b) * kronecker(a, n)


def test_quadratic_residue_examples():
    assert is_quadratic_residue(-1, 7) is False
    assert is_quadratic_residue(5, 11) is True
    assert is_quadratic_residue(1, 13) is True
    with pytest.raises(ZeroResidue):
        is_quadratic_residue(14, 7)
    with pytest.raises(NotPrime):
        is_quadratic_residue(3, 9)
    with pytest.raises(NotPrime):
        is_quadratic_residue(3, 2)


def test_kronecker_agrees_with_residues():
    rng = random.Random(1)
    odd_primes = primes_up_to(2000)[1:]
    for _ in range(1000):
        p = rng.choice(odd_primes)
        a = rng.randrange(-10**6, 10**6)
        if a % p == 0:
            continue
        assert (kronecker(a, p) == 1) == is_quadratic_residue(a, p) == (legendre_bruteforce(a, p) == 1)


def test_euler_phi():
    assert euler_phi(25) == 20
    assert euler_phi(1) == 1
    assert euler_phi(20) == 8
    with pytest.raises(NonPositive):
        euler_phi(0)


@given(st.integers(1, 3000))
def test_euler_phi_counts_units(n):
    from math import gcd

    assert euler_phi(n) == sum(1 for k in range(1, n + 1) if gcd(k, n) == 1)


def test_small_prime_factors():
    from twistrank.arith import small_prime_factors

    assert small_prime_factors(2**4 * 3 * 101) == [2, 3, 101]
    big = 1000003 * 1000033
    assert small_prime_factors(6 * big) == [2, 3]  # large cofactor left unsplit
    with pytest.raises(ValueError):
        small_prime_factors(0)
