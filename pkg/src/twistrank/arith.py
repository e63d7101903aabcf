"""Exact integer arithmetic and elementary number theory.

Everything here works on Python ints / ``fractions.Fraction`` and is pure.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import isqrt

import sympy

__all__ = [
    "ZeroInput",
    "NotPrime",
    "NonPositive",
    "ZeroResidue",
    "FactorizationTimeout",
    "Factorization",
    "factorize",
    "squarefree_part",
    "is_squarefree",
    "squarefree_divisors",
    "kronecker",
    "is_quadratic_residue",
    "euler_phi",
    "is_prime",
    "primes_up_to",
    "is_square",
    "rational_squarefree_class",
    "valuation",
    "small_prime_factors",
]

#: documented working range for :func:`factorize`
FACTOR_LIMIT = 1 << 128


class ZeroInput(ValueError):
    pass


class NotPrime(ValueError):
    pass


class NonPositive(ValueError):
    pass


class ZeroResidue(ValueError):
    """Raised by :func:`is_quadratic_residue` when the prime divides ``a``."""


class FactorizationTimeout(RuntimeError):
    pass


@dataclass(frozen=True)
class Factorization:
    sign: int
    factors: tuple[tuple[int, int], ...]

    def value(self) -> int:
        n = self.sign
        for p, e in self.factors:
            n *= p**e
        return n

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)


def is_prime(n: int) -> bool:
    return n > 1 and bool(sympy.isprime(n))


@lru_cache(maxsize=4096)
def _factor_abs(n: int) -> tuple[tuple[int, int], ...]:
    fac = sympy.factorint(n)
    for p in fac:
        if not sympy.isprime(p):
            raise FactorizationTimeout(f"could not split cofactor {p}")
    return tuple(sorted((int(p), int(e)) for p, e in fac.items()))


def factorize(n: int) -> Factorization:
    """Factor a nonzero integer; ``factorize(-45)`` gives ``(-1, ((3, 2), (5, 1)))``."""
    n = int(n)
    if n == 0:
        raise ZeroInput("cannot factor 0")
    sign = -1 if n < 0 else 1
    if abs(n) == 1:
        return Factorization(sign, ())
    return Factorization(sign, _factor_abs(abs(n)))


def squarefree_part(n: int) -> tuple[int, int]:
    """Return ``(s, f)`` with ``n == s * f**2``, ``s`` squarefree carrying the sign of n."""
    fac = factorize(n)
    s, f = fac.sign, 1
    for p, e in fac.factors:
        if e % 2:
            s *= p
        f *= p ** (e // 2)
    return s, f


def is_squarefree(n: int) -> bool:
    if n == 0:
        return False
    return all(e == 1 for _, e in factorize(n).factors)


def squarefree_divisors(n: int) -> set[int]:
    """All signed squarefree divisors of ``n`` (both signs)."""
    primes = factorize(n).primes
    out = set()
    for bits in product((0, 1), repeat=len(primes)):
        r = 1
        for p, b in zip(primes, bits):
            if b:
                r *= p
        out.add(r)
        out.add(-r)
    return out


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n), defined for all integers a, n."""
    a, n = int(a), int(n)
    if n == 0:
        return 1 if abs(a) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    # factor out powers of two from n
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 and a % 8 in (3, 5):
            result = -result
    # now n odd positive: Jacobi symbol
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def is_quadratic_residue(a: int, p: int) -> bool:
    """Whether ``a`` is a nonzero square mod the odd prime ``p``.

    Raises :class:`ZeroResidue` when ``p | a`` so callers can't confuse the
    zero class with a residue.
    """
    if p == 2 or not is_prime(p):
        raise NotPrime(f"{p} is not an odd prime")
    if a % p == 0:
        raise ZeroResidue(f"{p} divides {a}")
    return pow(a % p, (p - 1) // 2, p) == 1


def euler_phi(n: int) -> int:
    if n < 1:
        raise NonPositive(f"phi undefined for {n}")
    out = n
    for p, _ in factorize(n).factors:
        out = out // p * (p - 1)
    return out


def primes_up_to(n: int) -> list[int]:
    return list(sympy.primerange(2, n + 1))


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def valuation(n: int | Fraction, p: int) -> int:
    """p-adic valuation of a nonzero rational."""
    x = Fraction(n)
    if x == 0:
        raise ZeroInput("valuation of 0")
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def rational_squarefree_class(x: Fraction | int) -> int:
    """Signed squarefree representative of ``x`` in Q*/Q*^2."""
    x = Fraction(x)
    if x == 0:
        raise ZeroInput("0 has no square class")
    return squarefree_part(x.numerator * x.denominator)[0]


def small_prime_factors(n: int, limit: int = 10**5) -> list[int]:
    """Primes below ``limit`` dividing n (a cofactor may remain unsplit)."""
    n = abs(int(n))
    if n == 0:
        raise ZeroInput("0 is divisible by every prime")
    return sorted(int(p) for p in sympy.factorint(n, limit=limit) if p < limit)
