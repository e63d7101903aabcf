"""Local solubility at p and at the real place.

``quartic_soluble_qp`` decides whether y^2 = g(x, z) has a point over Q_p for
a binary quartic g with integer coefficients.  It walks residue discs
x0 + p^k Z_p and stops a branch when either

* Hensel applies at the centre (v(g) > 2 v(g')), so g has a p-adic root, or
* g is constant up to squares on the whole disc, so one evaluation decides.

Away from the roots of g the second condition is reached after finitely many
refinements; near a simple root the first is, so the walk terminates for
squarefree g.
"""
from __future__ import annotations

from fractions import Fraction
from math import comb

from .arith import valuation

BIG = 1 << 30


def _v(n: int, p: int) -> int:
    if n == 0:
        return BIG
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def is_qp_square(n: int | Fraction, p: int) -> bool:
    """Whether a rational is a square in Q_p (0 counts as a square)."""
    x = Fraction(n)
    if x == 0:
        return True
    v = valuation(x, p)
    if v % 2:
        return False
    u = qp_unit_part(x, p)
    if p == 2:
        return u % 8 == 1
    return pow(u % p, (p - 1) // 2, p) == 1


def qp_unit_part(x: Fraction, p: int) -> int:
    """An integer congruent to the unit part of x, good modulo p^3."""
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
    while den % p == 0:
        den //= p
    mod = p**3
    return num * pow(den, -1, mod) % mod


def qp_square_class(x: Fraction | int, p: int) -> tuple[int, int]:
    """Class of a nonzero rational in Q_p*/Q_p*^2 as (v mod 2, unit tag)."""
    x = Fraction(x)
    v = valuation(x, p) % 2
    u = qp_unit_part(x, p)
    if p == 2:
        return (v, u % 8)
    return (v, 1 if pow(u % p, (p - 1) // 2, p) == 1 else -1)


def _eval(c: list[int], x: int) -> int:
    acc = 0
    for a in c:
        acc = acc * x + a
    return acc


def _deriv(c: list[int]) -> list[int]:
    n = len(c) - 1
    return [a * (n - i) for i, a in enumerate(c[:-1])]


def _shift(c: list[int], x0: int, step: int) -> list[int]:
    """Coefficients (highest first) of g(x0 + step * t) as a polynomial in t."""
    n = len(c) - 1
    low = list(reversed(c))  # low[i] = coeff of x^i
    out = [0] * (n + 1)
    for i, a in enumerate(low):
        if a == 0:
            continue
        for j in range(i + 1):
            out[j] += a * comb(i, j) * x0 ** (i - j) * step**j
    return list(reversed(out))


def _disc_soluble(c: list[int], x0: int, step: int, p: int, depth: int = 0) -> bool:
    gx = _eval(c, x0)
    if gx == 0:
        return True
    dg = _eval(_deriv(c), x0)
    if dg != 0 and _v(gx, p) > 2 * _v(dg, p):
        return True
    h = _shift(c, x0, step)
    v0 = _v(h[-1], p)
    vrest = min(_v(a, p) for a in h[:-1])
    if vrest >= v0 + (3 if p == 2 else 1):
        return is_qp_square(gx, p)
    if depth > 200:
        raise RuntimeError(f"p-adic disc walk did not terminate at p={p}")
    return any(_disc_soluble(c, x0 + step * i, step * p, p, depth + 1) for i in range(p))


def quartic_soluble_qp(coeffs: list[int], p: int) -> bool:
    """Whether y^2 = c0 x^4 + c1 x^3 z + ... + c4 z^4 has a Q_p point (x:z) != 0."""
    c = [int(a) for a in coeffs]
    return _disc_soluble(c, 0, 1, p) or _disc_soluble(c[::-1], 0, p, p)


def even_quartic_soluble_real(r: int, a: int, s: int) -> bool:
    """Whether r X^2 + a X + s >= 0 for some X >= 0 (X = x^2 / z^2, or z = 0)."""
    if r > 0 or s >= 0:
        return True
    # r < 0, s < 0: maximum over X >= 0 is at X = -a / 2r when a > 0
    if a <= 0:
        return False
    return a * a - 4 * r * s >= 0


def local_image_full_two(roots: tuple[Fraction, Fraction, Fraction], p: int) -> set:
    """Image of E(Q_p) in (Q_p*/Q_p*^2)^2 under P -> (x - e1, x - e2).

    E is y^2 = (x - e1)(x - e2)(x - e3) with rational roots.  The image has
    order 4 for odd p and 8 for p = 2; it is collected from exact rational
    sample points (plus the 2-torsion) and closed under products until it
    reaches that size.
    """
    e1, e2, e3 = (Fraction(e) for e in roots)
    target = 8 if p == 2 else 4
    cls = lambda z: qp_square_class(z, p)

    def mul(a, b):
        if p == 2:
            return ((a[0] + b[0]) % 2, a[1] * b[1] % 8)
        return ((a[0] + b[0]) % 2, a[1] * b[1])

    img: set = set()

    def add(pair):
        todo = [pair]
        while todo:
            q = todo.pop()
            if q in img:
                continue
            for o in list(img):
                todo.append((mul(q[0], o[0]), mul(q[1], o[1])))
            img.add(q)

    one = cls(1)
    add((one, one))
    add((cls((e1 - e2) * (e1 - e3)), cls(e1 - e2)))
    add((cls(e2 - e1), cls((e2 - e1) * (e2 - e3))))
    add((cls(e3 - e1), cls(e3 - e2)))

    span = 4
    centres = (Fraction(0), e1, e2, e3)
    while len(img) < target:
        for c in centres:
            for s in range(-4, 9):
                scale = Fraction(p) ** s
                for n in range(-span, span + 1):
                    if n == 0:
                        continue
                    x = c + n * scale
                    f = (x - e1) * (x - e2) * (x - e3)
                    if f != 0 and is_qp_square(f, p):
                        add((cls(x - e1), cls(x - e2)))
                if len(img) >= target:
                    break
        span *= 2
        if span > 1 << 14:
            raise RuntimeError(f"could not complete local image at p={p}")
    return img


def real_image_full_two(roots) -> set:
    """Sign pairs of (x - e1, x - e2) over E(R) for three real roots."""
    e1, e2, e3 = (Fraction(e) for e in roots)
    lo, mid, hi = sorted((e1, e2, e3))
    out = set()
    for x in (hi + 1, (lo + mid) / 2):
        out.add((x - e1 > 0, x - e2 > 0))
    out.add(((e1 - e2) * (e1 - e3) > 0, e1 - e2 > 0))
    out.add((e2 - e1 > 0, (e2 - e1) * (e2 - e3) > 0))
    out.add((e3 - e1 > 0, e3 - e2 > 0))
    return out
