"""Searches for integral squares of even binary quartics, and rational points.

The inner loop is vectorised with numpy: candidate values are reduced modulo
a handful of small moduli and rejected unless they are squares modulo every
one of them; survivors are checked exactly with ``math.isqrt``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Iterator

import numpy as np

from .arith import squarefree_divisors
from .curves import (
    NoRationalTwoTorsion,
    Point,
    TwoTorsionModel,
    as_model,
    point_order,
    short_model,
    to_two_torsion_model,
)

_MODULI = (64, 63, 65, 11, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53)
_QR = {M: np.zeros(M, dtype=bool) for M in _MODULI}
for _M, _tab in _QR.items():
    _tab[(np.arange(_M, dtype=np.int64) ** 2) % _M] = True


def _sieve(c4: int, c2: int, c0: int, ls: np.ndarray, m: int) -> np.ndarray:
    """Indices i where c4 ls^4 + c2 ls^2 m^2 + c0 m^4 may be a square."""
    keep = np.ones(len(ls), dtype=bool)
    for M in _MODULI:
        lm = ls % M
        l2 = lm * lm % M
        m2 = (m % M) * (m % M) % M
        val = ((c4 % M) * (l2 * l2 % M) + (c2 % M) * (l2 * m2 % M) + (c0 % M) * (m2 * m2 % M)) % M
        keep &= _QR[M][val]
        if not keep.any():
            break
    return np.nonzero(keep)[0]


def quartic_squares(
    c4: int, c2: int, c0: int, l_max: int, m_max: int
) -> Iterator[tuple[int, int, int]]:
    """Coprime (l, m), 0 <= l <= l_max, 0 <= m <= m_max, with
    c4 l^4 + c2 l^2 m^2 + c0 m^4 = n^2; yields (l, m, n) with n >= 0.

    Both l and m only appear squared, so signs are not enumerated.  Pairs
    are visited column by column in m.
    """
    for m in range(0, m_max + 1):
        if m == 0:
            ls = np.array([1], dtype=np.int64)
        else:
            ls = np.arange(0, l_max + 1, dtype=np.int64)
        for i in _sieve(c4, c2, c0, ls, m):
            l = int(ls[i])
            if gcd(l, m) != 1:
                continue
            val = c4 * l**4 + c2 * l * l * m * m + c0 * m**4
            if val >= 0:
                n = isqrt(val)
                if n * n == val:
                    yield l, m, n


def first_quartic_square(c4: int, c2: int, c0: int, bound: int) -> tuple[int, int, int] | None:
    """A coprime solution of smallest height max(l, m) <= bound, if any.

    Works on growing square blocks [0, B]^2 so that cheap witnesses are
    found without touching the full grid.
    """
    B = 8
    done = -1
    while True:
        B = min(B, bound)
        L, M = _block_survivors(c4, c2, c0, B, done)
        cands = sorted(zip(np.maximum(L, M).tolist(), L.tolist(), M.tolist()))
        for _, l, m in cands:
            if (l, m) == (0, 0) or gcd(l, m) != 1:
                continue
            val = c4 * l**4 + c2 * l * l * m * m + c0 * m**4
            if val >= 0:
                n = isqrt(val)
                if n * n == val:
                    return l, m, n
        if B >= bound:
            return None
        done = B
        B *= 8


#: cells per strip when sieving a block; keeps temporaries to a few MB
_STRIP_CELLS = 1 << 21


def _block_survivors(c4: int, c2: int, c0: int, B: int, done: int):
    """Sieve survivors (l, m) in [0, B]^2 outside [0, done]^2, in row strips."""
    grid = np.arange(0, B + 1, dtype=np.int64)
    mod = _MODULI[0]
    g2 = grid % mod * (grid % mod) % mod
    g4 = g2 * g2 % mod
    step = max(1, _STRIP_CELLS // (B + 1))
    out_l, out_m = [], []
    for lo in range(0, B + 1, step):
        rows = slice(lo, min(B + 1, lo + step))
        # first modulus on the whole strip by broadcasting, then survivors only
        val = ((c4 % mod) * g4[rows, None] + (c2 % mod) * g2[rows, None] * g2[None, :]
               + (c0 % mod) * g4[None, :]) % mod
        keep = _QR[mod][val]
        if done >= 0 and lo <= done:
            keep[: done + 1 - lo, : done + 1] = False
        L, M = np.nonzero(keep)
        L = L + lo
        for m_ in _MODULI[1:]:
            l2 = L % m_ * (L % m_) % m_
            m2 = M % m_ * (M % m_) % m_
            val = ((c4 % m_) * (l2 * l2 % m_) + (c2 % m_) * (l2 * m2 % m_)
                   + (c0 % m_) * (m2 * m2 % m_)) % m_
            ok = _QR[m_][val]
            L, M = L[ok], M[ok]
        out_l.append(L)
        out_m.append(M)
    return np.concatenate(out_l), np.concatenate(out_m)


@dataclass(frozen=True)
class FoundPoint:
    point: Point
    torsion_order: int | None  # None: no finite order <= 24, so non-torsion

    @property
    def is_torsion(self) -> bool:
        return self.torsion_order is not None


def _integral_two_torsion(E: TwoTorsionModel) -> tuple[int, int, int]:
    """(a, b, k) with y^2 = x(x^2 + a x + b) integral after x -> k^2 x."""
    k = 1
    while (E.a * k * k).denominator != 1 or (E.b * k**4).denominator != 1:
        k += 1
    return int(E.a * k * k), int(E.b * k**4), k


def _search_two_torsion(a: int, b: int, height: int) -> list[Point]:
    pts = {Point(Fraction(0), Fraction(0))}
    for r in sorted(squarefree_divisors(b), key=lambda z: (abs(z), z < 0)):
        s = b // r
        l_max = isqrt(height // abs(r))
        if l_max < 1:
            continue
        for l, v, w in quartic_squares(r, a, s, l_max, height):
            if l == 0 or v == 0:
                continue
            if gcd(r * l * l, v) != 1:
                continue
            x = Fraction(r * l * l, v * v)
            y = Fraction(r * l * w, v**3)
            pts.add(Point(x, y))
            pts.add(Point(x, -y))
    return sorted(pts, key=lambda P: (abs(P.x.numerator) + P.x.denominator, P.x, P.y))


def _search_short(A: int, B: int, height: int) -> list[Point]:
    pts = set()
    us = np.arange(-height, height + 1, dtype=np.int64)
    for v in range(1, height + 1):
        v2 = v * v
        keep = np.ones(len(us), dtype=bool)
        for M in _MODULI:
            um = us % M
            v4 = v2 % M * (v2 % M) % M
            val = (um * um % M * um + (A % M) * um % M * v4 + (B % M) * (v4 * v2 % M)) % M
            keep &= _QR[M][val]
        for i in np.nonzero(keep)[0]:
            u = int(us[i])
            if gcd(u, v) != 1:
                continue
            val = u**3 + A * u * v**4 + B * v**6
            if val >= 0 and isqrt(val) ** 2 == val:
                w = isqrt(val)
                x = Fraction(u, v2)
                for y in {Fraction(w, v**3), Fraction(-w, v**3)}:
                    pts.add(Point(x, y))
    return sorted(pts, key=lambda P: (abs(P.x.numerator) + P.x.denominator, P.x, P.y))


def point_search(E, height_bound: int) -> list[FoundPoint]:
    """Affine rational points with x = u / v^2, |u|, v <= height_bound.

    Heights refer to the integral model y^2 = x(x^2 + ax + b) when E has a
    rational 2-torsion point (the fast path: the squarefree part of u must
    divide b, which turns the search into a family of quartic searches), and
    to the integral short model otherwise.  Points come back on E's model.
    """
    if height_bound < 1:
        raise ValueError("height_bound must be >= 1")
    model = as_model(E)
    try:
        if isinstance(E, TwoTorsionModel):
            T, iso = E, None
        else:
            T, iso = to_two_torsion_model(model)
        a, b, k = _integral_two_torsion(T)
        raw = _search_two_torsion(a, b, height_bound)
        pts = [Point(P.x / k**2, P.y / k**3) for P in raw]
        if iso is not None:
            pts = [iso.backward(P) for P in pts]
    except NoRationalTwoTorsion:
        S = short_model(model)
        pts = [S.iso.backward(P) for P in _search_short(S.A, S.B, height_bound)]
    return [FoundPoint(P, point_order(model, P, 24)) for P in pts]
