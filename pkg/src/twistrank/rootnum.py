"""Root numbers of quadratic twists and parity-based rank predictions.

For E/Q of conductor N and a fundamental discriminant D coprime to 2N,

    w(E_D) = chi_D(-N) w(E),

with chi_D the Kronecker character (D / .).  Combined with a descent upper
bound this gives rank statements that are conditional on the parity
conjecture; the module always labels them as such.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from math import gcd

from .arith import is_squarefree, kronecker
from .descent import DEFAULT_BOUND, rank_bounds
from .families import family_twist
from .quadfield import NotSquarefree

#: conductor and root number of the untwisted curves (both have rank 0
#: and analytic rank 0, so w = +1)
BASE_CURVES = {
    "X1_2_10": (20, +1),
    "X1_2_12": (24, +1),
}


class NotCoprime(ValueError):
    pass


class Conclusion(str, enum.Enum):
    RANK_ZERO = "RankZero"
    RANK_ONE_CONDITIONAL = "RankOneConditional"
    INCONCLUSIVE = "Inconclusive"


def fundamental_discriminant(d: int) -> int:
    """Discriminant of Q(sqrt d): d if d = 1 mod 4, else 4d."""
    d = int(d)
    if d in (0, 1) or not is_squarefree(d):
        raise NotSquarefree(f"{d} is not a squarefree integer != 0, 1")
    return d if d % 4 == 1 else 4 * d


def twist_root_number(w: int, N: int, d: int) -> int:
    """Root number of the twist by d of a curve with root number w and conductor N."""
    if w not in (-1, 1):
        raise ValueError("root number must be +1 or -1")
    D = fundamental_discriminant(d)
    if gcd(D, 2 * N) != 1:
        raise NotCoprime(f"discriminant {D} is not coprime to 2N = {2 * N}")
    return kronecker(D, -N) * w


@dataclass(frozen=True)
class ParityPrediction:
    family: str
    d: int
    root_number: int
    descent_lower: int
    descent_upper: int
    conclusion: Conclusion

    @property
    def predicted_parity(self) -> str:
        return "even" if self.root_number == 1 else "odd"

    @property
    def conditional(self) -> bool:
        """Rank-one conclusions rest on the parity conjecture."""
        return self.conclusion is Conclusion.RANK_ONE_CONDITIONAL

    @property
    def proved_rank(self) -> int | None:
        """The rank when descent alone pins it, independent of parity."""
        return self.descent_lower if self.descent_lower == self.descent_upper else None

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "d": self.d,
            "root_number": self.root_number,
            "predicted_parity": self.predicted_parity,
            "descent_lower": self.descent_lower,
            "descent_upper": self.descent_upper,
            "conclusion": self.conclusion.value,
            "conditional": self.conditional,
            "proved_rank": self.proved_rank,
        }


def classify_parity(root_number: int, lower: int, upper: int) -> Conclusion:
    if upper == 0:
        return Conclusion.RANK_ZERO
    if root_number == -1 and upper == 1:
        return Conclusion.RANK_ONE_CONDITIONAL
    return Conclusion.INCONCLUSIVE


def parity_prediction(family: str, d: int, bound: int | None = None, report=None) -> ParityPrediction:
    """Root number of the twist plus the descent bounds, combined.

    ``RankOneConditional`` means: odd parity and descent rank <= 1, so the
    rank is 1 if the parity conjecture holds.  If the descent also found a
    point, ``proved_rank`` records the unconditional value.
    """
    family = str(getattr(family, "value", family))
    if family not in BASE_CURVES:
        raise ValueError(f"no root number data for {family}")
    N, w = BASE_CURVES[family]
    sign = twist_root_number(w, N, d)
    if report is None:
        report = rank_bounds(family_twist(family, d), bound or DEFAULT_BOUND)
    lo, hi = report.rank_lower, report.rank_upper
    return ParityPrediction(family, int(d), sign, lo, hi, classify_parity(sign, lo, hi))
