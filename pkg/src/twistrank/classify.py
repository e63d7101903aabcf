"""Rule tables for torsion groups that cannot occur.

Two engines share one format.  A rule is a predicate on the input (n for
cyclotomic fields Q(zeta_n), d for quadratic fields Q(sqrt d)) together with
the groups it eliminates; rules are tried in table order and a group is
credited to the first rule that fires for it.  Reports can be replayed:
re-evaluating the recorded rule on the recorded input must reproduce every
entry.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable

from .arith import euler_phi, factorize, is_prime, is_squarefree
from .descent import NotInFamily, prove_rank_zero_2_10, prove_rank_zero_2_12
from .quadfield import NotSquarefree


@dataclass(frozen=True, order=True)
class TorsionGroupId:
    """Z/m x Z/mn; m = 1 for cyclic groups."""

    m: int
    n: int

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValueError("m and n must be positive")

    @property
    def invariants(self) -> tuple[int, int]:
        return (self.m, self.m * self.n)

    def label(self) -> str:
        if self.m == 1:
            return f"Z/{self.n}"
        return f"Z/{self.m} x Z/{self.m * self.n}"

    @classmethod
    def parse(cls, text: str) -> "TorsionGroupId":
        """Accepts "12", "Z/12", "2 x 10", "Z/2 x Z/10", "2x10"."""
        parts = [p.strip().removeprefix("z/") for p in text.lower().split("x")]
        if len(parts) == 1:
            return cls(1, int(parts[0]))
        a, b = int(parts[0]), int(parts[1])
        if b % a:
            raise ValueError(f"{text}: {a} does not divide {b}")
        return cls(a, b // a)


def cyc(N: int) -> TorsionGroupId:
    return TorsionGroupId(1, N)


def prod(m: int, mn: int) -> TorsionGroupId:
    return TorsionGroupId(m, mn // m)


def mazur_groups() -> list[TorsionGroupId]:
    """The fifteen torsion groups of elliptic curves over Q."""
    return [cyc(N) for N in (*range(1, 11), 12)] + [prod(2, 2 * N) for N in range(1, 5)]


@dataclass(frozen=True)
class Rule:
    tag: str
    anchor: str
    predicate: Callable[[int], bool]
    groups: tuple[TorsionGroupId, ...]
    imported: bool = False
    note: str = ""


@dataclass(frozen=True)
class Entry:
    group: TorsionGroupId
    rule: str
    anchor: str
    imported: bool
    note: str = ""

    def to_json(self) -> dict:
        out = {
            "group": f"{self.group.m} x {self.group.m * self.group.n}",
            "label": self.group.label(),
            "rule": self.rule,
            "anchor": self.anchor,
            "imported": self.imported,
        }
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class EliminationReport:
    kind: str  # "cyclotomic" or "quadratic"
    value: int
    eliminated: list[Entry] = field(default_factory=list)
    not_eliminated_note: str = ""

    def groups(self) -> set[TorsionGroupId]:
        return {e.group for e in self.eliminated}

    def rule_for(self, G: TorsionGroupId) -> str | None:
        for e in self.eliminated:
            if e.group == G:
                return e.rule
        return None

    def replay(self) -> bool:
        """Re-run every recorded rule on the recorded input."""
        table = {r.tag: r for r in RULE_TABLES[self.kind]}
        fresh = run_rules(self.kind, self.value)
        for e in self.eliminated:
            rule = table[e.rule]
            if not rule.predicate(self.value) or e.group not in rule.groups:
                return False
        return [e.to_json() for e in fresh.eliminated] == [e.to_json() for e in self.eliminated]

    def to_json(self) -> dict:
        return {
            "input": {"kind": self.kind, "value": self.value},
            "eliminated": [e.to_json() for e in self.eliminated],
            "not_eliminated_note": self.not_eliminated_note,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json())


# ---------------------------------------------------------------------------
# cyclotomic fields Q(zeta_n)


def _odd_primes(n: int) -> list[int]:
    return [p for p in factorize(n).primes if p != 2]


def _cor13(n: int) -> bool:
    return n % 16 != 0 and all(p % 12 == 11 for p in _odd_primes(n))


def _cor25(n: int) -> bool:
    return n % 16 != 0 and all(p % 4 == 3 and (p - 1) % 5 != 0 for p in _odd_primes(n))


CYCLOTOMIC_RULES: list[Rule] = [
    Rule("i", "3 does not divide n", lambda n: n % 3 != 0,
         (cyc(21), cyc(27), prod(3, 3), prod(3, 6), prod(3, 9), prod(6, 6))),
    Rule("ii", "4 does not divide n", lambda n: n % 4 != 0,
         (prod(4, 4), prod(4, 8), prod(4, 12), prod(4, 16), prod(8, 8))),
    Rule("iii", "5 does not divide n", lambda n: n % 5 != 0,
         (cyc(15), cyc(17), cyc(37), prod(5, 5))),
    Rule("iv", "neither 3 nor 5 divides n", lambda n: n % 3 != 0 and n % 5 != 0,
         (cyc(15),)),
    Rule("v", "7 does not divide n", lambda n: n % 7 != 0,
         (cyc(14), cyc(37))),
    Rule("vi", "7 does not divide n and 3 does not divide phi(n)",
         lambda n: n % 7 != 0 and euler_phi(n) % 3 != 0,
         (prod(2, 14),)),
    *[
        Rule(f"vii-{l}", f"the prime {l} does not divide n", (lambda n, l=l: n % l != 0), (cyc(l),))
        for l in (11, 17, 19, 43, 67, 163)
    ],
    Rule("no-13", "16 does not divide n and every odd prime factor of n is 11 mod 12",
         _cor13, (cyc(13),)),
    Rule("no-25", "16 does not divide n and every odd prime factor p of n has "
         "p = 3 mod 4 and 5 not dividing p - 1", _cor25, (cyc(25),)),
]


# ---------------------------------------------------------------------------
# quadratic fields Q(sqrt d)

_ZP_NOTE = (
    "also holds over the composite of all Z_p-extensions of Q(sqrt d) for any prime p > 5"
)


def _in_family(prover, d: int) -> bool:
    try:
        prover(d)
    except NotInFamily:
        return False
    return True


def _minus_prime(d: int) -> bool:
    return d < 0 and is_prime(-d)


QUADRATIC_RULES: list[Rule] = [
    Rule("rank0-X1(2,10)",
         "d is a product of -p_i over distinct primes p_i = 3, 7 mod 20; "
         "the twist of X1(2,10) by d has rank 0",
         lambda d: _in_family(prove_rank_zero_2_10, d), (prod(2, 10),), note=_ZP_NOTE),
    Rule("rank0-X1(2,12)",
         "d = -p or d = pq with distinct primes p, q = 11 mod 24; "
         "the twist of X1(2,12) by d has rank 0",
         lambda d: _in_family(prove_rank_zero_2_12, d), (prod(2, 12),), note=_ZP_NOTE),
    Rule("Z16-minus-p",
         "d = -p for a prime p: Z/16 does not occur over Q(sqrt -p) (Derickx)",
         _minus_prime, (cyc(16),), imported=True, note=_ZP_NOTE),
]

RULE_TABLES = {"cyclotomic": CYCLOTOMIC_RULES, "quadratic": QUADRATIC_RULES}


def run_rules(kind: str, value: int) -> EliminationReport:
    report = EliminationReport(kind, value)
    seen = set()
    for rule in RULE_TABLES[kind]:
        if not rule.predicate(value):
            continue
        for G in rule.groups:
            if G not in seen:
                seen.add(G)
                report.eliminated.append(Entry(G, rule.tag, rule.anchor, rule.imported, rule.note))
    return report


def cyclotomic_elimination(n: int) -> EliminationReport:
    """Torsion groups ruled out for E(Q(zeta_n)) with E/Q, by rule."""
    n = int(n)
    if n < 1:
        raise ValueError("n must be >= 1")
    report = run_rules("cyclotomic", n)
    report.not_eliminated_note = (
        "groups not listed are not ruled out by these rules; this says nothing "
        "about whether they occur"
    )
    return report


def quadratic_nonexistence(d: int) -> EliminationReport:
    """Torsion groups that no E/Q attains over Q(sqrt d), by rule."""
    d = int(d)
    if d in (0, 1) or not is_squarefree(d):
        raise NotSquarefree(f"{d} is not a squarefree integer != 0, 1")
    report = run_rules("quadratic", d)
    report.not_eliminated_note = "only the rank-zero families and the Z/16 case are encoded"
    return report
