import json
import random

import pytest
from hypothesis import assume, given, settings, strategies as st

from oracles import is_rational_square
from twistrank.arith import is_prime, squarefree_divisors
from twistrank.curves import SingularCurve, TwoTorsionModel, two_isogeny
from twistrank.descent import (
    LocallyObstructed,
    NotInFamily,
    RankZeroCertificate,
    Solvable,
    Undecided,
    check_witness,
    class_product,
    descent_images,
    full_two_selmer,
    prove_rank_zero_2_10,
    prove_rank_zero_2_12,
    rank_bounds,
    torsor_solvable,
)
from twistrank.families import family_twist
from twistrank.search import point_search


def x1_2_10(p):
    return family_twist("X1_2_10", -p)


# --------------------------------------------------------------- torsors

def test_torsor_examples():
    assert torsor_solvable(1, 6, 45) == Solvable(1, 0, 1)
    assert torsor_solvable(5, 6, 45) == Solvable(0, 1, 3)
    out = torsor_solvable(3, 6, 45)
    assert isinstance(out, LocallyObstructed) and out.place == 3
    assert isinstance(torsor_solvable(7, 6, 45), LocallyObstructed)  # 7 does not divide 45


def test_torsor_errors():
    with pytest.raises(SingularCurve):
        torsor_solvable(1, 2, 1)
    with pytest.raises(ValueError):
        torsor_solvable(4, 1, 1)


@given(st.integers(-40, 40), st.integers(-40, 40).filter(bool), st.data())
@settings(max_examples=40)
def test_torsor_outcomes_are_sound(a, b, data):
    assume(a * a != 4 * b)
    r = data.draw(st.sampled_from(sorted(squarefree_divisors(b))))
    out = torsor_solvable(r, a, b, bound=32)
    if isinstance(out, Solvable):
        assert check_witness(r, a, b, out)
    elif isinstance(out, LocallyObstructed):
        # a locally obstructed torsor has no small global point either
        for l in range(0, 12):
            for m in range(0, 12):
                if (l, m) != (0, 0):
                    lhs = r * r * l**4 + a * r * l * l * m * m + b * m**4
                    assert not is_rational_square(lhs * r)  # n^2 = lhs / r
    else:
        assert isinstance(out, Undecided) and out.bound == 32


def test_torsor_rational_coefficients():
    out = torsor_solvable(1, "1/2", "-3/4")
    assert isinstance(out, Solvable) and check_witness(1, "1/2", "-3/4", out)


# --------------------------------------------------------------- images

def test_images_x1_2_10_p3():
    im_phi, im_dual = descent_images(x1_2_10(3))
    assert im_phi.confirmed == {1, 5} and not im_phi.undecided
    assert im_phi.excluded == squarefree_divisors(45) - {1, 5}
    assert im_dual.confirmed == {1, -1} and not im_dual.undecided


@given(st.integers(-30, 30), st.integers(-30, 30).filter(bool))
@settings(max_examples=30)
def test_images_are_groups_containing_identity(a, b):
    assume(a * a != 4 * b)
    E = TwoTorsionModel(a, b)
    Ep, _ = two_isogeny(E)
    for img, B in zip(descent_images(E, bound=16), (Ep.b, E.b)):
        assert 1 in img.confirmed
        assert class_product(1, int(B)) in img.confirmed  # image of (0, 0)
        assert img.confirmed.isdisjoint(img.excluded | img.undecided)
        for x in img.confirmed:
            for y in img.confirmed:
                assert class_product(x, y) in img.confirmed
        n = len(img.confirmed)
        assert n & (n - 1) == 0


# --------------------------------------------------------------- rank bounds

@pytest.mark.parametrize("n,rank", [(1, 0), (2, 0), (3, 0), (5, 1), (6, 1), (7, 1)])
def test_congruent_number_curves(n, rank):
    rep = rank_bounds(TwoTorsionModel(0, -n * n), height=100)
    assert (rep.rank_lower, rep.rank_upper, rep.status) == (rank, rank, "Exact")


def test_full_two_selmer_counts():
    assert full_two_selmer(TwoTorsionModel(0, -1)) == 4
    assert full_two_selmer(TwoTorsionModel(0, -25)) == 8


def test_rank_bounds_examples():
    rep = rank_bounds(x1_2_10(3))
    assert (rep.rank_lower, rep.rank_upper, rep.status) == (0, 0, "Exact")
    assert rank_bounds(family_twist("X1_2_12", -23)).rank_upper == 1
    big = rank_bounds(family_twist("X1_2_12", -11 * 59 * 83))
    assert big.rank_upper >= 2
    json.dumps(big.to_json())


@given(st.integers(-25, 25), st.integers(-25, 25).filter(bool))
@settings(max_examples=25)
def test_rank_bounds_coherent(a, b):
    assume(a * a != 4 * b)
    rep = rank_bounds(TwoTorsionModel(a, b), bound=16, height=30)
    assert 0 <= rep.rank_lower <= rep.rank_upper <= rep.isogeny_upper
    assert rep.status == ("Exact" if rep.rank_lower == rep.rank_upper else "Interval")
    if rep.points:
        assert rep.rank_lower >= 1


# --------------------------------------------------------------- certificates

def test_certificate_examples():
    for d in (-3, 21):
        c = prove_rank_zero_2_10(d)
        assert c.verify() and c.d == d
    for d in (-11, 11 * 59):
        assert prove_rank_zero_2_12(d).verify()
    with pytest.raises(NotInFamily):
        prove_rank_zero_2_10(-11)
    with pytest.raises(NotInFamily):
        prove_rank_zero_2_12(-23)
    with pytest.raises(NotInFamily) as info:
        prove_rank_zero_2_12(-11 * 59 * 83)
    assert "3 prime factors" in info.value.reason
    with pytest.raises(NotInFamily):
        prove_rank_zero_2_10(3)  # wrong sign


def test_certificate_round_trip_and_tampering():
    c = prove_rank_zero_2_12(11 * 59)
    again = RankZeroCertificate.from_json(json.dumps(c.to_json()))
    assert again == c and again.verify()
    bad = RankZeroCertificate(c.family, -11 * 59, c.conditions, c.conclusion)
    assert not bad.verify()


SMALL_3_7 = [p for p in range(3, 400) if is_prime(p) and p % 20 in (3, 7)]


@pytest.mark.parametrize("seed", range(4))
def test_certificates_agree_with_descent(seed):
    rng = random.Random(seed)
    k = rng.choice([1, 2, 3])
    ps = rng.sample(SMALL_3_7, k)
    d = 1
    for p in ps:
        d *= -p
    assert prove_rank_zero_2_10(d).verify()
    rep = rank_bounds(family_twist("X1_2_10", d))
    assert (rep.rank_lower, rep.rank_upper) == (0, 0)


@pytest.mark.parametrize("d", [-3, -7, -23, -43, 21, -11, -59, 11 * 59])
def test_certified_twists_have_no_nontorsion_points(d):
    fam = "X1_2_12" if d in (-11, -59, 11 * 59) else "X1_2_10"
    prover = prove_rank_zero_2_12 if fam == "X1_2_12" else prove_rank_zero_2_10
    assert prover(d).verify()
    assert all(fp.is_torsion for fp in point_search(family_twist(fam, d), 1000))


def test_three_prime_twist_has_rank_two():
    # witnesses found by scripts/counterexample_twist.py at torsor bound 16384
    d = -11 * 59 * 83
    E = family_twist("X1_2_12", d)
    Ep, _ = two_isogeny(E)
    rep = rank_bounds(E)
    assert (rep.rank_lower, rep.rank_upper) == (0, 2)
    img = rep.image_phi
    for r, w in {-59: Solvable(913, 7927, 763260915120), -83: Solvable(6037, 441, 1758683680)}.items():
        assert r in img.undecided and check_witness(r, Ep.a, Ep.b, w)
        img.confirm(r, ("witness", w))
    assert len(img.confirmed) == 16 and not img.undecided
    assert img.log_confirmed() + rep.image_phi_dual.log_confirmed() - 2 == 2
