#!/usr/bin/env python3
"""Push descent on the X1(2,12) twist by d = -11*59*83 as far as it goes.

None of the rank-zero certificates apply (three primes), the 2-isogeny and
full 2-descent bounds both stop at 2, and the question is whether explicit
points show up.  The script tries, per undecided class of the phi-image, a
torsor search with growing bounds, then a plain point search, and prints
what was found.  Larger bounds get slow quickly (cost ~ bound^2).

    python3 scripts/counterexample_twist.py --bounds 1024 4096 --height 10000
"""
import argparse
import json
import time

from twistrank.curves import two_isogeny
from twistrank.descent import NotInFamily, Solvable, prove_rank_zero_2_12, rank_bounds, torsor_solvable
from twistrank.families import family_twist


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--d", type=int, default=-11 * 59 * 83)
    ap.add_argument("--bounds", type=int, nargs="+", default=[1024, 4096])
    ap.add_argument("--height", type=int, default=10**4)
    args = ap.parse_args()

    E = family_twist("X1_2_12", args.d)
    Ep, _ = two_isogeny(E)
    try:
        prove_rank_zero_2_12(args.d)
        print("certificate: rank 0 proved")
    except NotInFamily as exc:
        print(f"certificate: not applicable ({exc.reason})")

    report = rank_bounds(E, args.bounds[0])
    print(f"descent: rank in [{report.rank_lower}, {report.rank_upper}] "
          f"(isogeny bound {report.isogeny_upper}, full 2-descent bound {report.full_two_upper})")
    pending = sorted(report.image_phi.undecided, key=abs)
    print(f"undecided phi-classes: {pending}")

    found = {}
    for bound in args.bounds[1:]:
        for r in [c for c in pending if c not in found]:
            start = time.perf_counter()
            out = torsor_solvable(r, Ep.a, Ep.b, bound)
            print(f"  class {r:7d} bound {bound:6d}: {type(out).__name__} "
                  f"({time.perf_counter() - start:.1f}s)")
            if isinstance(out, Solvable):
                found[r] = out

    report = rank_bounds(E, args.bounds[-1], height=args.height)
    summary = {
        "d": args.d,
        "rank_lower": report.rank_lower,
        "rank_upper": report.rank_upper,
        "status": report.status,
        "torsor_witnesses": {str(r): [w.l, w.m, w.n] for r, w in found.items()},
        "points": [[str(P.x), str(P.y)] for P in report.points],
    }
    print(json.dumps(summary, indent=2))


if __name__ == "__main__":
    main()
