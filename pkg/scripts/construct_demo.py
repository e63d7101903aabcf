#!/usr/bin/env python3
"""Build curves with torsion Z/2 x Z/10 or Z/2 x Z/12 over Q(sqrt d).

For each d the twisted modular curve is searched for points, each point is
turned into a curve over Q, and the torsion over Q(sqrt d) is recomputed.
If nothing is found the descent report (and certificate, when one applies)
explains why.

    python3 scripts/construct_demo.py --target 2x10 --d -59 -79 -3 --count 2
"""
import argparse
import time

from twistrank.families import NoPointsFound, construct_torsion_curves
from twistrank.torsion import torsion_over_Q


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--target", choices=["2x10", "2x12"], default="2x12")
    ap.add_argument("--d", type=int, nargs="+", default=[-23, -47, -71, -11])
    ap.add_argument("--count", type=int, default=1)
    ap.add_argument("--height", type=int, default=10**4)
    args = ap.parse_args()

    for d in args.d:
        start = time.perf_counter()
        try:
            curves = construct_torsion_curves(args.target, d, args.count, args.height)
        except NoPointsFound as exc:
            rep = exc.report
            cert = "rank-zero certificate" if exc.certificate else "no certificate"
            print(f"d={d}: nothing found; descent rank in [{rep.rank_lower}, {rep.rank_upper}], {cert}")
            continue
        for c in curves:
            print(f"d={d}: t={c.t}  over Q {torsion_over_Q(c.curve).label()}, "
                  f"over Q(sqrt {d}) {c.torsion.label()}  j={c.j_invariant}")
        print(f"  ({time.perf_counter() - start:.1f}s)")


if __name__ == "__main__":
    main()
