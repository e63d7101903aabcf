"""Command-line front end.

Every subcommand writes JSON lines to stdout (``--csv`` gives a flat CSV
projection instead).  Exit codes: 0 on success, 1 when a mathematical claim
could not be established (a certificate is missing or fails to replay, or no
curve could be constructed), 2 on bad input.

Options can also come from a ``key = value`` file given with ``--config``;
keys are option names without dashes (``max_prime = 2000``) and flags given
on the command line take precedence.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .arith import primes_up_to
from .classify import cyclotomic_elimination, quadratic_nonexistence
from .curves import CurveModel, SingularCurve, SingularIsogenyTarget, TwoTorsionModel
from .descent import (
    DEFAULT_BOUND,
    DEFAULT_HEIGHT,
    NotInFamily,
    prove_rank_zero_2_10,
    prove_rank_zero_2_12,
    rank_bounds,
)
from .families import TARGETS, NoPointsFound, construct_torsion_curves, family_twist
from .quadfield import NotSquarefree
from .rootnum import BASE_CURVES, NotCoprime, parity_prediction, twist_root_number
from .torsion import torsion_over_Q, torsion_over_quadratic

EXIT_OK, EXIT_MATH, EXIT_USAGE = 0, 1, 2

PROVERS = {"X1_2_10": prove_rank_zero_2_10, "X1_2_12": prove_rank_zero_2_12}


class UsageError(ValueError):
    pass


# ---------------------------------------------------------------------------
# scan


@dataclass
class ScanConfig:
    family: str = "X1_2_10"
    modulus: int = 20
    residues: tuple = (3, 7)
    max_prime: int = 2000
    mode: str = "certify"  # certify | descend | both
    bound: int = DEFAULT_BOUND
    workers: int = 1

    def check(self) -> None:
        if self.family not in PROVERS:
            raise UsageError(f"scan supports {sorted(PROVERS)}, not {self.family}")
        if not self.residues:
            raise UsageError("BadResidues: no residues given")
        bad = [r for r in self.residues if gcd(r, self.modulus) != 1]
        if bad:
            raise UsageError(f"BadResidues: {bad} not coprime to {self.modulus}")
        if self.mode not in ("certify", "descend", "both"):
            raise UsageError(f"unknown mode {self.mode}")


@dataclass
class ScanRecord:
    family: str
    d: int
    certificate: dict | None = None
    certificate_error: str | None = None
    descent: dict | None = None
    root_number: int | None = None
    prediction: dict | None = None
    elapsed: float = 0.0
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"family": self.family, "d": self.d}
        for key in ("certificate", "certificate_error", "descent", "root_number", "prediction"):
            val = getattr(self, key)
            if val is not None:
                out[key] = val
        out["elapsed"] = round(self.elapsed, 4)
        return out


def scan_primes(cfg: ScanConfig) -> list[int]:
    res = {r % cfg.modulus for r in cfg.residues}
    return [p for p in primes_up_to(cfg.max_prime) if p % cfg.modulus in res]


def scan_one(family: str, d: int, mode: str, bound: int) -> ScanRecord:
    start = time.perf_counter()
    rec = ScanRecord(family, d)
    if mode in ("certify", "both"):
        try:
            cert = PROVERS[family](d)
            rec.certificate = cert.to_json()
            if not cert.verify():
                rec.certificate_error = "replay failed"
        except NotInFamily as exc:
            rec.certificate_error = str(exc)
    if mode in ("descend", "both"):
        report = rank_bounds(family_twist(family, d), bound)
        rec.descent = report.to_json()
        try:
            pred = parity_prediction(family, d, report=report)
            rec.root_number = pred.root_number
            rec.prediction = pred.to_json()
        except NotCoprime:
            pass
    rec.elapsed = time.perf_counter() - start
    return rec


def _scan_task(args):
    return scan_one(*args)


def cmd_scan(cfg: ScanConfig):
    """Yield one ScanRecord per prime in the progression, in increasing order."""
    cfg.check()
    tasks = [(cfg.family, -p, cfg.mode, cfg.bound) for p in scan_primes(cfg)]
    if cfg.workers <= 1:
        for t in tasks:
            yield _scan_task(t)
    else:
        # Executor.map yields in submission order, which is the reorder buffer
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            yield from pool.map(_scan_task, tasks, chunksize=4)


# ---------------------------------------------------------------------------
# the other commands


def cmd_descend(a, b, bound: int = DEFAULT_BOUND, height: int | None = None) -> dict:
    E = TwoTorsionModel(Fraction(a), Fraction(b))
    return rank_bounds(E, bound, height or None).to_json()


def cmd_construct(target: str, d: int, count: int = 1, height: int = DEFAULT_HEIGHT,
                  bound: int = DEFAULT_BOUND) -> list[dict]:
    return [c.to_json() for c in construct_torsion_curves(target, d, count, height, bound)]


def _torsion_json(T) -> dict:
    return {
        "group": T.label(),
        "m": T.m,
        "n": T.n,
        "order": T.order,
        "generators": [[str(P.x), str(P.y)] for P in T.generators],
    }


def cmd_torsion(coeffs: list[str], d: int | None = None) -> dict:
    E = CurveModel.from_strings(coeffs)
    T = torsion_over_Q(E) if d is None else torsion_over_quadratic(E, d)
    out = {"curve": E.to_strings(), "field": "Q" if d is None else f"Q(sqrt {d})"}
    out.update(_torsion_json(T))
    return out


# ---------------------------------------------------------------------------
# argument handling


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(t) for t in text.replace(" ", "").split(",") if t)


def read_config(path: str) -> dict[str, str]:
    out = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key = value")
            key, value = (s.strip() for s in line.split("=", 1))
            out[key.replace("-", "_")] = value
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--bound", type=int, default=DEFAULT_BOUND,
                        help="search bound for torsor witnesses (default 1024)")
    common.add_argument("--height", type=int, default=None,
                        help="point-search height bound")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json", default="json",
                     help="JSON lines output (default)")
    fmt.add_argument("--csv", dest="fmt", action="store_const", const="csv",
                     help="flat CSV output")
    common.add_argument("--workers", type=int, default=1, help="worker processes for scans")
    common.add_argument("--config", default=None, help="key = value option file")

    parser = argparse.ArgumentParser(
        prog="twistrank",
        description="Descent, torsion and root-number tools for twists of X1(2,10) and X1(2,12).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scan", parents=[common], help="run a family over primes in a progression")
    p.add_argument("--family", choices=sorted(PROVERS), default="X1_2_10")
    p.add_argument("--modulus", type=int, default=20)
    p.add_argument("--residues", type=_int_list, default=(3, 7), help="comma-separated residues")
    p.add_argument("--max-prime", dest="max_prime", type=int, default=2000)
    p.add_argument("--mode", choices=["certify", "descend", "both"], default="certify")

    p = sub.add_parser("descend", parents=[common], help="2-isogeny descent on y^2 = x(x^2+ax+b)")
    p.add_argument("--a", default=None, help="rational a")
    p.add_argument("--b", default=None, help="rational b")
    p.add_argument("--family", choices=sorted(PROVERS), default=None,
                   help="use the twist of this family by --d instead of --a/--b")
    p.add_argument("--d", type=int, default=None)

    p = sub.add_parser("construct", parents=[common], help="curves with torsion growth over Q(sqrt d)")
    p.add_argument("--target", choices=sorted(TARGETS), required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--count", type=int, default=1)

    p = sub.add_parser("torsion", parents=[common], help="torsion subgroup over Q or Q(sqrt d)")
    p.add_argument("--curve", required=True, help="a1,a2,a3,a4,a6 as fractions")
    p.add_argument("--d", type=int, default=None)

    p = sub.add_parser("root-number", parents=[common], help="root number of a quadratic twist")
    p.add_argument("--family", choices=sorted(BASE_CURVES), default=None,
                   help="also combine with descent into a parity prediction")
    p.add_argument("--w", type=int, default=1)
    p.add_argument("--N", type=int, default=None, help="conductor (defaults from --family)")
    p.add_argument("--d", type=int, required=True)

    p = sub.add_parser("classify", parents=[common], help="torsion groups impossible over Q(sqrt d)")
    p.add_argument("--d", type=int, required=True)

    p = sub.add_parser("eliminate", parents=[common], help="torsion groups eliminated over Q(zeta_n)")
    p.add_argument("--n", type=int, required=True)
    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> None:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    cfg = read_config(known.config)
    subparsers = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    for sp in subparsers.choices.values():
        for action in sp._actions:
            if action.dest in cfg:
                raw = cfg[action.dest]
                action.default = action.type(raw) if action.type else raw
                action.required = False


def _emit(records: list[dict], fmt: str, out) -> None:
    if fmt == "json":
        for r in records:
            out.write(json.dumps(r) + "\n")
        return
    if not records:
        return
    names: list[str] = []
    for r in records:
        names += [k for k in r if k not in names]
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=names)
    w.writeheader()
    for r in records:
        w.writerow({k: (json.dumps(v) if isinstance(v, (dict, list)) else v) for k, v in r.items()})
    out.write(buf.getvalue())


def run(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
    except (OSError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors with exit status 2
        return int(exc.code or 0)
    try:
        return _dispatch(args, out)
    except (UsageError, NotSquarefree, NotCoprime, SingularCurve, SingularIsogenyTarget,
            ValueError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return EXIT_USAGE


def _dispatch(args, out) -> int:
    cmd = args.command
    if cmd == "scan":
        cfg = ScanConfig(args.family, args.modulus, tuple(args.residues), args.max_prime,
                         args.mode, args.bound, args.workers)
        status = EXIT_OK
        records = []
        for rec in cmd_scan(cfg):
            if cfg.mode in ("certify", "both") and (rec.certificate is None or rec.certificate_error):
                status = EXIT_MATH
            if args.fmt == "json":
                _emit([rec.to_json()], "json", out)
                out.flush()
            else:
                records.append(rec.to_json())
        if records:
            _emit(records, args.fmt, out)
        return status
    if cmd == "descend":
        if args.family is not None:
            if args.d is None:
                raise UsageError("--family needs --d")
            E = family_twist(args.family, args.d)
            a, b = E.a, E.b
        elif args.a is None or args.b is None:
            raise UsageError("give --a and --b, or --family and --d")
        else:
            a, b = args.a, args.b
        _emit([cmd_descend(a, b, args.bound, args.height)], args.fmt, out)
        return EXIT_OK
    if cmd == "construct":
        height = args.height or DEFAULT_HEIGHT
        try:
            curves = cmd_construct(args.target, args.d, args.count, height, args.bound)
        except NoPointsFound as exc:
            rec = {"error": "NoPointsFound", "message": str(exc),
                   "descent": exc.report.to_json() if exc.report else None,
                   "certificate": exc.certificate.to_json() if exc.certificate else None}
            _emit([rec], args.fmt, out)
            return EXIT_MATH
        _emit(curves, args.fmt, out)
        return EXIT_OK
    if cmd == "torsion":
        _emit([cmd_torsion(args.curve.split(","), args.d)], args.fmt, out)
        return EXIT_OK
    if cmd == "root-number":
        if args.family is not None:
            pred = parity_prediction(args.family, args.d, args.bound)
            _emit([pred.to_json()], args.fmt, out)
            return EXIT_OK
        if args.N is None:
            raise UsageError("--N or --family is required")
        w = twist_root_number(args.w, args.N, args.d)
        _emit([{"w": args.w, "N": args.N, "d": args.d, "root_number": w}], args.fmt, out)
        return EXIT_OK
    if cmd == "classify":
        _emit([quadratic_nonexistence(args.d).to_json()], args.fmt, out)
        return EXIT_OK
    if cmd == "eliminate":
        _emit([cyclotomic_elimination(args.n).to_json()], args.fmt, out)
        return EXIT_OK
    raise UsageError(f"unknown command {cmd}")


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
