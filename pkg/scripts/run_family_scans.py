#!/usr/bin/env python3
"""Run the four twist-family scans and summarise them.

Each scan writes a JSON-lines file (one record per prime) to --out, and a
one-line summary per family is printed at the end:

    python3 scripts/run_family_scans.py --max-prime 2000 --workers 4
"""
import argparse
import json
import time
from collections import Counter
from pathlib import Path

from twistrank.cli import ScanConfig, cmd_scan

SCANS = {
    "x1_2_10_rank0": ScanConfig("X1_2_10", 20, (3, 7), mode="both"),
    "x1_2_10_rank1": ScanConfig("X1_2_10", 20, (11, 19), mode="descend"),
    "x1_2_12_rank0": ScanConfig("X1_2_12", 24, (11,), mode="both"),
    "x1_2_12_rank1": ScanConfig("X1_2_12", 24, (23,), mode="descend"),
}


def summarise(records):
    ranks = Counter()
    certified = 0
    for rec in records:
        if "certificate" in rec and "certificate_error" not in rec:
            certified += 1
        if "descent" in rec:
            desc = rec["descent"]
            key = (desc["rank_lower"], desc["rank_upper"], rec.get("root_number"))
            ranks[key] += 1
    return certified, ranks


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-prime", type=int, default=2000)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--bound", type=int, default=1024)
    ap.add_argument("--out", type=Path, default=Path("scan_output"))
    ap.add_argument("--only", choices=sorted(SCANS), nargs="*")
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    for name, cfg in SCANS.items():
        if args.only and name not in args.only:
            continue
        cfg.max_prime, cfg.workers, cfg.bound = args.max_prime, args.workers, args.bound
        start = time.perf_counter()
        records = [rec.to_json() for rec in cmd_scan(cfg)]
        path = args.out / f"{name}.jsonl"
        path.write_text("".join(json.dumps(r) + "\n" for r in records))
        certified, ranks = summarise(records)
        shown = ", ".join(f"[{lo},{hi}] w={w}: {k}" for (lo, hi, w), k in sorted(ranks.items(), key=str))
        print(f"{name:15s} {len(records):4d} primes  certified={certified:4d}  {shown}  "
              f"({time.perf_counter() - start:.1f}s) -> {path}")


if __name__ == "__main__":
    main()
