"""Scan a dimension range and print the non-rejected records with timing.

    python scripts/reproduce_scan.py --n-max 1000
"""

import argparse
import time
from dataclasses import dataclass

from tridesign.feasibility import Status, run_scan


@dataclass
class ScanConfig:
    n_min: int = 3
    n_max: int = 1000
    jobs: int = 1
    all_m: bool = False


def main():
    ap = argparse.ArgumentParser()
    cfg = ScanConfig()
    ap.add_argument("--n-min", type=int, default=cfg.n_min)
    ap.add_argument("--n-max", type=int, default=cfg.n_max)
    ap.add_argument("--jobs", type=int, default=cfg.jobs)
    ap.add_argument("--all-m", action="store_true")
    cfg = ScanConfig(**vars(ap.parse_args()))

    start = time.monotonic()
    res = run_scan(cfg.n_min, cfg.n_max, divisibility=not cfg.all_m, jobs=cfg.jobs)
    elapsed = time.monotonic() - start
    print(f"{res.examined} candidates in {elapsed:.1f}s")
    for status, k in sorted(res.counts.items(), key=lambda kv: kv[0].value):
        print(f"  {status.value:34s} {k}")
    for r in res.records:
        p = r.parameters
        fam = ", ".join(map(str, r.families))
        print(f"n={p.n:5d} M={p.M:10d} T={p.T!s:>7} {r.status.value:26s} {fam}")
    if res.counts.get(Status.UNRESOLVED):
        raise SystemExit(2)


if __name__ == "__main__":
    main()
