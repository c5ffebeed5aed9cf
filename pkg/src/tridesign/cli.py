"""Command-line front end: ``tridesign scan|analyze|bound|check-design|fixture``."""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction
from typing import Optional, Sequence

from . import __version__
from .designs import (FIXTURES, DesignFormatError, design_strength, fixture, load_design, spectrum,
                      verify_conjecture_witness, write_design)
from .exact import as_rational
from .feasibility import Status, classify, run_scan
from .orthopoly import levenshtein_bound_L5
from .report import analysis_dict, encode_value, render

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_UNRESOLVED = 2
EXIT_USAGE = 64
EXIT_DATA = 65
EXIT_CANTCREAT = 74


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _open_out(path: Optional[str]):
    if path is None or path == "-":
        return sys.stdout
    try:
        return open(path, "w")
    except OSError as exc:
        print(f"tridesign: cannot write {path}: {exc.strerror}", file=sys.stderr)
        sys.exit(EXIT_CANTCREAT)


# ---------------------------------------------------------------------------


def cmd_scan(args) -> int:
    if not 3 <= args.n_min <= args.n_max:
        raise UsageError("need 3 <= --n-min <= --n-max")
    out = _open_out(args.out)
    start = time.monotonic()

    def progress(n, res):
        if not args.quiet and (n % 50 == 0 or n == args.n_max):
            print(f"n = {n}  {time.monotonic() - start:.1f}s", file=sys.stderr)

    result = run_scan(args.n_min, args.n_max, divisibility=not args.all_m, verbose=args.verbose,
                      jobs=args.jobs, progress=progress)
    text = render(result, (args.n_min, args.n_max), args.format, divisibility=not args.all_m,
                  timestamp=not args.no_timestamp)
    out.write(text)
    if out is not sys.stdout:
        out.close()
    unresolved = result.counts.get(Status.UNRESOLVED, 0)
    if not args.quiet:
        survivors = [r for r in result.records if r.status is Status.REFUTED_BY_DERIVED]
        print(f"examined {result.examined} candidates; {len(result.records)} records; "
              f"refuted survivors {[(r.parameters.n, r.parameters.T) for r in survivors]}; "
              f"unresolved {unresolved}", file=sys.stderr)
    return EXIT_UNRESOLVED if unresolved else EXIT_OK


def _fmt(x) -> str:
    v = encode_value(x)
    return f"({v[0]}, {v[1]})" if isinstance(v, list) else v


def cmd_analyze(args) -> int:
    n = args.n
    if n < 2:
        raise UsageError("need --n >= 2")
    if args.t is not None:
        if (args.t * n) % 2:
            raise UsageError("T * n must be even")
        M = args.t * n // 2
    else:
        M = args.m
    rep = classify(n, M, divisibility=args.t is not None or not args.all_m)
    if args.json:
        print(json.dumps(analysis_dict(rep), indent=2, sort_keys=True))
        return EXIT_UNRESOLVED if rep.status is Status.UNRESOLVED else EXIT_OK
    p = rep.parameters
    print(f"n = {p.n}  M = {p.M}  T = {p.T if p.T is not None else '-'}")
    if rep.cubic is not None:
        A, B, C, D = reversed(rep.cubic.coeffs)
        print(f"cubic: A = {A}, B = {B}, C = {C}, D = {D}")
    if rep.inner_products is not None:
        print("(a, b, c) = (" + ", ".join(_fmt(x) for x in rep.inner_products) + ")")
    if rep.distribution is not None:
        X, Y, Z = (_fmt(v) for v in rep.distribution)
        print(f"X = {X}  Y = {Y}  Z = {Z}")
    if rep.families:
        print("families: " + ", ".join(str(f) for f in rep.families))
    for d in rep.derived or []:
        print(f"derived code at {d.which}: size {d.cardinality}, verdict {d.verdict.value}"
              + (f" ({d.reason})" if d.reason else ""))
        if d.distribution:
            vals = ", ".join(str(v) for v in d.distribution)
            print(f"  (X_{d.which}, Y_{d.which}, Z_{d.which}) = ({vals})")
            for t, v in zip(d.derived_inner_products, d.distribution):
                print(f"  {t}: {v}")
        if args.verbose and d.residuals:
            print("  higher-moment residuals: " + ", ".join(str(r) for r in d.residuals))
    print(f"status: {rep.status.value}")
    return EXIT_UNRESOLVED if rep.status is Status.UNRESOLVED else EXIT_OK


def cmd_bound(args) -> int:
    try:
        s = as_rational(args.s)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"cannot parse s = {args.s!r} as a rational")
    if args.n < 2:
        raise UsageError("need --n >= 2")
    if not 0 <= s < 1:
        raise UsageError("s must lie in (0, 1)")
    try:
        print(levenshtein_bound_L5(args.n, s))
    except ValueError as exc:
        print(f"tridesign: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


def cmd_check_design(args) -> int:
    try:
        inst = load_design(args.file, require_exact=args.exact)
    except DesignFormatError as exc:
        print(f"tridesign: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"tridesign: cannot read {args.file}: {exc.strerror}", file=sys.stderr)
        return EXIT_DATA
    if args.tol is not None:
        inst = type(inst)(**{**inst.__dict__, "tol": args.tol})
    ok = True
    tau = design_strength(inst, max(args.strength, 1) + 2)
    print(f"{inst.name}: n = {inst.n}, M = {inst.M}, {'exact' if inst.exact else f'numeric (tol {inst.tol})'}")
    print(f"strength: {tau}" + ("" if tau < args.strength + 2 else "+"))
    if tau < args.strength:
        print(f"FAIL strength {tau} < {args.strength}")
        ok = False
    spec = spectrum(inst)
    if len(spec.distinct) <= 6:
        print("spectrum of point 0: " + ", ".join(f"{t}: {k}" for t, k in spec.per_point[0].items()))
    if not args.no_witness:
        rep = verify_conjecture_witness(inst)
        for key, item in rep.items.items():
            print(f"{'ok  ' if item.passed else 'FAIL'} {key}: {item.detail}")
        ok = ok and rep.passed
    return EXIT_OK if ok else EXIT_FAIL


def cmd_fixture(args) -> int:
    out = _open_out(args.out)
    write_design(fixture(args.name), out, coords=args.coords)
    if out is not sys.stdout:
        out.close()
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tridesign", description="Feasibility analysis for spherical 3-distance 5-designs.")
    p.add_argument("--version", action="version", version=f"tridesign {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("scan", help="scan all candidate (n, M) in a dimension range")
    s.add_argument("--n-min", type=int, required=True)
    s.add_argument("--n-max", type=int, required=True)
    s.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    s.add_argument("--format", choices=("json", "csv"), default="json")
    s.add_argument("--out", help="output file (default: stdout)")
    s.add_argument("--verbose", action="store_true", help="also emit rejected candidates")
    s.add_argument("--all-m", action="store_true", help="skip the n | 2M divisibility filter")
    s.add_argument("--no-timestamp", action="store_true", help="omit the timestamp for byte-stable output")
    s.add_argument("--quiet", action="store_true", help="no progress on stderr")
    s.set_defaults(func=cmd_scan)

    a = sub.add_parser("analyze", help="run one candidate through the full pipeline")
    a.add_argument("--n", type=int, required=True)
    g = a.add_mutually_exclusive_group(required=True)
    g.add_argument("--t", type=int, help="T = 2M/n")
    g.add_argument("--m", type=int, help="cardinality M")
    a.add_argument("--all-m", action="store_true", help="with --m, do not require n | 2M")
    a.add_argument("--json", action="store_true")
    a.add_argument("--verbose", action="store_true")
    a.set_defaults(func=cmd_analyze)

    b = sub.add_parser("bound", help="evaluate the Levenshtein bound L_5(n, s)")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--s", required=True, help="rational, e.g. 1/4")
    b.set_defaults(func=cmd_bound)

    c = sub.add_parser("check-design", help="verify an explicit code")
    c.add_argument("file")
    c.add_argument("--strength", type=int, default=5, help="required design strength")
    c.add_argument("--tol", type=float, help="numeric tolerance (default 1e-9)")
    c.add_argument("--exact", action="store_true", help="require rational entries")
    c.add_argument("--no-witness", action="store_true", help="skip the 3-distance structural checks")
    c.set_defaults(func=cmd_check_design)

    f = sub.add_parser("fixture", help="write a built-in code as a design file")
    f.add_argument("name", choices=FIXTURES)
    f.add_argument("--out")
    f.add_argument("--coords", action="store_true", help="write coordinates when available")
    f.set_defaults(func=cmd_fixture)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"tridesign: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
