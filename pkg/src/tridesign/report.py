"""Serialization of scan results to JSON and CSV.

Rationals are written as ``"p/q"`` strings and unresolved values as
``["lo", "hi"]`` string pairs, so reports round-trip without loss.
"""

from __future__ import annotations

import csv
import io
import json
from datetime import datetime, timezone
from fractions import Fraction
from typing import Optional

from . import __version__
from .exact import IsolatingInterval, RationalInterval
from .feasibility import CandidateReport, ScanResult, Status

CSV_FIELDS = ("n", "M", "T", "status", "inner_products", "distribution", "families", "derived")


def encode_value(x):
    if isinstance(x, IsolatingInterval):
        return str(x.lo) if x.is_exact else [str(x.lo), str(x.hi)]
    if isinstance(x, RationalInterval):
        return [str(x.lo), str(x.hi)]
    return str(Fraction(x))


def record_dict(rep: CandidateReport) -> dict:
    p = rep.parameters
    return {
        "n": p.n,
        "M": p.M,
        "T": p.T,
        "status": rep.status.value,
        "inner_products": [encode_value(x) for x in rep.inner_products] if rep.inner_products else [],
        "distribution": [encode_value(x) for x in rep.distribution] if rep.distribution else [],
        "families": [str(f) for f in rep.families],
        "derived": [
            {
                "which": d.which,
                "products": [str(v) for v in d.derived_inner_products],
                "values": [str(v) for v in d.distribution],
                "verdict": d.verdict.value,
            }
            for d in (rep.derived or [])
        ],
    }


def metadata(result: ScanResult, n_range: tuple[int, int], *, divisibility: bool = True,
             timestamp: bool = True) -> dict:
    meta = {
        "tool": "tridesign",
        "version": __version__,
        "n_range": list(n_range),
        "divisibility_filter": divisibility,
        "examined": result.examined,
        "counts": {s.value: result.counts.get(s, 0) for s in Status},
    }
    if timestamp:
        meta["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return meta


def to_json(result: ScanResult, n_range: tuple[int, int], **meta_kwargs) -> str:
    records = sorted(result.records, key=lambda r: r.key)
    doc = {"metadata": metadata(result, n_range, **meta_kwargs), "records": [record_dict(r) for r in records]}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _flat(v) -> str:
    return f"[{v[0]},{v[1]}]" if isinstance(v, list) else v


def to_csv(result: ScanResult) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for rep in sorted(result.records, key=lambda r: r.key):
        d = record_dict(rep)
        derived = ";".join(
            f"{x['which']}:{x['verdict']}:{'|'.join(x['products'])}:{'|'.join(x['values'])}" for x in d["derived"]
        )
        w.writerow([
            d["n"], d["M"], "" if d["T"] is None else d["T"], d["status"],
            ";".join(_flat(v) for v in d["inner_products"]),
            ";".join(_flat(v) for v in d["distribution"]),
            ";".join(d["families"]),
            derived,
        ])
    return buf.getvalue()


def read_csv(text: str) -> list[dict]:
    return list(csv.DictReader(io.StringIO(text)))


def render(result: ScanResult, n_range: tuple[int, int], fmt: str, *, divisibility: bool = True,
           timestamp: bool = True) -> str:
    if fmt == "json":
        return to_json(result, n_range, divisibility=divisibility, timestamp=timestamp)
    if fmt == "csv":
        return to_csv(result)
    raise ValueError(f"unknown format {fmt!r}")


def analysis_dict(rep: CandidateReport) -> dict:
    d = record_dict(rep)
    if rep.cubic is not None:
        d["cubic"] = [str(c) for c in reversed(rep.cubic.coeffs)]
    return d
