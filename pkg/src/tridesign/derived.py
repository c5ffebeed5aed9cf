"""Derived codes: the points of C at a fixed inner product u from a base point.

Rescaled onto S^{n-2}, such a code is a spherical 3-design whose inner products
come from the Cosine Law ``v -> (v - u^2)/(1 - u^2)``.  Its distance
distribution must solve the moment system at dimension ``n - 1``; a non-integral
or negative solution refutes the parent parameters.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Sequence

from .exact import IsolatingInterval, as_rational, solve_vandermonde

TAGS = ("a", "b", "c")


class Verdict(str, Enum):
    PASS = "Pass"
    CONTRADICTION_NON_INTEGER = "ContradictionNonInteger"
    CONTRADICTION_NEGATIVE = "ContradictionNegative"
    INCONSISTENT_MOMENT3 = "InconsistentMoment3"
    SKIPPED = "Skipped"


class DerivedCodeSkipped(Exception):
    """The derived code cannot be analyzed (antipodal base product, irrational data, ...)."""


@dataclass(frozen=True)
class DerivedCodeReport:
    which: str
    cardinality: Fraction
    derived_inner_products: tuple[Fraction, ...] = ()
    distribution: tuple[Fraction, ...] = ()
    verdict: Verdict = Verdict.SKIPPED
    reason: str = ""
    residuals: tuple[Fraction, ...] = field(default=(), compare=False)

    @property
    def is_contradiction(self) -> bool:
        return self.verdict in (
            Verdict.CONTRADICTION_NON_INTEGER,
            Verdict.CONTRADICTION_NEGATIVE,
            Verdict.INCONSISTENT_MOMENT3,
        )


def _exact_triple(triple) -> tuple[Fraction, Fraction, Fraction]:
    vals = []
    for x in triple:
        if isinstance(x, IsolatingInterval):
            if not x.is_exact:
                raise DerivedCodeSkipped("irrational inner products")
            x = x.lo
        vals.append(as_rational(x))
    return tuple(vals)


def derived_inner_products(triple, which: str) -> list[Fraction]:
    """Cosine-Law images of the three inner products, kept when they lie in [-1, 1).

    Order follows the source inner products a, b, c; coinciding images are merged.
    """
    vals = _exact_triple(triple)
    u = vals[TAGS.index(which)]
    if u == -1:
        raise DerivedCodeSkipped("antipodal derived code is a single point")
    if abs(u) >= 1:
        raise ValueError("base inner product must lie in (-1, 1)")
    out: list[Fraction] = []
    for v in vals:
        w = u / (1 + u) if v == u else (v - u * u) / (1 - u * u)
        if -1 <= w < 1 and w not in out:
            out.append(w)
    return out


def _rhs(n: int, cardinality: Fraction, count: int) -> list[Fraction]:
    # f_i at dimension n - 1: f0 = 1, f1 = 0, f2 = 1/(n - 1), f3 = 0
    f = [Fraction(1), Fraction(0), Fraction(1, n - 1), Fraction(0)]
    return [f[i] * cardinality - 1 for i in range(count)]


def derived_distribution(n: int, cardinality, products: Sequence) -> tuple[Fraction, ...]:
    """Counts at each derived inner product from the first ``len(products)`` moment equations."""
    products = [as_rational(p) for p in products]
    if not 1 <= len(products) <= 3 or len(set(products)) != len(products):
        raise ValueError("need 1..3 distinct derived inner products")
    cardinality = as_rational(cardinality)
    return tuple(solve_vandermonde(products, _rhs(n, cardinality, len(products))))


def derived_moment_residuals(n: int, cardinality, products, values) -> tuple[Fraction, ...]:
    """Residuals of the moment equations i = len(products)..3, zero for a genuine 3-design."""
    cardinality = as_rational(cardinality)
    rhs = _rhs(n, cardinality, 4)
    return tuple(
        sum((p**i * v for p, v in zip(products, values)), Fraction(0)) - rhs[i]
        for i in range(len(products), 4)
    )


def _verdict(values, residuals) -> Verdict:
    if any(v < 0 for v in values):
        return Verdict.CONTRADICTION_NEGATIVE
    if any(v.denominator != 1 for v in values):
        return Verdict.CONTRADICTION_NON_INTEGER
    if any(residuals):
        return Verdict.INCONSISTENT_MOMENT3
    return Verdict.PASS


def analyze_derived_code(n: int, triple, which: str, cardinality) -> DerivedCodeReport:
    cardinality = as_rational(cardinality)
    try:
        products = derived_inner_products(triple, which)
    except DerivedCodeSkipped as exc:
        return DerivedCodeReport(which, cardinality, verdict=Verdict.SKIPPED, reason=str(exc))
    if cardinality < 2:
        return DerivedCodeReport(which, cardinality, tuple(products), verdict=Verdict.SKIPPED,
                                 reason="derived code has fewer than two points")
    values = derived_distribution(n, cardinality, products)
    assert sum(values) == cardinality - 1
    residuals = derived_moment_residuals(n, cardinality, products, values)
    return DerivedCodeReport(which, cardinality, tuple(products), tuple(values),
                             _verdict(values, residuals), residuals=residuals)


def derived_analysis(n: int, M, triple, dist) -> list[DerivedCodeReport]:
    """One report per derived code C_a, C_b, C_c; any contradiction refutes (n, M)."""
    counts = list(dist)
    try:
        _exact_triple(triple)
        counts = [as_rational(x) for x in counts]
    except (DerivedCodeSkipped, TypeError):
        return [DerivedCodeReport(w, Fraction(0), verdict=Verdict.SKIPPED,
                                  reason="irrational inner products") for w in TAGS]
    return [analyze_derived_code(n, triple, w, c) for w, c in zip(TAGS, counts)]
