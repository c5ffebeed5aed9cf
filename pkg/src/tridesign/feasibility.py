"""Feasibility of spherical 3-distance 5-design parameters (n, M).

A candidate survives when the cubic whose roots are the three inner products has
three distinct roots in [-1, 1) with |a| > |c| > |b| > 0, and the resulting
distance distribution (X, Y, Z) consists of nonnegative integers.  Survivors not
matching a known family are handed to the derived-code analysis.
"""

from __future__ import annotations

import logging
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import isqrt
from typing import Callable, Iterable, Optional, Sequence, Union

import numpy as np

from .derived import DerivedCodeReport, derived_analysis
from .exact import (
    IsolatingInterval,
    Poly,
    RationalInterval,
    as_rational,
    as_scalar,
    isolate_real_roots,
    poly_gcd,
    solve_vandermonde,
)

log = logging.getLogger(__name__)

DEFAULT_WIDTH = Fraction(1, 2**80)

Root = Union[Fraction, IsolatingInterval]


class Status(str, Enum):
    OUT_OF_RANGE = "OutOfRange"
    REJECTED_DIVISIBILITY = "RejectedDivisibility"
    REJECTED_ROOT_STRUCTURE = "RejectedRootStructure"
    REJECTED_SIGN_PATTERN = "RejectedSignPattern"
    REJECTED_NON_INTEGER = "RejectedNonIntegerDistribution"
    KNOWN_FAMILY = "KnownFamilyMatch"
    REFUTED_BY_DERIVED = "SurvivorRefutedByDerived"
    UNRESOLVED = "SurvivorUnresolved"


REJECTED = frozenset({
    Status.REJECTED_DIVISIBILITY,
    Status.REJECTED_ROOT_STRUCTURE,
    Status.REJECTED_SIGN_PATTERN,
    Status.REJECTED_NON_INTEGER,
})


class DegenerateCubic(ValueError):
    pass


class MomentMismatch(ValueError):
    pass


class ClosedFormInvalid(ValueError):
    pass


@dataclass(frozen=True)
class CandidateParameters:
    n: int
    M: int
    T: Optional[int] = None


@dataclass(frozen=True)
class InnerProductTriple:
    """Inner products a < b < c, each an exact rational or an isolating interval."""

    a: Root
    b: Root
    c: Root

    def __iter__(self):
        return iter((self.a, self.b, self.c))

    @property
    def is_exact(self) -> bool:
        return all(not isinstance(x, IsolatingInterval) or x.is_exact for x in self)

    def exact_values(self) -> tuple[Fraction, Fraction, Fraction]:
        if not self.is_exact:
            raise ValueError("triple has irrational entries")
        return tuple(x.lo if isinstance(x, IsolatingInterval) else as_rational(x) for x in self)

    def refined(self, width) -> "InnerProductTriple":
        return InnerProductTriple(*(
            x.refine(width) if isinstance(x, IsolatingInterval) else x for x in self
        ))


@dataclass(frozen=True)
class DistanceDistribution:
    X: Union[Fraction, RationalInterval]
    Y: Union[Fraction, RationalInterval]
    Z: Union[Fraction, RationalInterval]

    def __iter__(self):
        return iter((self.X, self.Y, self.Z))

    @property
    def is_exact(self) -> bool:
        return not any(isinstance(v, RationalInterval) for v in self)

    def product(self):
        return self.X * self.Y * self.Z

    def certainly_not_design(self) -> bool:
        """Some count provably is not a nonnegative integer."""
        for v in self:
            if isinstance(v, RationalInterval):
                if v.excludes_nonnegative_integers():
                    return True
            elif v < 0 or v.denominator != 1:
                return True
        return False


@dataclass(frozen=True)
class KnownFamily:
    family: str
    m: Optional[int] = None

    def __str__(self):
        return f"{self.family}(m={self.m})" if self.m is not None else self.family


@dataclass
class CandidateReport:
    parameters: CandidateParameters
    status: Status
    inner_products: Optional[InnerProductTriple] = None
    distribution: Optional[DistanceDistribution] = None
    families: tuple[KnownFamily, ...] = ()
    derived: Optional[list[DerivedCodeReport]] = None
    cubic: Optional[Poly] = field(default=None, repr=False)

    @property
    def key(self) -> tuple[int, int]:
        return (self.parameters.n, self.parameters.M)


# ---------------------------------------------------------------------------
# Parameter-level formulas
# ---------------------------------------------------------------------------


def cardinality_bounds(n: int) -> tuple[int, int]:
    """Delsarte-Goethals-Seidel range ``n(n+1) <= M <= n(n+1)(n+5)/6``."""
    if n < 2:
        raise ValueError("need n >= 2")
    return n * (n + 1), n * (n + 1) * (n + 5) // 6


def divisibility_filter(n: int, M: int) -> Optional[int]:
    """``T = 2M/n`` when n divides 2M, else None."""
    q, r = divmod(2 * M, n)
    return q if r == 0 else None


def cubic_coefficients(n: int, M) -> tuple:
    """Integer coefficients (A, B, C, D) of ``A t^3 + B t^2 + C t + D``."""
    return (
        (n + 2) * (n * (n + 3) - 2 * M),
        -n * (n + 2) * (n - 1),
        6 * M - 5 * n * n - 7 * n,
        n * (n - 1),
    )


def inner_product_cubic(n: int, M) -> Poly:
    A, B, C, D = cubic_coefficients(n, as_rational(M))
    if A == 0:
        raise DegenerateCubic(f"cubic degenerates at (n, M) = ({n}, {M})")
    return Poly([D, C, B, A])


def quadratic_for_ab(n: int, c) -> Poly:
    """Quadratic whose roots are the two smaller inner products, given the largest one."""
    c = as_rational(c)
    return Poly([
        3 - (n + 2) * c * c,
        2 * c * (c + 1) * (n + 2),
        (n + 2) * ((n + 2) * c * c + 2 * c - 1),
    ])


def vieta_symmetrics(n: int, M) -> tuple[Fraction, Fraction, Fraction]:
    """(a+b+c, ab+bc+ca, abc) from the cubic's coefficients."""
    A, B, C, D = (Fraction(x) for x in cubic_coefficients(n, as_rational(M)))
    if A == 0:
        raise DegenerateCubic(f"cubic degenerates at (n, M) = ({n}, {M})")
    return -B / A, C / A, -D / A


def moment_targets(n: int, M) -> list[Fraction]:
    """Right-hand sides ``f_i M - 1`` of the moment equations, i = 0..5."""
    M = as_rational(M)
    f = [Fraction(1), Fraction(0), Fraction(1, n), Fraction(0), Fraction(3, n * (n + 2)), Fraction(0)]
    return [fi * M - 1 for fi in f]


def distance_distribution(n: int, M, roots) -> DistanceDistribution:
    """Solve the degree 0..2 moment equations at the three roots; verify degrees 3..5.

    With interval roots the result is a certified enclosure and the verification
    is a containment check.
    """
    xs = [as_scalar(r) for r in roots]
    if len(xs) != 3:
        raise ValueError("need three inner products")
    rhs = moment_targets(n, M)
    sol = solve_vandermonde(xs, rhs[:3])
    for i in range(3, 6):
        val = sum((x**i * s for x, s in zip(xs, sol)), Fraction(0))
        ok = rhs[i] in val if isinstance(val, RationalInterval) else val == rhs[i]
        if not ok:
            raise MomentMismatch(f"moment mismatch at degree {i} for (n, M) = ({n}, {M})")
    return DistanceDistribution(*sol)


def closed_form_distribution(a, b, c) -> DistanceDistribution:
    """(X, Y, Z) from the odd-moment closed forms; undefined when a pairwise sum vanishes."""
    a, b, c = (as_rational(x) for x in (a, b, c))
    if 0 in (a, b, c) or len({a, b, c}) < 3:
        raise ValueError("need distinct nonzero inner products")
    if 0 in (a + b, b + c, c + a):
        raise ValueError("degenerate: use moment solve")

    def one(u, v, w):
        return -(1 - v * v) * (1 - w * w) / (u * (u * u - v * v) * (u * u - w * w))

    return DistanceDistribution(one(a, b, c), one(b, c, a), one(c, a, b))


def r1_form(n: int, M: int) -> int:
    """``(n+2)^3 (2M - n(n+3))^4`` times the squared Vandermonde of the cubic's roots."""
    return (
        1728 * M**4 - 5184 * M**3 * n**2 - 8640 * M**3 * n
        + 144 * M**2 * n**5 + 5760 * M**2 * n**4 + 19152 * M**2 * n**3 + 16416 * M**2 * n**2
        - 240 * M * n**7 - 3136 * M * n**6 - 13920 * M * n**5 - 24000 * M * n**4 - 14000 * M * n**3
        + 4 * n**10 + 88 * n**9 + 780 * n**8 + 3536 * n**7 + 8540 * n**6 + 10200 * n**5
        + 4500 * n**4
    )


def r2_form(n: int, T: int) -> int:
    """``r1_form(n, nT/2) / n^4``."""
    return (
        108 * T**4 - 648 * T**3 * n - 1080 * T**3
        + 36 * T**2 * n**3 + 1440 * T**2 * n**2 + 4788 * T**2 * n + 4104 * T**2
        - 120 * T * n**4 - 1568 * T * n**3 - 6960 * T * n**2 - 12000 * T * n - 7000 * T
        + 4 * (n + 1) * (n + 3) ** 2 * (n + 5) ** 3
    )


def xyz_product(n: int, M: int) -> Fraction:
    """X*Y*Z as a rational function of (n, M); the T-form is cross-checked when n | 2M."""
    e1, e2, e3 = vieta_symmetrics(n, M)
    if e1 * e2 - e3 == 0:
        raise ClosedFormInvalid("closed form invalid: a pairwise sum of roots vanishes; "
                                "fall back to componentwise product")
    r1 = r1_form(n, M)
    if r1 == 0:
        raise ClosedFormInvalid("closed form invalid: repeated roots")
    value = Fraction(M**2 * (n - 1) * (n + 2) ** 2 * (2 * M - n * (n + 3)) ** 5, n**3 * r1)
    T = divisibility_filter(n, M)
    if T is not None:
        alt = Fraction(T**2 * (n - 1) * (n + 2) ** 2 * (T - n - 3) ** 5, 4 * r2_form(n, T))
        if alt != value:
            raise ClosedFormInvalid(f"R1 and R2 forms disagree at (n, M) = ({n}, {M})")
    return value


def recognize_known_family(n: int, M: int) -> list[KnownFamily]:
    """Parameter families of the conjectured classification that (n, M) matches."""
    out = []
    if n == 2 and M in (6, 7):
        out.append(KnownFamily("Polygon", M))
    if M == n * (n + 1):
        if n == 3:
            out.append(KnownFamily("Tight5"))  # icosahedron, inner products -1, +-1/sqrt(5)
        m = isqrt(n + 2)
        if m * m == n + 2 and m % 2 == 1 and m >= 3:
            out.append(KnownFamily("Tight5", m))
    if (n + 5) % 3 == 0:
        m = isqrt((n + 5) // 3)
        if m >= 2 and 3 * m * m - 5 == n and 2 * M == m**4 * n:
            out.append(KnownFamily("Case3", m))
    return out


# ---------------------------------------------------------------------------
# Exact single-candidate pipeline
# ---------------------------------------------------------------------------


def _to_iv(x: Root, p: Poly) -> IsolatingInterval:
    if isinstance(x, IsolatingInterval):
        return x
    x = as_rational(x)
    return IsolatingInterval(x, x, p)


def _is_negation(x: IsolatingInterval, y: IsolatingInterval) -> bool:
    """Whether y = -x for two distinct roots of the same square-free polynomial."""
    p = y.poly
    if x.is_exact:
        r = -x.lo
        return y.lo <= r <= y.hi and p(r) == 0
    if y.is_exact:
        return _is_negation(y, x)
    g = poly_gcd(p, p.reflect())
    if g.degree < 1 or not isolate_real_roots(g, (x.lo, x.hi)):
        return False
    while True:
        lo, hi = -x.hi, -x.lo
        if y.lo < lo and hi < y.hi:
            return True
        if hi < y.lo or lo > y.hi:
            return False
        x = x.refine(x.width / 4)


def compare_abs(x: Root, y: Root, p: Optional[Poly] = None) -> int:
    """Sign of ``|x| - |y|`` for roots of a common square-free polynomial."""
    if not isinstance(x, IsolatingInterval) and not isinstance(y, IsolatingInterval):
        d = abs(as_rational(x)) - abs(as_rational(y))
        return (d > 0) - (d < 0)
    p = p or (x.poly if isinstance(x, IsolatingInterval) else y.poly)
    x, y = _to_iv(x, p), _to_iv(y, p)
    if x.is_exact and y.is_exact:
        return compare_abs(x.lo, y.lo)
    if _is_negation(x, y):
        return 0
    while True:
        ax, ay = abs(x.enclosure()), abs(y.enclosure())
        if ax.lo > ay.hi:
            return 1
        if ax.hi < ay.lo:
            return -1
        w = max(x.width, y.width) / 2**16
        x, y = x.refine(w), y.refine(w)


def sign_pattern_holds(triple: InnerProductTriple) -> bool:
    """|a| > |c| > |b| > 0."""
    a, b, c = triple
    if not isinstance(b, IsolatingInterval) or b.is_exact:
        bval = b.lo if isinstance(b, IsolatingInterval) else b
        if bval == 0:
            return False
    return compare_abs(a, c) > 0 and compare_abs(c, b) > 0


def certified_distribution(n: int, M, triple: InnerProductTriple, width=DEFAULT_WIDTH):
    """Distribution of ``triple``; for irrational roots, enclosures narrower than 1.

    Returns the (possibly refined) triple and the distribution.
    """
    if triple.is_exact:
        return triple, distance_distribution(n, M, triple)
    w = as_rational(width)
    while True:
        triple = triple.refined(w)
        dist = distance_distribution(n, M, triple)
        if all(not isinstance(v, RationalInterval) or v.width < 1 for v in dist):
            return triple, dist
        w /= 2**32


def classify(n: int, M: int, *, divisibility: bool = True, width=DEFAULT_WIDTH) -> CandidateReport:
    """Run one candidate through every filter in exact arithmetic."""
    T = divisibility_filter(n, M) if n > 0 else None
    params = CandidateParameters(n, M, T)
    if n < 2:
        return CandidateReport(params, Status.OUT_OF_RANGE)
    lo, hi = cardinality_bounds(n)
    if not lo <= M <= hi:
        return CandidateReport(params, Status.OUT_OF_RANGE)
    if divisibility and T is None:
        return CandidateReport(params, Status.REJECTED_DIVISIBILITY)
    try:
        cubic = inner_product_cubic(n, M)
    except DegenerateCubic:
        return CandidateReport(params, Status.REJECTED_ROOT_STRUCTURE)
    roots = [iv for iv in isolate_real_roots(cubic, (-1, 1)) if iv.lo < 1]
    if len(roots) != 3:
        return CandidateReport(params, Status.REJECTED_ROOT_STRUCTURE, cubic=cubic)
    triple = InnerProductTriple(*(r.lo if r.is_exact else r for r in roots))
    # the sign pattern is a property of non-tight designs only
    if M != n * (n + 1) and not sign_pattern_holds(triple):
        return CandidateReport(params, Status.REJECTED_SIGN_PATTERN, triple, cubic=cubic)
    triple, dist = certified_distribution(n, M, triple, width)
    if dist.certainly_not_design():
        return CandidateReport(params, Status.REJECTED_NON_INTEGER, triple, dist, cubic=cubic)
    families = tuple(recognize_known_family(n, M))
    if families:
        return CandidateReport(params, Status.KNOWN_FAMILY, triple, dist, families, cubic=cubic)
    derived = derived_analysis(n, M, triple, dist)
    status = Status.REFUTED_BY_DERIVED if any(r.is_contradiction for r in derived) else Status.UNRESOLVED
    if status is Status.UNRESOLVED:
        log.warning("unresolved survivor (n, M) = (%d, %d)", n, M)
    return CandidateReport(params, status, triple, dist, families, derived, cubic=cubic)


# ---------------------------------------------------------------------------
# Scanning
# ---------------------------------------------------------------------------


@dataclass
class ScanResult:
    records: list[CandidateReport]
    counts: Counter
    examined: int


CHUNK = 1 << 20


def candidate_cardinalities(n: int, divisibility: bool = True) -> np.ndarray:
    """M in (n(n+1), n(n+1)(n+5)/6], restricted to n | 2M when ``divisibility``."""
    return np.concatenate(list(candidate_chunks(n, divisibility)) or [np.zeros(0, dtype=np.int64)])


def candidate_chunks(n: int, divisibility: bool = True, chunk: int = CHUNK):
    """Same candidates as :func:`candidate_cardinalities`, in bounded-size arrays."""
    lo, hi = cardinality_bounds(n)
    step = n // 2 if divisibility and n % 2 == 0 else (n if divisibility else 1)
    first = (lo // step + 1) * step
    for start in range(first, hi + 1, step * chunk):
        yield np.arange(start, min(hi, start + step * (chunk - 1)) + 1, step, dtype=np.int64)


def scan_dimension(n: int, *, divisibility: bool = True, verbose: bool = False,
                   width_scale: float = 1.0) -> ScanResult:
    from .screen import SCREEN_STATUS, UNDECIDED, screen

    records: list[CandidateReport] = []
    counts: Counter = Counter()
    examined = 0
    tight = n * (n + 1)
    # tight designs sit on the lower bound, outside the searched range; report known ones
    if recognize_known_family(n, tight):
        rep = classify(n, tight, divisibility=divisibility)
        records.append(rep)
        counts[rep.status] += 1
        examined += 1
    for M in candidate_chunks(n, divisibility):
        examined += int(M.size)
        codes = screen(n, M, width_scale=width_scale)
        for code, status in SCREEN_STATUS.items():
            k = int(np.count_nonzero(codes == code))
            if k:
                counts[status] += k
            if verbose and k:
                for m in M[codes == code]:
                    m = int(m)
                    records.append(CandidateReport(CandidateParameters(n, m, divisibility_filter(n, m)), status))
        for m in M[codes == UNDECIDED]:
            rep = classify(n, int(m), divisibility=divisibility)
            counts[rep.status] += 1
            if verbose or rep.status not in REJECTED:
                records.append(rep)
    records.sort(key=lambda r: r.key)
    return ScanResult(records, counts, examined)


def _scan_dimension_worker(args):
    n, divisibility, verbose, width_scale = args
    return scan_dimension(n, divisibility=divisibility, verbose=verbose, width_scale=width_scale)


def run_scan(n_lo: int, n_hi: int, *, divisibility: bool = True, verbose: bool = False,
             jobs: int = 1, width_scale: float = 1.0,
             progress: Optional[Callable[[int, ScanResult], None]] = None) -> ScanResult:
    """Classify every candidate with ``n_lo <= n <= n_hi``; deterministic (n, M) order."""
    if not 2 <= n_lo <= n_hi:
        raise ValueError("need 2 <= n_lo <= n_hi")
    dims = list(range(n_lo, n_hi + 1))
    tasks = [(n, divisibility, verbose, width_scale) for n in dims]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            # large dimensions first for load balance
            order = sorted(tasks, key=lambda t: -t[0])
            parts = dict(zip([t[0] for t in order], ex.map(_scan_dimension_worker, order, chunksize=4)))
        results = [parts[n] for n in dims]
        if progress:
            for n, r in zip(dims, results):
                progress(n, r)
    else:
        results = []
        for t in tasks:
            r = _scan_dimension_worker(t)
            results.append(r)
            if progress:
                progress(t[0], r)
    records = [rec for r in results for rec in r.records]
    counts: Counter = Counter()
    for r in results:
        counts.update(r.counts)
    return ScanResult(records, counts, sum(r.examined for r in results))


def scan_range(n_lo: int, n_hi: int, **kwargs) -> list[CandidateReport]:
    return run_scan(n_lo, n_hi, **kwargs).records
