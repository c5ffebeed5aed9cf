"""Explicit codes for ground-truth checks: Gram matrices, spectra, design strength.

Codes are stored by their Gram matrix.  Exact instances hold :class:`Fraction`
entries and every check is an identity; numeric instances (irrational codes such
as the heptagon and icosahedron) hold floats and use an explicit tolerance.

Design file format::

    # comment
    design <coords|gram> dim=<n> size=<M> [exact|numeric]
    <M rows of whitespace-separated tokens: decimals or p/q>
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence, TextIO, Union

import numpy as np

from .exact import as_rational, isolate_real_roots
from .orthopoly import gegenbauer_polynomial, levenshtein_bound_L5, levenshtein_polynomial

DEFAULT_TOL = 1e-9

FIXTURES = ("hexagon", "heptagon", "icosahedron", "e8_derived_56", "e8_roots")


class DesignFormatError(ValueError):
    pass


@dataclass(frozen=True)
class DesignInstance:
    n: int
    M: int
    gram: tuple
    exact: bool
    coords: Optional[tuple] = None
    tol: float = DEFAULT_TOL
    name: str = ""

    def gram_array(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.gram])


@dataclass(frozen=True)
class SpectrumReport:
    per_point: tuple  # one {inner product: count} mapping per point, diagonal excluded
    distinct: tuple  # global distinct off-diagonal inner products, ascending

    @property
    def constant(self) -> bool:
        return all(d == self.per_point[0] for d in self.per_point)


@dataclass
class CheckItem:
    passed: bool
    detail: str = ""


@dataclass
class WitnessReport:
    name: str
    items: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.items) and all(i.passed for i in self.items.values())


# ---------------------------------------------------------------------------
# construction and validation
# ---------------------------------------------------------------------------


def from_gram(n: int, rows, *, exact: bool, tol: float = DEFAULT_TOL, name: str = "",
              check_psd: bool = False) -> DesignInstance:
    M = len(rows)
    conv = as_rational if exact else float
    gram = tuple(tuple(conv(x) for x in row) for row in rows)
    if any(len(r) != M for r in gram):
        raise DesignFormatError("gram matrix must be square")
    for i in range(M):
        if (gram[i][i] != 1) if exact else abs(gram[i][i] - 1) > tol:
            raise DesignFormatError(f"gram diagonal entry {i} is not 1")
        for j in range(i):
            if (gram[i][j] != gram[j][i]) if exact else abs(gram[i][j] - gram[j][i]) > tol:
                raise DesignFormatError(f"gram matrix is not symmetric at ({i}, {j})")
    inst = DesignInstance(n, M, gram, exact, tol=tol, name=name)
    if check_psd:
        rank = gram_rank_psd(inst)
        if rank is None:
            raise DesignFormatError("gram matrix is not positive semidefinite")
        if rank > n:
            raise DesignFormatError(f"gram matrix has rank {rank} > dimension {n}")
    return inst


def from_coords(rows, *, exact: bool, tol: float = DEFAULT_TOL, name: str = "") -> DesignInstance:
    conv = as_rational if exact else float
    vecs = tuple(tuple(conv(x) for x in row) for row in rows)
    if not vecs:
        raise DesignFormatError("empty code")
    n = len(vecs[0])
    if any(len(v) != n for v in vecs):
        raise DesignFormatError("coordinate rows must all have the same length")
    for i, v in enumerate(vecs):
        norm2 = sum(x * x for x in v)
        if (norm2 != 1) if exact else abs(norm2 - 1) > tol:
            raise DesignFormatError(f"row {i} is not a unit vector (squared norm {norm2})")
    if exact:
        gram = tuple(tuple(sum(x * y for x, y in zip(u, v)) for v in vecs) for u in vecs)
    else:
        X = np.array(vecs)
        G = X @ X.T
        np.fill_diagonal(G, 1.0)
        gram = tuple(tuple(float(x) for x in row) for row in G)
    return DesignInstance(n, len(vecs), gram, exact, coords=vecs, tol=tol, name=name)


def gram_rank_psd(inst: DesignInstance) -> Optional[int]:
    """Rank of the Gram matrix, or None if it is not positive semidefinite."""
    if not inst.exact:
        w = np.linalg.eigvalsh(inst.gram_array())
        if w.min() < -math.sqrt(inst.tol) * inst.M:
            return None
        return int(np.count_nonzero(w > math.sqrt(inst.tol) * inst.M))
    A = [list(row) for row in inst.gram]
    m, rank = inst.M, 0
    for k in range(m):
        piv = A[k][k]
        if piv < 0:
            return None
        if piv == 0:
            if any(A[k][j] != 0 for j in range(k, m)):
                return None
            continue
        rank += 1
        for i in range(k + 1, m):
            f = A[i][k] / piv
            if f:
                Ai, Ak = A[i], A[k]
                for j in range(k + 1, m):
                    Ai[j] -= f * Ak[j]
    return rank


# ---------------------------------------------------------------------------
# file format
# ---------------------------------------------------------------------------


def parse_design(text: str, *, require_exact: bool = False, check_psd: bool = True) -> DesignInstance:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise DesignFormatError("empty design file")
    head = lines[0].split()
    if len(head) < 4 or head[0] != "design" or head[1] not in ("coords", "gram"):
        raise DesignFormatError("header must be: design <coords|gram> dim=<n> size=<M> [exact|numeric]")
    try:
        kv = dict(tok.split("=", 1) for tok in head[2:4])
        n, M = int(kv["dim"]), int(kv["size"])
    except (ValueError, KeyError) as exc:
        raise DesignFormatError(f"bad header fields: {' '.join(head[2:4])}") from exc
    mode = head[4] if len(head) > 4 else None
    if mode not in (None, "exact", "numeric"):
        raise DesignFormatError(f"unknown mode {mode!r}")
    rows = [ln.split() for ln in lines[1:]]
    if len(rows) != M:
        raise DesignFormatError(f"expected {M} rows, found {len(rows)}")
    width = n if head[1] == "coords" else M
    for i, r in enumerate(rows):
        if len(r) != width:
            raise DesignFormatError(f"row {i} has {len(r)} tokens, expected {width}")
    if mode is None:
        exact = not any(c in tok for r in rows for tok in r for c in ".eE")
    else:
        exact = mode == "exact"
    if require_exact and not exact:
        raise DesignFormatError("exact mode requires rational tokens")
    try:
        if exact:
            [as_rational(tok) for r in rows for tok in r]
        else:
            [float(Fraction(tok)) for r in rows for tok in r]
    except (ValueError, ZeroDivisionError) as exc:
        raise DesignFormatError(f"unparseable token: {exc}") from exc
    if head[1] == "coords":
        conv = rows if exact else [[float(Fraction(t)) for t in r] for r in rows]
        return from_coords(conv, exact=exact)
    conv = rows if exact else [[float(Fraction(t)) for t in r] for r in rows]
    return from_gram(n, conv, exact=exact, check_psd=check_psd)


def load_design(source: Union[str, Path], **kwargs) -> DesignInstance:
    path = Path(source)
    inst = parse_design(path.read_text(), **kwargs)
    return DesignInstance(**{**inst.__dict__, "name": path.stem})


def write_design(inst: DesignInstance, out: TextIO, *, coords: bool = False) -> None:
    kind = "coords" if coords and inst.coords is not None else "gram"
    rows = inst.coords if kind == "coords" else inst.gram
    mode = "exact" if inst.exact else "numeric"
    out.write(f"# {inst.name or 'design'}\n")
    out.write(f"design {kind} dim={inst.n} size={inst.M} {mode}\n")
    for row in rows:
        out.write(" ".join(str(x) if inst.exact else repr(float(x)) for x in row) + "\n")


# ---------------------------------------------------------------------------
# fixtures
# ---------------------------------------------------------------------------


def e8_roots() -> list[tuple[int, ...]]:
    """The 240 roots of E8, coordinates doubled so that all entries are integers."""
    roots = []
    for i, j in itertools.combinations(range(8), 2):
        for si, sj in itertools.product((2, -2), repeat=2):
            v = [0] * 8
            v[i], v[j] = si, sj
            roots.append(tuple(v))
    for signs in itertools.product((1, -1), repeat=8):
        if signs.count(-1) % 2 == 0:
            roots.append(signs)
    return roots


def _polygon_gram(k: int):
    return [[math.cos(2 * math.pi * (i - j) / k) for j in range(k)] for i in range(k)]


def fixture(name: str) -> DesignInstance:
    if name == "hexagon":
        cos6 = {0: 1, 1: Fraction(1, 2), 2: Fraction(-1, 2), 3: -1, 4: Fraction(-1, 2), 5: Fraction(1, 2)}
        rows = [[cos6[(i - j) % 6] for j in range(6)] for i in range(6)]
        return from_gram(2, rows, exact=True, name=name)
    if name == "heptagon":
        return from_gram(2, _polygon_gram(7), exact=False, name=name)
    if name == "icosahedron":
        phi = (1 + math.sqrt(5)) / 2
        pts = []
        for s1, s2 in itertools.product((1, -1), repeat=2):
            base = (0.0, s1 * 1.0, s2 * phi)
            for k in range(3):
                pts.append(base[k:] + base[:k])
        norm = math.sqrt(1 + phi * phi)
        return from_coords([[x / norm for x in p] for p in pts], exact=False, name=name)
    if name == "e8_roots":
        R = np.array(e8_roots())
        G = R @ R.T  # doubled coordinates: squared norm 8
        rows = [[Fraction(int(x), 8) for x in row] for row in G]
        return from_gram(8, rows, exact=True, name=name)
    if name == "e8_derived_56":
        R = np.array(e8_roots())
        base = R[0]
        nbrs = R[(R @ base) == 4]  # normalized inner product 1/2 with the base root
        G = nbrs @ nbrs.T
        u2 = Fraction(1, 4)
        rows = [[(Fraction(int(x), 8) - u2) / (1 - u2) for x in row] for row in G]
        return from_gram(7, rows, exact=True, name=name)
    raise KeyError(f"unknown fixture {name!r}; choose from {', '.join(FIXTURES)}")


# ---------------------------------------------------------------------------
# spectra and strength
# ---------------------------------------------------------------------------


def _cluster(values: np.ndarray, tol: float) -> np.ndarray:
    v = np.sort(values)
    if v.size == 0:
        return v
    breaks = np.nonzero(np.diff(v) > tol)[0] + 1
    return np.array([g.mean() for g in np.split(v, breaks)])


def spectrum(inst: DesignInstance) -> SpectrumReport:
    if inst.exact:
        per = []
        for i, row in enumerate(inst.gram):
            per.append(dict(sorted(Counter(x for j, x in enumerate(row) if j != i).items())))
        distinct = tuple(sorted({t for d in per for t in d}))
        return SpectrumReport(tuple(per), distinct)
    G = inst.gram_array()
    off = G[~np.eye(inst.M, dtype=bool)]
    reps = _cluster(off, 1e3 * inst.tol)
    per = []
    for i in range(inst.M):
        row = np.delete(G[i], i)
        idx = np.abs(row[:, None] - reps[None, :]).argmin(axis=1)
        per.append(dict(sorted(Counter(float(reps[k]) for k in idx).items())))
    return SpectrumReport(tuple(per), tuple(float(x) for x in reps))


def moment_sums(inst: DesignInstance, k_max: int) -> list:
    """``sum_{x,y} P_k^{(n)}(<x, y>)`` for k = 1..k_max."""
    if inst.exact:
        counts = Counter(x for row in inst.gram for x in row)
        return [sum(c * gegenbauer_polynomial(k, inst.n)(t) for t, c in counts.items())
                for k in range(1, k_max + 1)]
    G = inst.gram_array()
    out = []
    for k in range(1, k_max + 1):
        coeffs = [float(c) for c in reversed(gegenbauer_polynomial(k, inst.n).coeffs)]
        out.append(float(np.polyval(coeffs, G).sum()))
    return out


def design_strength(inst: DesignInstance, tau_max: int, tol: Optional[float] = None) -> int:
    """Largest tau <= tau_max with vanishing moment sums for every degree 1..tau."""
    if tau_max < 1:
        raise ValueError("tau_max must be >= 1")
    tol = inst.tol if tol is None else tol
    tau = 0
    for s in moment_sums(inst, tau_max):
        zero = s == 0 if inst.exact else abs(s) <= tol * inst.M**2
        if not zero:
            break
        tau += 1
    return tau


def verify_conjecture_witness(inst: DesignInstance, root_tol: float = 1e-6) -> WitnessReport:
    """Check a 3-distance code against every structural statement about 3-distance 5-designs."""
    from .feasibility import certified_distribution, distance_distribution, inner_product_cubic
    from .feasibility import InnerProductTriple

    rep = WitnessReport(inst.name)
    spec = spectrum(inst)
    if len(spec.distinct) != 3:
        rep.items["three_distance"] = CheckItem(False, f"{len(spec.distinct)} distinct inner products")
        return rep
    rep.items["three_distance"] = CheckItem(True, "inner products " + ", ".join(map(str, spec.distinct)))
    n, M = inst.n, inst.M
    a, b, c = spec.distinct

    tau = design_strength(inst, 5)
    rep.items["strength"] = CheckItem(tau >= 5, f"strength >= {tau}")
    rep.items["constant_distribution"] = CheckItem(spec.constant, "per-point spectrum identical" if spec.constant
                                                   else "per-point spectrum varies")
    counts = list(spec.per_point[0].values())

    if inst.exact:
        try:
            dist = list(distance_distribution(n, M, (a, b, c)))
            rep.items["distribution"] = CheckItem(dist == counts, f"predicted {[str(x) for x in dist]}, "
                                                                  f"observed {counts}")
        except ValueError as exc:
            rep.items["distribution"] = CheckItem(False, str(exc))
        s = c
        try:
            roots = [iv.lo for iv in isolate_real_roots(levenshtein_polynomial(3, n, s), (-1, 1))]
            rep.items["levenshtein_roots"] = CheckItem(roots == [a, b, c], f"roots {[str(r) for r in roots]}")
        except ValueError as exc:
            rep.items["levenshtein_roots"] = CheckItem(False, str(exc))
        try:
            L = levenshtein_bound_L5(n, s)
            rep.items["levenshtein_bound"] = CheckItem(L == M, f"L5 = {L}")
        except ValueError as exc:
            rep.items["levenshtein_bound"] = CheckItem(False, str(exc))
        return rep

    # numeric: compare against certified roots of the inner-product cubic
    ivs = isolate_real_roots(inner_product_cubic(n, M), (-1, 1))
    if len(ivs) != 3:
        rep.items["distribution"] = CheckItem(False, "cubic does not have three roots in [-1, 1)")
        return rep
    triple = InnerProductTriple(*(iv.lo if iv.is_exact else iv for iv in ivs))
    triple, dist = certified_distribution(n, M, triple)
    mids = [float(iv.lo if iv.is_exact else (iv.lo + iv.hi) / 2) if hasattr(iv, "lo") else float(iv)
            for iv in triple]
    near = all(abs(x - y) <= root_tol for x, y in zip(mids, spec.distinct))
    fits = all((v == k) if not hasattr(v, "lo") else (v.lo - root_tol <= k <= v.hi + root_tol)
               for v, k in zip(dist, counts))
    rep.items["distribution"] = CheckItem(near and fits, f"observed {counts}, tolerance {root_tol}")
    s = Fraction(float(c))
    roots = [float(iv.lo if iv.is_exact else (iv.refine(Fraction(1, 10**12)).lo))
             for iv in isolate_real_roots(levenshtein_polynomial(3, n, s), (Fraction(-11, 10), 1))]
    ok = len(roots) == 3 and all(abs(x - y) <= root_tol for x, y in zip(roots, spec.distinct))
    rep.items["levenshtein_roots"] = CheckItem(ok, f"roots {roots}, tolerance {root_tol}")
    L = float(levenshtein_bound_L5(n, s))
    rep.items["levenshtein_bound"] = CheckItem(abs(L - M) <= root_tol * M, f"L5 = {L}, tolerance {root_tol}")
    return rep
