"""Exact rational arithmetic, univariate polynomials and certified real-root isolation.

Rationals are :class:`fractions.Fraction`.  Polynomials keep their coefficients
constant-term first and never store trailing zeros.  Real roots are isolated with
Sturm sequences; every sign decision is an exact rational evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import floor, ceil, gcd, lcm
from typing import Iterable, Sequence, Union

Rational = Fraction
Number = Union[int, Fraction]


def as_rational(x) -> Fraction:
    """Parse ints, Fractions, ``"p/q"`` strings and finite decimal strings exactly."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational: {x!r}") from exc
    if isinstance(x, float):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to Rational")


def p_adic_valuation(p: int, A: int) -> int:
    """Exponent of the largest power of the prime ``p`` dividing ``A``."""
    from sympy import isprime

    if A == 0:
        raise ValueError("valuation undefined for A = 0")
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    A = abs(A)
    v = 0
    while A % p == 0:
        A //= p
        v += 1
    return v


# ---------------------------------------------------------------------------
# Rational intervals
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RationalInterval:
    """Closed interval ``[lo, hi]`` with rational endpoints, with interval arithmetic."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", as_rational(self.lo))
        object.__setattr__(self, "hi", as_rational(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @staticmethod
    def point(x: Number) -> "RationalInterval":
        return RationalInterval(x, x)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def integers(self) -> range:
        return range(ceil(self.lo), floor(self.hi) + 1)

    def excludes_nonnegative_integers(self) -> bool:
        return self.hi < 0 or ceil(max(self.lo, Fraction(0))) > self.hi

    @staticmethod
    def _coerce(x) -> "RationalInterval":
        if isinstance(x, RationalInterval):
            return x
        return RationalInterval.point(as_rational(x))

    def __add__(self, other):
        o = self._coerce(other)
        return RationalInterval(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self):
        return RationalInterval(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        prods = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return RationalInterval(min(prods), max(prods))

    __rmul__ = __mul__

    def reciprocal(self) -> "RationalInterval":
        if self.contains_zero():
            raise ZeroDivisionError("interval contains zero")
        return RationalInterval(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other):
        return self * self._coerce(other).reciprocal()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.reciprocal()

    def __pow__(self, k: int):
        if k == 0:
            return RationalInterval.point(1)
        if k % 2 == 1 or self.lo >= 0:
            ends = (self.lo**k, self.hi**k)
            return RationalInterval(min(ends), max(ends))
        if self.hi <= 0:
            return RationalInterval(self.hi**k, self.lo**k)
        return RationalInterval(0, max(self.lo**k, self.hi**k))

    def __abs__(self):
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return RationalInterval(0, max(-self.lo, self.hi))

    def __str__(self):
        return f"[{self.lo}, {self.hi}]"


Scalar = Union[Fraction, RationalInterval]


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------


class Poly:
    """Immutable univariate polynomial with rational coefficients (constant term first)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [as_rational(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def t(cls) -> "Poly":
        return cls([0, 1])

    @classmethod
    def constant(cls, c) -> "Poly":
        return cls([c])

    @classmethod
    def from_roots(cls, roots: Iterable, lead=1) -> "Poly":
        p = cls([lead])
        for r in roots:
            p = p * cls([-as_rational(r), 1])
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, x):
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Poly([other]).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly({[str(c) for c in self.coeffs]})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            if mono and c in (1, -1):
                coef = "" if c == 1 else "-"
            else:
                coef = f"({c})" if c.denominator != 1 else str(c)
                if mono:
                    coef += "*"
            terms.append(coef + mono)
        return " + ".join(terms).replace("+ -", "- ")

    @staticmethod
    def _coerce(x) -> "Poly":
        return x if isinstance(x, Poly) else Poly([x])

    def __add__(self, other):
        o = self._coerce(other)
        n = max(len(self.coeffs), len(o.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = o.coeffs + (Fraction(0),) * (n - len(o.coeffs))
        return Poly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        if not self.coeffs or not o.coeffs:
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(o.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Poly([1])
        for _ in range(k):
            out = out * self
        return out

    def __truediv__(self, c):
        c = as_rational(c)
        return Poly(x / c for x in self.coeffs)

    def __divmod__(self, other: "Poly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Poly(), self
        quot = [Fraction(0)] * (dq + 1)
        lead = other.lead
        for k in range(dq, -1, -1):
            q = rem[k + other.degree] / lead
            quot[k] = q
            if q:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= q * b
        return Poly(quot), Poly(rem[: other.degree])

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def derivative(self) -> "Poly":
        return Poly(i * c for i, c in enumerate(self.coeffs) if i)

    def reflect(self) -> "Poly":
        """``p(-t)``."""
        return Poly(c if i % 2 == 0 else -c for i, c in enumerate(self.coeffs))

    def content(self) -> Fraction:
        """Positive rational ``c`` with ``p / c`` having coprime integer coefficients."""
        if not self.coeffs:
            return Fraction(1)
        den = reduce(lcm, (c.denominator for c in self.coeffs), 1)
        num = reduce(gcd, (c.numerator * (den // c.denominator) for c in self.coeffs), 0)
        return Fraction(num, den)

    def primitive(self) -> "Poly":
        """Integer, content-free form with positive leading coefficient."""
        if not self.coeffs:
            return self
        q = self / self.content()
        return -q if q.lead < 0 else q

    def integer_coeffs(self) -> list[int]:
        return [int(c) for c in self.primitive().coeffs]

    def monic(self) -> "Poly":
        return self / self.lead

    def square_free(self) -> "Poly":
        """Primitive square-free part (same distinct roots, all simple)."""
        g = poly_gcd(self, self.derivative())
        return (self // g).primitive()


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic greatest common divisor (primitive remainders keep numbers small)."""
    a, b = a.primitive(), b.primitive()
    while not b.is_zero():
        a, b = b, (a % b).primitive()
    return a.monic() if not a.is_zero() else a


# ---------------------------------------------------------------------------
# Sturm sequences and isolation
# ---------------------------------------------------------------------------


def sturm_sequence(p: Poly) -> list[Poly]:
    """Sturm chain of ``p``; members are rescaled only by positive constants."""
    seq = [p, p.derivative()]
    while seq[-1].degree > 0:
        r = -(seq[-2] % seq[-1])
        if r.is_zero():
            break
        seq.append(r / r.content())
    return seq


def sign_variations(seq: Sequence[Poly], x: Fraction) -> int:
    signs = [s for s in (q(x) for q in seq) if s != 0]
    return sum(1 for u, v in zip(signs, signs[1:]) if (u > 0) != (v > 0))


def _sign(x) -> int:
    return (x > 0) - (x < 0)


@dataclass(frozen=True)
class IsolatingInterval:
    """Interval holding exactly one real root of ``poly`` (a square-free polynomial).

    ``lo == hi`` marks an exact rational root.  Otherwise the root lies strictly
    inside and ``poly`` takes nonzero values of opposite sign at the endpoints.
    """

    lo: Fraction
    hi: Fraction
    poly: Poly

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("lo > hi")

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def enclosure(self) -> RationalInterval:
        return RationalInterval(self.lo, self.hi)

    def refine(self, width_bound) -> "IsolatingInterval":
        return refine_interval(self, width_bound)

    def __str__(self):
        return str(self.lo) if self.is_exact else f"({self.lo}, {self.hi})"


def _cauchy_bound(p: Poly) -> Fraction:
    lead = abs(p.lead)
    return 1 + max((abs(c) / lead for c in p.coeffs[:-1]), default=Fraction(0))


def _sturm_isolate(sqf: Poly, lo: Fraction, hi: Fraction) -> list[IsolatingInterval]:
    seq = sturm_sequence(sqf)
    out: list[IsolatingInterval] = []
    if sqf(lo) == 0:
        out.append(IsolatingInterval(lo, lo, sqf))
    if lo == hi:
        return out
    # stack entries: (l, h, number of roots in (l, h])
    stack = [(lo, hi, sign_variations(seq, lo) - sign_variations(seq, hi))]
    found = []
    while stack:
        l, h, k = stack.pop()
        if k == 0:
            continue
        if k == 1:
            # a root at l (not counted in (l, h]) must not be an endpoint of the result
            while sqf(l) == 0 and sqf(h) != 0:
                m = (l + h) / 2
                if sign_variations(seq, l) - sign_variations(seq, m) == 1:
                    h = m
                else:
                    l = m
            if sqf(h) == 0:
                found.append(IsolatingInterval(h, h, sqf))
            else:
                found.append(IsolatingInterval(l, h, sqf))
            continue
        m = (l + h) / 2
        k_left = sign_variations(seq, l) - sign_variations(seq, m)
        stack.append((l, m, k_left))
        stack.append((m, h, k - k_left))
    found.sort(key=lambda iv: iv.lo)
    return out + found


def _exact_rational_in(iv: IsolatingInterval) -> IsolatingInterval:
    """Collapse ``iv`` to ``[r, r]`` if its root is rational (rational-root theorem)."""
    if iv.is_exact:
        return iv
    ints = iv.poly.integer_coeffs()
    L = abs(ints[-1])
    # any rational root is k/L; shrink below spacing 1/L so at most two candidates remain
    iv = refine_interval(iv, Fraction(1, 2 * L))
    if iv.is_exact:
        return iv
    const = ints[0]
    for k in {ceil(iv.lo * L), floor(iv.hi * L)}:
        r = Fraction(k, L)
        if iv.lo < r < iv.hi and (const == 0 or r.numerator == 0 or const % r.numerator == 0):
            if iv.poly(r) == 0:
                return IsolatingInterval(r, r, iv.poly)
    return iv


def isolate_real_roots(p: Poly, domain=None) -> list[IsolatingInterval]:
    """Disjoint isolating intervals, sorted ascending, one per distinct real root in ``domain``.

    ``domain`` is a closed interval ``(lo, hi)``; by default all real roots.  Rational
    roots are returned as degenerate intervals.
    """
    if p.is_zero():
        raise ValueError("zero polynomial has no isolated roots")
    sqf = p.square_free()
    if sqf.degree < 1:
        return []
    if domain is None:
        B = _cauchy_bound(sqf)
        lo, hi = -B, B
    else:
        lo, hi = as_rational(domain[0]), as_rational(domain[1])
    return [_exact_rational_in(iv) for iv in _sturm_isolate(sqf, lo, hi)]


def refine_interval(iv: IsolatingInterval, width_bound) -> IsolatingInterval:
    """Bisect until ``hi - lo <= width_bound``; an exact midpoint hit collapses the interval."""
    width_bound = as_rational(width_bound)
    if width_bound <= 0:
        raise ValueError("width bound must be positive")
    lo, hi, p = iv.lo, iv.hi, iv.poly
    if lo == hi:
        return iv
    s_lo = _sign(p(lo))
    while hi - lo > width_bound:
        m = (lo + hi) / 2
        s = _sign(p(m))
        if s == 0:
            return IsolatingInterval(m, m, p)
        if s == s_lo:
            lo = m
        else:
            hi = m
    return IsolatingInterval(lo, hi, p)


def rational_roots(p: Poly) -> list[Fraction]:
    """Distinct rational roots, ascending.

    A rational root ``u/v`` of the primitive integer form has ``v`` dividing the
    leading coefficient; each isolated real root is narrowed until a single such
    candidate is left and tested exactly.
    """
    if p.is_zero():
        raise ValueError("zero polynomial")
    return [iv.lo for iv in isolate_real_roots(p) if iv.is_exact]


def as_scalar(x) -> Scalar:
    """Exact value of a rational or degenerate interval, else its rational enclosure."""
    if isinstance(x, IsolatingInterval):
        return x.lo if x.is_exact else x.enclosure()
    if isinstance(x, RationalInterval):
        return x
    return as_rational(x)


# ---------------------------------------------------------------------------
# Moment (transposed Vandermonde) systems
# ---------------------------------------------------------------------------


def _expand_product(factors: Sequence[Scalar]) -> list:
    """Coefficients (constant first) of prod (t - f) with generic scalar arithmetic."""
    coeffs: list = [Fraction(1)]
    for f in factors:
        nxt: list = [Fraction(0)] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i + 1] = nxt[i + 1] + c
            nxt[i] = nxt[i] - c * f
        coeffs = nxt
    return coeffs


def solve_vandermonde(nodes: Sequence[Scalar], rhs: Sequence[Scalar]) -> list:
    """Solve ``sum_j x_j * nodes[j]**i = rhs[i]`` for ``i < len(nodes)``.

    Works with exact rationals or :class:`RationalInterval` nodes (then the result
    is a certified enclosure).  Nodes must be distinct.
    """
    k = len(nodes)
    if len(rhs) < k:
        raise ValueError("need one right-hand side per node")
    sol = []
    for j, u in enumerate(nodes):
        others = [v for i, v in enumerate(nodes) if i != j]
        num = _expand_product(others)
        den: Scalar = Fraction(1)
        for v in others:
            den = den * (u - v)
        acc: Scalar = Fraction(0)
        for i in range(k):
            acc = acc + num[i] * rhs[i]
        sol.append(acc / den)
    return sol
