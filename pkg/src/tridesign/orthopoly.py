"""Jacobi and Gegenbauer polynomials, the Levenshtein polynomial and bound, quadrature.

All polynomials are exact and normalized to take the value 1 at ``t = 1``.
Gegenbauer polynomials for dimension ``n`` are Jacobi polynomials with
``alpha = beta = (n - 3)/2``; the adjacent Jacobi family used for the Levenshtein
polynomial has ``(alpha, beta) = ((n - 1)/2, (n - 3)/2)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .exact import Poly, RationalInterval, Scalar, as_rational, as_scalar, solve_vandermonde


class QuadratureError(ValueError):
    pass


@lru_cache(maxsize=None)
def _jacobi_raw(k: int, alpha: Fraction, beta: Fraction) -> Poly:
    # classical normalization, P_k(1) = binom(k + alpha, k)
    if k == 0:
        return Poly([1])
    t = Poly.t()
    if k == 1:
        return (alpha + 1) + (alpha + beta + 2) * (t - 1) / 2
    ab = alpha + beta
    a = 2 * k * (k + ab) * (2 * k + ab - 2)
    b = (2 * k + ab - 1) * ((2 * k + ab) * (2 * k + ab - 2) * t + (alpha**2 - beta**2))
    c = 2 * (k + alpha - 1) * (k + beta - 1) * (2 * k + ab)
    return (b * _jacobi_raw(k - 1, alpha, beta) - c * _jacobi_raw(k - 2, alpha, beta)) / a


@lru_cache(maxsize=None)
def _jacobi_normalized(k: int, alpha: Fraction, beta: Fraction) -> Poly:
    p = _jacobi_raw(k, alpha, beta)
    return p / p(1)


def jacobi_polynomial(i: int, n: int) -> Poly:
    """``P_i^{((n-1)/2, (n-3)/2)}`` normalized so that ``P_i(1) = 1``."""
    if i < 0 or n < 2:
        raise ValueError("need i >= 0 and n >= 2")
    return _jacobi_normalized(i, Fraction(n - 1, 2), Fraction(n - 3, 2))


def gegenbauer_polynomial(k: int, n: int) -> Poly:
    """Gegenbauer polynomial ``P_k^{(n)}`` for the sphere in R^n, with ``P_k^{(n)}(1) = 1``."""
    if k < 0 or n < 2:
        raise ValueError("need k >= 0 and n >= 2")
    h = Fraction(n - 3, 2)
    return _jacobi_normalized(k, h, h)


@dataclass(frozen=True)
class GegenbauerCoefficients:
    n: int
    coefficients: tuple[Fraction, ...]

    @property
    def f0(self) -> Fraction:
        return self.coefficients[0] if self.coefficients else Fraction(0)

    def reconstruct(self) -> Poly:
        out = Poly()
        for k, c in enumerate(self.coefficients):
            out = out + c * gegenbauer_polynomial(k, self.n)
        return out


def gegenbauer_expand(f: Poly, n: int) -> GegenbauerCoefficients:
    """Coefficients ``f_k`` with ``f = sum_k f_k P_k^{(n)}``, peeled from the top degree down."""
    if n < 2:
        raise ValueError("need n >= 2")
    rest = f
    coeffs = [Fraction(0)] * (f.degree + 1)
    for k in range(f.degree, -1, -1):
        Pk = gegenbauer_polynomial(k, n)
        c = rest.coeffs[k] / Pk.lead if rest.degree >= k else Fraction(0)
        coeffs[k] = c
        rest = rest - c * Pk
    assert rest.is_zero()
    return GegenbauerCoefficients(n, tuple(coeffs))


def monomial_f0(i: int, n: int) -> Fraction:
    return gegenbauer_expand(Poly.t() ** i, n).f0


def levenshtein_polynomial(k: int, n: int, s) -> Poly:
    """``P_k(t) P_{k-1}(s) - P_k(s) P_{k-1}(t)``; ``s`` is always a root."""
    if k < 1 or n < 2:
        raise ValueError("need k >= 1 and n >= 2")
    s = as_rational(s)
    if not -1 < s < 1:
        raise ValueError("s must lie in (-1, 1)")
    Pk, Pk1 = jacobi_polynomial(k, n), jacobi_polynomial(k - 1, n)
    return Pk * Pk1(s) - Pk1 * Pk(s)


def levenshtein_bound_L5(n: int, s) -> Fraction:
    """Exact ``L_5(n, s)``, the cardinality of a 3-distance 5-design with largest inner product s."""
    s = as_rational(s)
    den = 2 * s * (3 - (n + 2) * s * s)
    if den == 0:
        raise ValueError(f"bound undefined at s = {s}")
    num = n * ((n + 2) * (n + 3) * s * s + 4 * (n + 2) * s - n + 1) * (1 - s)
    return num / den


@dataclass(frozen=True)
class QuadratureRule:
    """``f0 = f(1)/M + sum rho_i f(alpha_i)``, exact for degree <= 5."""

    n: int
    M: Fraction
    nodes: tuple
    weights: tuple

    def apply(self, f: Poly):
        acc = f(1) / self.M
        for a, w in zip(self.nodes, self.weights):
            acc = acc + w * f(a)
        return acc


def quadrature_weights(n: int, M, nodes: Sequence) -> QuadratureRule:
    """Weights at ``nodes`` from the moment equations of degree 0..2, checked on degrees 3..5.

    Nodes may be exact rationals or isolating intervals; with intervals the weights
    are certified enclosures and the checks are containment checks.
    """
    M = as_rational(M)
    xs = [as_scalar(a) for a in nodes]
    if len(xs) != 3:
        raise QuadratureError("need three nodes")
    rhs = [monomial_f0(i, n) - Fraction(1, 1) / M for i in range(6)]
    rho = solve_vandermonde(xs, rhs[:3])
    for i in range(3, 6):
        val = sum((w * x**i for w, x in zip(rho, xs)), Fraction(0))
        ok = rhs[i] in val if isinstance(val, RationalInterval) else val == rhs[i]
        if not ok:
            raise QuadratureError(f"nodes are not Levenshtein nodes for (n, M) = ({n}, {M})")
    for w in rho:
        if (w.lo if isinstance(w, RationalInterval) else w) <= 0:
            raise QuadratureError(f"nonpositive weight {w}")
    return QuadratureRule(n, M, tuple(xs), tuple(rho))
