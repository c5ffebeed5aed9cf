"""Vectorized, certified rejection screen for all cardinalities of one dimension.

For every candidate M the three roots of the inner-product cubic are located in
floating point, then *certified* with outward-rounded interval arithmetic: each
arithmetic result is widened by one ulp in each direction (``np.nextafter``),
which encloses the exact result under IEEE-754 round-to-nearest.  A candidate is
rejected only when an enclosure proves the rejection; anything not proven is
left UNDECIDED and goes through the exact pipeline.  NaN/inf never certify
anything because every certificate is a strict comparison.
"""

from __future__ import annotations

import numpy as np

from .feasibility import Status

UNDECIDED, ROOTS, SIGN, NONINT = 0, 1, 2, 3

SCREEN_STATUS = {
    ROOTS: Status.REJECTED_ROOT_STRUCTURE,
    SIGN: Status.REJECTED_SIGN_PATTERN,
    NONINT: Status.REJECTED_NON_INTEGER,
}

_EXACT_FLOAT = 2.0**53


def _dn(x):
    return np.nextafter(x, -np.inf)


def _up(x):
    return np.nextafter(x, np.inf)


def _add(x, y):
    return _dn(x[0] + y[0]), _up(x[1] + y[1])


def _sub(x, y):
    return _dn(x[0] - y[1]), _up(x[1] - y[0])


def _mul(x, y):
    p1, p2, p3, p4 = x[0] * y[0], x[0] * y[1], x[1] * y[0], x[1] * y[1]
    lo = np.minimum(np.minimum(p1, p2), np.minimum(p3, p4))
    hi = np.maximum(np.maximum(p1, p2), np.maximum(p3, p4))
    return _dn(lo), _up(hi)


def _div(x, y):
    # only meaningful where y excludes 0; elsewhere the result is NaN/inf or garbage
    # and is discarded by the callers' masks
    with np.errstate(divide="ignore", invalid="ignore"):
        r = (_dn(1.0 / y[1]), _up(1.0 / y[0]))
    bad = (y[0] <= 0) & (y[1] >= 0)
    r = (np.where(bad, np.nan, r[0]), np.where(bad, np.nan, r[1]))
    return _mul(x, r)


def _abs(x):
    lo, hi = x
    alo = np.where(lo >= 0, lo, np.where(hi <= 0, -hi, 0.0))
    ahi = np.where(lo >= 0, hi, np.where(hi <= 0, -lo, np.maximum(-lo, hi)))
    return alo, ahi


def _point(v):
    return v, v


def _horner_sign(coeffs, x):
    """Certified sign of the cubic at float points ``x``: +1, -1, or 0 if undecided."""
    A, B, C, D = coeffs
    acc = _point(A)
    X = _point(x)
    for c in (B, C, D):
        acc = _add(_mul(acc, X), _point(c))
    return np.where(acc[0] > 0, 1, np.where(acc[1] < 0, -1, 0))


def approximate_roots(A, B, C, D):
    """Float approximations of the three real roots, ascending (NaN when not real)."""
    with np.errstate(all="ignore"):
        b, c, d = B / A, C / A, D / A
        p = c - b * b / 3
        q = 2 * b**3 / 27 - b * c / 3 + d
        r = np.sqrt(-p / 3)
        arg = np.clip(3 * q / (2 * p * r), -1.0, 1.0)
        th = np.arccos(arg) / 3
        k = np.arange(3)[:, None]
        t = 2 * r * np.cos(th - 2 * np.pi * k / 3) - b / 3
        for _ in range(2):
            f = ((A * t + B) * t + C) * t + D
            fp = (3 * A * t + 2 * B) * t + C
            t = t - f / fp
    return np.sort(t, axis=0)


BLOCK = 32768


def screen(n: int, M, *, width_scale: float = 1.0) -> np.ndarray:
    """Status code per candidate: UNDECIDED, or a certified ROOTS/SIGN/NONINT rejection.

    ``width_scale`` scales the root-isolation radii (smaller is tighter).
    """
    M = np.asarray(M, dtype=np.int64)
    if M.size <= BLOCK:
        return _screen_block(n, M, width_scale)
    return np.concatenate([_screen_block(n, M[i:i + BLOCK], width_scale)
                           for i in range(0, M.size, BLOCK)])


def _screen_block(n: int, M: np.ndarray, width_scale: float) -> np.ndarray:
    codes = np.zeros(M.shape, dtype=np.int8)
    if M.size == 0:
        return codes
    Mi = M.astype(object) if n > 10**5 else M
    A = (n + 2) * (n * (n + 3) - 2 * Mi)
    C = 6 * Mi - 5 * n * n - 7 * n
    B = -n * (n + 2) * (n - 1)
    D = n * (n - 1)
    exact = (np.abs(A) < _EXACT_FLOAT) & (np.abs(C) < _EXACT_FLOAT) & (abs(B) < _EXACT_FLOAT)
    if not np.all(exact):
        return codes  # coefficients not representable; leave everything to the exact path
    A, C = A.astype(float), C.astype(float)
    B, D = float(B), float(D)
    coeffs = (A, B, C, D)

    r = approximate_roots(A, B, C, D)
    with np.errstate(all="ignore"):
        size = np.abs(A) * np.abs(r) ** 3 + abs(B) * r * r + np.abs(C) * np.abs(r) + abs(D)
        slope = np.abs((3 * A * r + 2 * B) * r + C)
        h = width_scale * np.maximum(64 * 2.0**-52 * size / slope, 8 * 2.0**-52 * np.abs(r))
    lo, hi = r - h, r + h

    s_lo = np.stack([_horner_sign(coeffs, lo[i]) for i in range(3)])
    s_hi = np.stack([_horner_sign(coeffs, hi[i]) for i in range(3)])
    isolated = np.all(s_lo * s_hi == -1, axis=0) & (hi[0] < lo[1]) & (hi[1] < lo[2])

    root_out = isolated & ((hi[0] < -1) | (lo[2] > 1))
    codes[root_out] = ROOTS
    ok = isolated & (lo[0] >= -1) & (hi[2] <= 1)

    a, b, c = (lo[0], hi[0]), (lo[1], hi[1]), (lo[2], hi[2])
    abs_a, abs_b, abs_c = _abs(a), _abs(b), _abs(c)
    sign_false = (abs_a[1] < abs_c[0]) | (abs_c[1] < abs_b[0])
    sign_true = (abs_a[0] > abs_c[1]) & (abs_c[0] > abs_b[1]) & ((b[0] > 0) | (b[1] < 0))
    codes[ok & sign_false] = SIGN
    go = ok & sign_true

    Mf = M.astype(float)
    m0 = _point(Mf - 1.0)  # exact: M < 2**53
    m1 = _point(np.full(M.shape, -1.0))
    q = _div(_point(Mf), _point(np.full(M.shape, float(n))))
    m2 = _sub(q, _point(np.ones(M.shape)))
    nonint = np.zeros(M.shape, dtype=bool)
    for u, v, w in ((a, b, c), (b, c, a), (c, a, b)):
        num = _add(_sub(m2, _mul(_add(v, w), m1)), _mul(_mul(v, w), m0))
        den = _mul(_sub(u, v), _sub(u, w))
        val = _div(num, den)
        with np.errstate(invalid="ignore"):
            nonint |= (val[1] < 0) | (np.ceil(val[0]) > val[1])
    codes[go & nonint] = NONINT
    return codes
