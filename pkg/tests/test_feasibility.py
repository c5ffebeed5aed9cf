import random
from fractions import Fraction

import pytest
import sympy

from tridesign.exact import isolate_real_roots
from tridesign.feasibility import (
    ClosedFormInvalid,
    DegenerateCubic,
    KnownFamily,
    MomentMismatch,
    Status,
    candidate_cardinalities,
    cardinality_bounds,
    classify,
    closed_form_distribution,
    cubic_coefficients,
    distance_distribution,
    divisibility_filter,
    inner_product_cubic,
    quadratic_for_ab,
    r1_form,
    r2_form,
    recognize_known_family,
    scan_dimension,
    sign_pattern_holds,
    InnerProductTriple,
    vieta_symmetrics,
    xyz_product,
)

F = Fraction
SURVIVORS = {
    341: (638352, (F(-1, 7), F(-1, 35), F(1, 14))),
    638: (2236509, (F(-1, 8), F(-1, 40), F(1, 20))),
    727: (3344200, (F(-1, 9), F(-1, 45), F(1, 21))),
}


def sympy_cubic_roots(n, M):
    t = sympy.Symbol("t")
    A, B, C, D = cubic_coefficients(n, M)
    return sorted(sympy.roots(sympy.Poly(A * t**3 + B * t**2 + C * t + D, t)).keys(), key=float)


def test_bounds():
    assert cardinality_bounds(3) == (12, 16)
    assert cardinality_bounds(7) == (56, 112)
    assert cardinality_bounds(2) == (6, 7)


def test_divisibility():
    assert divisibility_filter(341, 638352) == 3744
    assert divisibility_filter(7, 56) == 16
    assert divisibility_filter(5, 33) is None


@pytest.mark.parametrize("n", sorted(SURVIVORS))
def test_survivor_cubic_roots_against_sympy(n):
    M, roots = SURVIVORS[n]
    ref = sympy_cubic_roots(n, M)
    assert [F(int(r.p), int(r.q)) for r in ref] == list(roots)
    assert [iv.lo for iv in isolate_real_roots(inner_product_cubic(n, M), (-1, 1))] == list(roots)


def test_tight_cubic():
    from tridesign.exact import Poly
    p = inner_product_cubic(7, 56)
    assert p == -42 * Poly([1, 1]) * Poly([-1, 0, 9])
    assert [iv.lo for iv in isolate_real_roots(p, (-1, 1))] == [-1, F(-1, 3), F(1, 3)]


def test_degenerate_cubic():
    # 2M = n(n+3)
    with pytest.raises(DegenerateCubic):
        inner_product_cubic(4, 14)


def test_quadratic_for_ab():
    from tridesign.exact import rational_roots
    assert rational_roots(quadratic_for_ab(341, F(1, 14))) == [F(-1, 7), F(-1, 35)]
    assert rational_roots(quadratic_for_ab(22, F(1, 4))) == [F(-1, 2), F(-1, 8)]


def test_vieta():
    e1, e2, e3 = vieta_symmetrics(341, 638352)
    a, b, c = SURVIVORS[341][1]
    assert (e1, e2, e3) == (a + b + c, a * b + b * c + c * a, a * b * c) == (e1, e2, F(1, 3430))
    assert e3 == F(341 * 340, 343 * (2 * 638352 - 341 * 344))
    assert vieta_symmetrics(7, 56)[2] == F(1, 9)


@pytest.mark.parametrize("n, M, expected", [
    (341, 638352, (23205, 406250, 208896)),
    (638, 2236509, (40508, 1396500, 799500)),
    (7, 56, (1, 27, 27)),
    (22, 891, (42, 512, 336)),
])
def test_distance_distribution(n, M, expected):
    roots = [iv.lo for iv in isolate_real_roots(inner_product_cubic(n, M), (-1, 1))]
    dist = distance_distribution(n, M, roots)
    assert tuple(dist) == expected
    assert sum(dist) == M - 1


def test_distribution_detects_wrong_roots():
    with pytest.raises(MomentMismatch):
        distance_distribution(22, 891, [F(-1, 2), F(-1, 8), F(1, 5)])


def test_closed_form_agrees_with_moment_solve():
    for n, (M, roots) in SURVIVORS.items():
        assert tuple(closed_form_distribution(*roots)) == tuple(distance_distribution(n, M, roots))
    assert closed_form_distribution(F(-1, 2), F(-1, 8), F(1, 4)).X == 42
    with pytest.raises(ValueError, match="degenerate"):
        closed_form_distribution(-1, F(-1, 3), F(1, 3))


def test_pairwise_sum_identity():
    # (1-a^2)(1-b^2)(1-c^2) / ((a+b)(b+c)(c+a)) = M(n-1)/(n(n+2))
    cases = [(n, M, r) for n, (M, r) in SURVIVORS.items()]
    for m in range(3, 8):
        n = 3 * m * m - 5
        cases.append((n, m**4 * n // 2, (F(-1, m - 1), F(-1, m * m - 1), F(1, m + 1))))
    for n, M, (a, b, c) in cases:
        lhs = (1 - a * a) * (1 - b * b) * (1 - c * c) / ((a + b) * (b + c) * (c + a))
        assert lhs == F(M * (n - 1), n * (n + 2))


@pytest.mark.parametrize("m", range(3, 11))
def test_xyz_product_matches_componentwise(m):
    n = 3 * m * m - 5
    M = m**4 * n // 2
    X, Y, Z = m * (m * m - 2) * (m - 1) ** 3 // 4, (m * m - 1) ** 3, m * (m * m - 2) * (m + 1) ** 3 // 4
    assert xyz_product(n, M) == X * Y * Z


def test_xyz_product_survivors_and_degenerate():
    for n, (M, roots) in SURVIVORS.items():
        assert xyz_product(n, M) == distance_distribution(n, M, roots).product()
    with pytest.raises(ClosedFormInvalid):
        xyz_product(7, 56)


def test_r2_is_r1_in_terms_of_t():
    rng = random.Random(5)
    for _ in range(50):
        n = rng.randint(3, 500)
        T = rng.randint(1, 10**6)
        assert r1_form(n, F(n * T, 2)) == n**4 * r2_form(n, T)


def test_r1_is_discriminant_scaled():
    t = sympy.Symbol("t")
    n, M = sympy.symbols("n M")
    A, B, C, D = cubic_coefficients(n, M)
    disc = sympy.discriminant(A * t**3 + B * t**2 + C * t + D, t)  # A^4 * prod (ri - rj)^2
    ratio = sympy.simplify(disc * (n + 2) ** 3 * (2 * M - n * (n + 3)) ** 4 / A**4)
    assert sympy.expand(ratio - r1_form(n, M)) == 0


def test_known_families():
    assert recognize_known_family(7, 56) == [KnownFamily("Tight5", 3), KnownFamily("Case3", 2)]
    assert recognize_known_family(22, 891) == [KnownFamily("Case3", 3)]
    assert recognize_known_family(23, 552) == [KnownFamily("Tight5", 5)]
    assert recognize_known_family(3, 12) == [KnownFamily("Tight5")]
    assert recognize_known_family(341, 638352) == []
    # n = m^2 - 2 with m even is not a tight family
    assert recognize_known_family(14, 210) == []


def test_sign_pattern():
    assert sign_pattern_holds(InnerProductTriple(F(-1, 7), F(-1, 35), F(1, 14)))
    assert not sign_pattern_holds(InnerProductTriple(F(-1, 7), F(-1, 35), F(1, 5)))
    assert not sign_pattern_holds(InnerProductTriple(-1, F(-1, 3), F(1, 3)))  # |b| = |c|


@pytest.mark.parametrize("n, M, status", [
    (341, 638352, Status.REFUTED_BY_DERIVED),
    (638, 2236509, Status.REFUTED_BY_DERIVED),
    (727, 3344200, Status.REFUTED_BY_DERIVED),
    (22, 891, Status.KNOWN_FAMILY),
    (7, 56, Status.KNOWN_FAMILY),
    (5, 33, Status.REJECTED_DIVISIBILITY),
    (5, 300, Status.OUT_OF_RANGE),
    (10, 115, Status.REJECTED_NON_INTEGER),
])
def test_classify(n, M, status):
    rep = classify(n, M)
    assert rep.status is status
    if status is Status.REFUTED_BY_DERIVED:
        assert any(d.is_contradiction for d in rep.derived)


def test_classify_irrational_tight_is_unresolved():
    # tight bound in a dimension without a known tight design; inner products are irrational
    # (inner products -1, +-1/sqrt(6)); the certified counts still enclose integers
    rep = classify(4, 20)
    assert rep.status is Status.UNRESOLVED
    assert not rep.inner_products.is_exact
    assert [1, 9, 9] == [v if isinstance(v, Fraction) else next(iter(v.integers())) for v in rep.distribution]
    assert all(d.verdict.value == "Skipped" for d in rep.derived)


def test_candidate_cardinalities():
    assert list(candidate_cardinalities(3)) == [15]
    assert list(candidate_cardinalities(3, divisibility=False)) == [13, 14, 15, 16]


def test_scan_dimension_reports_known_records():
    res = scan_dimension(22)
    assert [r.key for r in res.records] == [(22, 891)]
    assert res.examined == len(candidate_cardinalities(22))
    assert sum(res.counts.values()) == res.examined


def _r1_as_printed(n, M):
    return (1728 * M**4 - 5184 * M**3 * n**2 - 8640 * M**3 * n + 360 * M**2 * n**5 + 5544 * M**2 * n**4
            + 18936 * M**2 * n**3 + 16632 * M**2 * n**2 - 528 * M * n**7 - 3424 * M * n**6 - 13056 * M * n**5
            - 23712 * M * n**4 - 14576 * M * n**3 + 4 * n**10 + 178 * n**9 + 1086 * n**8 + 3428 * n**7
            + 7856 * n**6 + 10218 * n**5 + 4878 * n**4)


def _r2_as_printed(n, T):
    return (108 * T**4 - 648 * T**3 * n**2 - 1080 * T**3 * n + 90 * T**2 * n**5 + 1386 * T**2 * n**4
            + 4734 * T**2 * n**3 + 4158 * T**2 * n**2 - 264 * T * n**7 - 1712 * T * n**6 - 6528 * T * n**5
            - 11856 * T * n**4 - 7288 * T * n**3
            + 2 * (n + 1) * (n + 3) * (2 * n**4 + 81 * n**3 + 213 * n**2 + 619 * n + 813))


@pytest.mark.parametrize("n, M", [(22, 891), (341, 638352), (43, 5504)])
def test_transcribed_r_forms_do_not_reproduce_product(n, M):
    """The widely quoted integer forms fail the componentwise oracle; the corrected ones pass."""
    roots = [iv.lo for iv in isolate_real_roots(inner_product_cubic(n, M), (-1, 1))]
    prod = distance_distribution(n, M, roots).product()
    T = 2 * M // n
    printed1 = F(M**2 * (n - 1) * (n + 2) ** 2 * (2 * M - n * (n + 3)) ** 5, n**3 * _r1_as_printed(n, M))
    printed2 = F(T**2 * (n - 1) * (n + 2) ** 2 * (T - n - 3) ** 5, 4 * _r2_as_printed(n, T))
    assert printed1 != prod and printed2 != prod
    assert xyz_product(n, M) == prod
