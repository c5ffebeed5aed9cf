"""The float screen may only reject what the exact pipeline also rejects."""

import random

import numpy as np
import pytest

from tridesign.feasibility import candidate_cardinalities, classify
from tridesign.screen import SCREEN_STATUS, UNDECIDED, approximate_roots, screen


@pytest.mark.parametrize("n", [3, 7, 10, 22, 23, 41, 97])
def test_screen_agrees_with_exact_pipeline(n):
    M = candidate_cardinalities(n, divisibility=False)
    if M.size > 200:
        M = np.sort(np.random.default_rng(n).choice(M, 200, replace=False))
    codes = screen(n, M)
    for m, code in zip(M, codes):
        if code != UNDECIDED:
            assert classify(n, int(m), divisibility=False).status is SCREEN_STATUS[int(code)], (n, m)


def test_screen_random_candidates_sound():
    rng = random.Random(99)
    for _ in range(100):
        n = rng.randint(3, 1000)
        M = np.array([rng.randint(n * (n + 1) + 1, n * (n + 1) * (n + 5) // 6) for _ in range(3)])
        for m, code in zip(M, screen(n, M)):
            if code != UNDECIDED:
                assert classify(n, int(m), divisibility=False).status is SCREEN_STATUS[int(code)]


def test_screen_never_rejects_survivors():
    for n, M in [(341, 638352), (638, 2236509), (727, 3344200), (22, 891), (43, 5504)]:
        assert screen(n, np.array([M]))[0] == UNDECIDED


def test_tighter_radius_never_accepts_rejected():
    for n in (50, 200, 600):
        M = candidate_cardinalities(n)
        wide, tight = screen(n, M), screen(n, M, width_scale=0.1)
        rejected = wide != UNDECIDED
        assert np.all(tight[rejected] == wide[rejected])


def test_approximate_roots():
    r = approximate_roots(np.array([-397674200.0]), -39767420.0, np.array([3246320.0]), 115940.0)
    assert np.allclose(r[:, 0], [-1 / 7, -1 / 35, 1 / 14], rtol=0, atol=1e-15)


def test_screen_large_input_chunks():
    n = 300
    M = candidate_cardinalities(n, divisibility=False)
    assert M.size > 32768
    codes = screen(n, M)
    assert codes.shape == M.shape
    assert np.count_nonzero(codes == UNDECIDED) < 10
