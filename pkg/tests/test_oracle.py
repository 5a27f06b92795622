import random
from fractions import Fraction as F

import numpy as np

from threepoint import search_witness
from threepoint.oracle import (brute_force_witness, decide_case_a_approx,
                               eig_multiset, sample_diagonal)


def test_sample_diagonal_trace_and_range():
    spectrum = [1.0, 0.5, 0.5, 0.0, 0.0]
    d = sample_diagonal(spectrum, seed=1)
    assert abs(d.sum() - sum(spectrum)) < 1e-9
    assert d.min() > -1e-12 and d.max() < 1 + 1e-12


def test_sample_diagonal_deterministic():
    a = sample_diagonal([1.0, 0.0], seed=5)
    b = sample_diagonal([1.0, 0.0], seed=5)
    assert np.array_equal(a, b)


def test_eig_multiset_diagonal_matrix():
    M = np.diag([3.0, 1.0, 2.0])
    assert np.allclose(eig_multiset(M), [1.0, 2.0, 3.0])


def test_eig_multiset_rotation_invariant():
    rng = np.random.default_rng(9)
    for _ in range(10):
        n = int(rng.integers(2, 8))
        Q, _ = np.linalg.qr(rng.standard_normal((n, n)))
        lam = np.sort(rng.uniform(-1, 1, n))
        M = Q @ np.diag(lam) @ Q.T
        assert np.max(np.abs(eig_multiset(M) - lam)) < 1e-8


def test_brute_force_agrees_with_search():
    rng = random.Random(17)
    for _ in range(200):
        A = F(rng.randint(1, 19), 20)
        B = F(1)
        D = F(rng.randint(0, 60), 7)
        C = D + rng.randint(1, 4) * A + rng.randint(-4, 4)
        if C <= 0:
            continue
        assert search_witness(C, D, A, B) == brute_force_witness(
            C, D, A, B, N_max=200, k_max=500)


def test_decide_case_a_approx_matches_exact_family():
    # (1/2,1/2,1/2) with spectrum {0,1/2,1} multiplicities (1,1,1)
    assert decide_case_a_approx([0.5, 0.5, 0.5], 0.5, 1.0, 1, 1, 1)
    assert not decide_case_a_approx([0.5, 0.5, 0.25], 0.5, 1.0, 1, 1, 1)
    assert not decide_case_a_approx([0.5, 0.5], 0.5, 1.0, 1, 1, 1)


def test_brute_force_known_instances():
    # C = D = 2/3, A = 1/2: minimal witness (2, -1)
    assert brute_force_witness(F(2, 3), F(2, 3), F(1, 2), F(1)) == (2, -1)
    # C = 0, D = 1/2: (1, -1) satisfies both mass constraints with equality
    assert brute_force_witness(F(0), F(1, 2), F(1, 2), F(1)) == (1, -1)
    # C = D = 0, A = 1/3: every candidate (3m, -m) fails C >= (N+k)A
    assert brute_force_witness(F(0), F(0), F(1, 3), F(1)) is None
