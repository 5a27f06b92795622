"""Acceptance suite: one test per criterion, one pass/fail line each."""

import random
import time
from fractions import Fraction as F

import numpy as np

from threepoint import (INF, ConstantTail, DiagonalSpec, GeometricLower,
                        GeometricUpper, SpectrumTarget, admissible_set,
                        construct_hermitian, decide, kadison_feasible,
                        kadison_index, move_mass, search_witness)
from threepoint.oracle import (brute_force_witness, decide_case_a_approx,
                               eig_multiset, sample_diagonal)


def _report(num, ok, desc):
    print(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'} - {desc}")
    assert ok, f"criterion {num} failed: {desc}"


def _beta_family(beta):
    return DiagonalSpec(F(1), (), (GeometricLower(F(1), beta),
                                   GeometricUpper(F(1), F(1), beta)))


def _doubling_family():
    return DiagonalSpec(F(1), (), (GeometricLower(F(1), F(1, 2)),
                                   GeometricUpper(F(1), F(1, 2), F(1, 2))))


def test_criterion_01_beta_family_regimes():
    expected = {
        F(9, 20): [F(1, 3), F(1, 2), F(2, 3)],
        F(2, 5): [F(1, 2)],
        F(1, 4): [],
    }
    ok = True
    for beta, want in expected.items():
        t0 = time.perf_counter()
        got = admissible_set(_beta_family(beta)).values()
        ok = ok and got == want and (time.perf_counter() - t0) < 1.0
    _report(1, ok, "beta-family admissible sets for beta = 9/20, 2/5, 1/4")


def test_criterion_02_threshold_bracketing():
    below = admissible_set(_beta_family(F(13, 30))).values()
    above = admissible_set(_beta_family(F(11, 25))).values()
    ok = below == [F(1, 2)] and above == [F(1, 3), F(1, 2), F(2, 3)]
    _report(2, ok, "threshold bracketing at beta = 13/30 vs 11/25")


def test_criterion_03_doubling_family():
    want = sorted({F(1, 2 * n) for n in range(1, 9)}
                  | {F(2 * n - 1, 2 * n) for n in range(1, 9)})
    t0 = time.perf_counter()
    got = admissible_set(_doubling_family()).values()
    ok = got == want and (time.perf_counter() - t0) < 2.0
    _report(3, ok, "doubling-family admissible set (pinned 15-rational reference)")


def test_criterion_04_summable_trace_guard():
    seq = DiagonalSpec(F(1), (F(1, 2),), (ConstantTail(F(0)),))
    mults = (1, 2, INF)
    ok = True
    for m0 in mults:
        for mA in mults:
            for mB in mults:
                t = SpectrumTarget(F(1, 2), F(1), m0, mA, mB)
                if decide(seq, t).feasible:
                    ok = False
    _report(4, ok, "{A, 0, 0, ...} infeasible for every target with mB >= 1")


def test_criterion_05_oracle_sampling_consistency():
    rng = random.Random(2024)
    fails = 0
    trials = 0
    while trials < 200:
        n = rng.randint(3, 10)
        K = rng.randint(1, n - 1)
        N = rng.randint(1, n - K)
        Z = n - K - N
        A = rng.randint(1, 7) / 8.0
        d = sample_diagonal([1.0] * K + [A] * N + [0.0] * Z,
                            seed=rng.randrange(2**32))
        trials += 1
        if not decide_case_a_approx(d, A, 1.0, Z, N, K):
            fails += 1
    _report(5, fails == 0, f"200 sampled diagonals all decided feasible "
                           f"({fails} failures)")


def _pinch(rng, diag):
    diag = list(diag)
    for _ in range(rng.randint(1, 3 * len(diag))):
        i, j = rng.randrange(len(diag)), rng.randrange(len(diag))
        if i == j:
            continue
        t = F(rng.randint(0, 8), 16)
        di, dj = diag[i], diag[j]
        diag[i] = di - t * (di - dj)
        diag[j] = dj + t * (di - dj)
    return diag


def test_criterion_06_construction_roundtrip():
    rng = random.Random(77)
    bad = 0
    for _ in range(100):
        n = rng.randint(2, 12)
        K = rng.randint(1, n)
        N = rng.randint(0, n - K)
        Z = n - K - N
        A = F(rng.randint(1, 7), 8)
        eigs = [F(1)] * K + [A] * N + [F(0)] * Z
        diag = _pinch(rng, eigs)
        M = construct_hermitian(eigs, diag)
        derr = max(abs(M[i, i] - float(x)) for i, x in enumerate(diag))
        eerr = float(np.max(np.abs(
            eig_multiset(M) - np.sort(np.array([float(x) for x in eigs])))))
        if derr > 1e-12 or eerr > 1e-8:
            bad += 1
    _report(6, bad == 0, f"100 constructed matrices within tolerance "
                         f"({bad} failures)")


def test_criterion_07_enumeration_bound_certified():
    rng = random.Random(123)
    bad = 0
    for _ in range(100):
        A = F(rng.randint(1, 23), 24)
        B = F(1)
        D = F(rng.randint(0, 96), 12)
        C = F(rng.randint(1, 96), 12)
        mine = search_witness(C, D, A, B)
        ref = brute_force_witness(C, D, A, B, N_max=10**4, k_max=10**4)
        if mine != ref:
            bad += 1
    _report(7, bad == 0, f"bounded search agrees with brute force on 100 "
                         f"instances ({bad} disagreements)")


def _random_spec(rng):
    finite = tuple(F(rng.randint(0, 16), 16) for _ in range(rng.randint(0, 3)))
    tails = []
    for _ in range(rng.randint(1, 3)):
        kind = rng.choice(("const", "lower", "upper"))
        r = F(1, rng.randint(2, 4))
        if kind == "const":
            tails.append(ConstantTail(F(rng.randint(0, 16), 16)))
        elif kind == "lower":
            tails.append(GeometricLower(F(rng.randint(1, 16), 16), r))
        else:
            tails.append(GeometricUpper(F(1), F(rng.randint(1, 16), 16), r))
    return DiagonalSpec(F(1), finite, tuple(tails))


def test_criterion_08_symmetry_suite():
    rng = random.Random(8)
    mults = (1, 2, INF)
    bad = 0
    for _ in range(100):
        seq = _random_spec(rng)
        A = F(rng.randint(1, 7), 8)
        for m0 in mults:
            for mA in mults:
                for mB in mults:
                    t = SpectrumTarget(A, F(1), m0, mA, mB)
                    tr = SpectrumTarget(1 - A, F(1), mB, mA, m0)
                    if (decide(seq, t).feasible
                            != decide(seq.reflect(), tr).feasible):
                        bad += 1
    _report(8, bad == 0, f"100 specs x 27 patterns reflection-symmetric "
                         f"({bad} mismatches)")


def test_criterion_09_kadison_finite_law():
    rng = random.Random(9)
    bad = 0
    for _ in range(500):
        seq = DiagonalSpec(F(1), tuple(F(rng.randint(0, 20), 20)
                                       for _ in range(rng.randint(1, 8))))
        total_integral = sum(seq.finite_terms).denominator == 1
        for a in (F(1, 5), F(1, 2), F(4, 5)):
            if kadison_feasible(kadison_index(seq, a)) != total_integral:
                bad += 1
    _report(9, bad == 0, f"kadison verdict == integrality of the sum, "
                         f"alpha-independent ({bad} mismatches)")


def test_criterion_10_move_mass_invariants():
    rng = random.Random(10)
    bad = 0
    for trial in range(1000):
        cut = rng.randint(1, 15)
        low = sorted(F(rng.randint(0, cut), 16)
                     for _ in range(rng.randint(1, 5)))
        high = sorted(F(rng.randint(cut, 16), 16)
                      for _ in range(rng.randint(1, 5)))
        room = min(sum(low), sum(F(1) - h for h in high))
        if trial % 3 == 0:
            eta = F(0)
        elif trial % 3 == 1:
            eta = room
        else:
            eta = min(room, room * F(rng.randint(0, 16), 16))
        l2, h2 = move_mass(low, high, eta, F(1))
        if sum(low) - sum(l2) != eta or sum(h2) - sum(high) != eta:
            bad += 1
        if not all(0 <= y <= x for x, y in zip(low, l2)):
            bad += 1
        if not all(x <= y <= 1 for x, y in zip(high, h2)):
            bad += 1
    _report(10, bad == 0, f"move_mass conservation and monotonicity on 1000 "
                          f"inputs ({bad} violations)")
