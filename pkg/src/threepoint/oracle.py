"""Independent cross-checks for the exact decision procedures.

Everything here is deliberately naive: floating point, brute-force search,
and a self-contained Jacobi eigensolver, so that agreement with the exact
modules is meaningful evidence rather than a tautology.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

TOL = 1e-9


def sample_diagonal(spectrum, n=None, seed=0):
    """Diagonal of Q diag(spectrum) Q^T for a Haar-random orthogonal Q."""
    spectrum = np.asarray(spectrum, dtype=float)
    if n is None:
        n = len(spectrum)
    rng = np.random.default_rng(seed)
    Z = rng.standard_normal((n, n))
    Q, R = np.linalg.qr(Z)
    Q = Q * np.sign(np.diag(R))
    M = Q @ np.diag(spectrum) @ Q.T
    return np.diag(M).copy()


def eig_multiset(M, sweeps=30, tol=1e-12):
    """Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations."""
    A = np.array(M, dtype=float, copy=True)
    n = A.shape[0]
    scale = max(1.0, np.abs(A).max())
    for _ in range(sweeps):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off = max(off, abs(A[p, q]))
                if abs(A[p, q]) <= tol * scale:
                    continue
                theta = 0.5 * np.arctan2(2.0 * A[p, q], A[q, q] - A[p, p])
                c, s = np.cos(theta), np.sin(theta)
                J = np.eye(n)
                J[p, p] = c
                J[q, q] = c
                J[p, q] = s
                J[q, p] = -s
                A = J.T @ A @ J
        if off <= tol * scale:
            break
    return np.sort(np.diag(A))


def brute_force_witness(C, D, A, B, N_max=20, k_max=40):
    """Smallest N with integer k solving C - D = N*A + k*B, subject to the
    mass constraints C >= (N + k) A and D >= -k (B - A)."""
    C, D, A, B = Fraction(C), Fraction(D), Fraction(A), Fraction(B)
    for N in range(1, N_max + 1):
        k = (C - D - N * A) / B
        if k.denominator != 1 or abs(k) > k_max:
            continue
        k = int(k)
        if C >= (N + k) * A and D >= -k * (B - A):
            return (N, k)
    return None


def decide_case_a_approx(diag, A, B, Z, N, K, tol=TOL):
    """Float version of the all-finite decision: counts, trace, and the
    below-A mass bound."""
    diag = [float(x) for x in diag]
    A, B = float(A), float(B)
    if len(diag) != Z + N + K:
        return False
    if abs(sum(diag) - (N * A + K * B)) > tol:
        return False
    below = [d for d in diag if d < A - tol]
    n_I2 = len(diag) - len(below)
    return sum(below) >= (N + K - n_I2) * A - tol
