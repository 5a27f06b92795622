"""Feasibility decisions for three-point diagonals.

Decides whether a diagonal sequence is realizable with spectrum {0, A, B}
under prescribed multiplicities, plus the any-multiplicity witness search,
the projection index check, generalized spectrum sets, and the computation
of the admissible inner-eigenvalue set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .extended import INF, is_inf
from .sequences import DiagonalSpec, PartitionSums, partition_sums


class _NegInfinity:
    __slots__ = ()

    def __repr__(self):
        return "NEG_INF"


class _NonInteger:
    __slots__ = ()

    def __repr__(self):
        return "NON_INTEGER"


NEG_INF = _NegInfinity()
NON_INTEGER = _NonInteger()


def _parse_mult(m):
    """A multiplicity: positive int or INF ('inf' accepted)."""
    if m is INF or m == "inf" or m == float("inf"):
        return INF
    m = int(m)
    return m


@dataclass(frozen=True)
class SpectrumTarget:
    A: Fraction
    B: Fraction
    m0: object
    mA: object
    mB: object

    def __post_init__(self):
        object.__setattr__(self, "A", Fraction(self.A))
        object.__setattr__(self, "B", Fraction(self.B))
        object.__setattr__(self, "m0", _parse_mult(self.m0))
        object.__setattr__(self, "mA", _parse_mult(self.mA))
        object.__setattr__(self, "mB", _parse_mult(self.mB))
        if not 0 < self.A < self.B:
            raise ValueError("need 0 < A < B")

    def reflected(self) -> "SpectrumTarget":
        return SpectrumTarget(self.B - self.A, self.B, self.mB, self.mA, self.m0)


@dataclass(frozen=True)
class Witness:
    case_label: str
    N: Optional[int] = None
    k: Optional[int] = None
    n: Optional[int] = None


@dataclass(frozen=True)
class Decision:
    feasible: bool
    witness: Optional[Witness] = None
    violation: Optional[tuple] = None  # (condition id, explanation)

    @staticmethod
    def ok(case_label, **kw) -> "Decision":
        return Decision(True, witness=Witness(case_label, **kw))

    @staticmethod
    def no(cond: str, why: str) -> "Decision":
        return Decision(False, violation=(cond, why))


def _check_mults(target: SpectrumTarget, subset_mode: bool):
    floor_val = 0 if subset_mode else 1
    for name, m in (("m0", target.m0), ("mA", target.mA), ("mB", target.mB)):
        if not is_inf(m) and m < floor_val:
            raise ValueError(f"{name} must be >= {floor_val} (got {m})")


def kadison_index(seq: DiagonalSpec, alpha):
    """Index a - b of a candidate projection diagonal (B normalized to 1).

    Returns an integer or +/- infinity when a projection with this diagonal
    exists, NON_INTEGER otherwise.  The two-sided infinite case uses the
    convention infinity - infinity = 0 (feasible).
    """
    alpha = Fraction(alpha)
    if seq.bound_B != 1:
        raise ValueError("kadison_index requires values in [0, 1]")
    if not 0 < alpha < 1:
        raise ValueError("alpha must be in (0, 1)")
    a = seq.linear_sum(1, 0, 0, alpha)
    b = seq.linear_sum(-1, 1, alpha, INF)
    if is_inf(a) and is_inf(b):
        return 0
    if is_inf(a):
        return INF
    if is_inf(b):
        return NEG_INF
    x = a - b
    return int(x) if x.denominator == 1 else NON_INTEGER


def kadison_feasible(result) -> bool:
    return isinstance(result, int) or result is INF or result is NEG_INF


def decide_case_a(seq: DiagonalSpec, target: SpectrumTarget,
                  subset_mode: bool = False) -> Decision:
    """All multiplicities finite: counting, trace and majorization conditions."""
    Z, N, K = target.m0, target.mA, target.mB
    A, B = target.A, target.B
    P = partition_sums(seq, A, B)
    total = P.card_I
    if is_inf(total) or total != Z + N + K:
        return Decision.no("cardinality", f"|I| = {total} differs from Z+N+K = {Z + N + K}")
    want = N * A + K * B
    if P.sum_d != want:
        return Decision.no("trace", f"sum d_i = {P.sum_d} differs from NA+KB = {want}")
    need = (N + K - P.card_I2) * A
    if P.C < need:
        return Decision.no("majorization", f"C = {P.C} < (N+K-|I2|)A = {need}")
    return Decision.ok("a")


def decide_case_b(seq: DiagonalSpec, target: SpectrumTarget,
                  subset_mode: bool = False) -> Decision:
    """m0 infinite, mA and mB finite."""
    N, K = target.mA, target.mB
    A, B = target.A, target.B
    P = partition_sums(seq, A, B)
    if not is_inf(P.card_I1):
        return Decision.no("cardinality", f"|I1| = {P.card_I1} must be infinite")
    want = N * A + K * B
    if is_inf(P.sum_d) or P.sum_d != want:
        return Decision.no("trace", f"sum d_i = {P.sum_d} differs from NA+KB = {want}")
    need = (N + K - P.card_I2) * A
    if P.C < need:
        return Decision.no("majorization", f"C = {P.C} < (N+K-|I2|)A = {need}")
    return Decision.ok("b")


def decide_case_c(seq: DiagonalSpec, target: SpectrumTarget,
                  subset_mode: bool = False) -> Decision:
    """m0 and mB infinite, mA = N finite."""
    N = target.mA
    A, B = target.A, target.B
    P = partition_sums(seq, A, B)
    if is_inf(P.C) or is_inf(P.D):
        return Decision.ok("c", N=N)
    if not (is_inf(P.card_I1) and is_inf(P.card_I2)):
        return Decision.no("summable", "need infinitely many terms on both sides of A")
    if not (is_inf(P.sum_d) and is_inf(P.sum_comp)):
        return Decision.no("summable", "sum d_i and sum (B - d_i) must both diverge")
    num = P.C - P.D - N * A
    k = num / B
    if k.denominator != 1:
        return Decision.no("trace", f"(C-D-NA)/B = {k} is not an integer")
    k = int(k)
    if P.C < (N + k) * A:
        return Decision.no("majorization", f"C = {P.C} < A(N+k) = {(N + k) * A}")
    return Decision.ok("c", N=N, k=k)


def decide_case_d(seq: DiagonalSpec, target: SpectrumTarget,
                  subset_mode: bool = False) -> Decision:
    """mA infinite, m0 = Z and mB = K finite."""
    Z, K = target.m0, target.mB
    A, B = target.A, target.B
    P = partition_sums(seq, A, B)
    if not is_inf(P.card_I):
        return Decision.no("cardinality", "|I| must be infinite")
    if P.C1 > A * Z:
        return Decision.no("kernel_mass", f"C1 = {P.C1} > AZ = {A * Z}")
    if is_inf(P.C1) or is_inf(P.C2) or is_inf(P.card_J3):
        return Decision.no("trace", "sum (d_i - A) does not converge")
    lhs = -P.C1 + P.C2 + P.card_J3 * (B - A) - P.C3
    want = K * (B - A) - Z * A
    if lhs != want:
        return Decision.no("trace", f"sum (d_i - A) = {lhs} differs from K(B-A)-ZA = {want}")
    return Decision.ok("d")


def decide_case_e(seq: DiagonalSpec, target: SpectrumTarget,
                  subset_mode: bool = False) -> Decision:
    """mA and mB infinite, m0 = Z finite."""
    Z = target.m0
    A, B = target.A, target.B
    P = partition_sums(seq, A, B)
    if P.C1 > A * Z:
        return Decision.no("kernel_mass", f"C1 = {P.C1} > AZ = {A * Z}")
    if is_inf(P.C2) or is_inf(P.C3):
        return Decision.ok("e")
    if not is_inf(P.card_I1 + P.card_J2):
        return Decision.no("cardinality", "|I1 u J2| must be infinite")
    if not is_inf(P.card_J3):
        return Decision.no("cardinality", "|J3| must be infinite for mB infinite")
    num = P.C1 - P.C2 + P.C3 - Z * A
    k = num / (B - A)
    if k.denominator != 1:
        return Decision.no("trace", f"(C1-C2+C3-ZA)/(B-A) = {k} is not an integer")
    k = int(k)
    return Decision.ok("e", k=k, n=Z - k)


def decide_case_f(seq: DiagonalSpec, target: SpectrumTarget,
                  subset_mode: bool = False) -> Decision:
    """All three multiplicities infinite."""
    P = partition_sums(seq, target.A, target.B)
    if is_inf(P.C) or is_inf(P.D):
        return Decision.ok("f")
    return Decision.no("summable", f"C + D = {P.C + P.D} is finite")


def decide(seq: DiagonalSpec, target: SpectrumTarget,
           subset_mode: bool = False) -> Decision:
    """Dispatch on the finiteness pattern of (m0, mA, mB)."""
    if seq.bound_B != target.B:
        raise ValueError("sequence bound and target B differ")
    _check_mults(target, subset_mode)
    i0, iA, iB = (is_inf(target.m0), is_inf(target.mA), is_inf(target.mB))
    if not i0 and not iA and not iB:
        return decide_case_a(seq, target, subset_mode)
    if i0 and not iA and not iB:
        return decide_case_b(seq, target, subset_mode)
    if i0 and not iA and iB:
        return decide_case_c(seq, target, subset_mode)
    if not i0 and iA and not iB:
        return decide_case_d(seq, target, subset_mode)
    if not i0 and iA and iB:
        return decide_case_e(seq, target, subset_mode)
    if i0 and iA and iB:
        return decide_case_f(seq, target, subset_mode)
    # remaining patterns reflect onto cases (b) and (e)
    dec = decide(seq.reflect(), target.reflected(), subset_mode)
    if not dec.feasible:
        return dec
    w = dec.witness
    return Decision.ok(w.case_label + "_sym", N=w.N, k=w.k, n=w.n)


def witness_bound(C, D, A, B) -> int:
    """Upper bound on N: from C >= (N+k)A and k(B-A) >= -D."""
    return math.floor(C / A + D / (B - A))


def search_witness(C, D, A, B):
    """Smallest N >= 1 with integer k solving C - D = NA + kB and C >= (N+k)A."""
    for N in range(1, witness_bound(C, D, A, B) + 1):
        k = (C - D - N * A) / B
        if k.denominator != 1:
            continue
        k = int(k)
        if C >= (N + k) * A:
            return N, k
    return None


def decide_any(seq: DiagonalSpec, A, B) -> Decision:
    """Arbitrary multiplicities: the C/D characterization with (N, k) witnesses."""
    A, B = Fraction(A), Fraction(B)
    P = partition_sums(seq, A, B)
    if not (is_inf(P.sum_d) and is_inf(P.sum_comp)):
        return Decision.no(
            "summable",
            "sum d_i or sum (B - d_i) converges; the witness conditions are "
            "insufficient here, use the fixed-multiplicity trace route instead")
    if is_inf(P.C) or is_inf(P.D):
        return Decision.ok("any")
    found = search_witness(P.C, P.D, A, B)
    if found is None:
        return Decision.no("no_witness", "no N >= 1, integer k satisfy the trace "
                                         "and majorization conditions")
    N, k = found
    return Decision.ok("any", N=N, k=k)


@dataclass(frozen=True)
class SpectrumSetTarget:
    """A finite spectrum set in [0, B] with per-point multiplicities."""

    points: tuple
    multiplicities: tuple

    def __post_init__(self):
        pts = tuple(Fraction(p) for p in self.points)
        ms = tuple(_parse_mult(m) for m in self.multiplicities)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "multiplicities", ms)
        if len(pts) != len(ms):
            raise ValueError("points and multiplicities differ in length")
        if sorted(set(pts)) != list(pts):
            raise ValueError("points must be sorted and distinct")


def decide_spectrum_set(seq: DiagonalSpec, target: SpectrumSetTarget) -> Decision:
    """Spectrum sets containing 0 and B with infinite end multiplicities."""
    B = seq.bound_B
    pts, ms = target.points, target.multiplicities
    if not pts or pts[0] != 0 or pts[-1] != B:
        raise ValueError("points must contain 0 and B")
    if not (is_inf(ms[0]) and is_inf(ms[-1])):
        raise ValueError("multiplicities at 0 and B must be infinite")
    alpha = B / 2
    C = seq.linear_sum(1, 0, 0, alpha)
    D = seq.linear_sum(-1, B, alpha, INF)
    if is_inf(C) or is_inf(D):
        return Decision.ok("set")
    return Decision.no("summable", f"C + D = {C + D} is finite at alpha = {alpha}")


@dataclass(frozen=True)
class AdmissibleEntry:
    A: Fraction
    N: int
    k: int
    interval: tuple  # (l, u], the breakpoint interval containing A


@dataclass(frozen=True)
class AdmissibleSet:
    full: bool
    entries: tuple = ()

    @staticmethod
    def full_interval() -> "AdmissibleSet":
        return AdmissibleSet(True)

    @staticmethod
    def finite(entries) -> "AdmissibleSet":
        return AdmissibleSet(False, tuple(entries))

    def values(self):
        return [e.A for e in self.entries]


_SCAN_LIMIT = 100000


def _upper_half_candidates(seq: DiagonalSpec):
    """Admissible values in [1/2, 1) found by the ascending interval scan."""
    half = Fraction(1, 2)
    one = Fraction(1)
    found = []

    def scan(lo, hi, lo_closed, probe):
        C = seq.linear_sum(1, 0, 0, probe)
        D = seq.linear_sum(-1, 1, probe, INF)
        if is_inf(C) or is_inf(D):
            raise ArithmeticError("interval scan reached an infinite sum")
        m = math.floor(C - D)
        eta = C - D - m
        eff_lo = max(lo, half)
        if eff_lo * (m + 1) > C:
            return True  # sound cutoff: no candidates here or in any later interval
        s = m + 1
        while s * eff_lo <= C:
            a_hi = min(hi, C / s) if s > 0 else hi
            if a_hi >= 1:
                raise ArithmeticError("unbounded candidate family in interval scan")
            gap = s - m - eta  # = s - (C - D) > 0
            n_max = math.floor(gap / (1 - a_hi))
            for N in range(1, n_max + 1):
                A = 1 - gap / N
                if A < eff_lo or (A == lo and not lo_closed):
                    continue
                if A > hi or not half <= A < one:
                    continue
                if s * A <= C:
                    found.append(A)
            s += 1
        return False

    prev = half
    prev_closed = True
    if seq.is_value(half):
        if scan(half, half, True, half):
            return found
        prev_closed = False
    steps = 0
    for v in seq.ascending_values(half, one):
        steps += 1
        if steps > _SCAN_LIMIT:
            raise RuntimeError("interval scan failed to terminate")
        if scan(prev, v, prev_closed, v):
            return found
        prev = v
        prev_closed = False
    # generator exhausted: one final interval (prev, 1) with no values inside
    scan(prev, Fraction(1), prev_closed, (prev + 1) / 2)
    return found


def admissible_set(seq: DiagonalSpec) -> AdmissibleSet:
    """All inner eigenvalues A for which the sequence is a {0, A, 1} diagonal."""
    if seq.bound_B != 1:
        raise ValueError("admissible_set requires B = 1")
    P = partition_sums(seq, Fraction(1, 2))
    if not (is_inf(P.sum_d) and is_inf(P.sum_comp)):
        raise ValueError("admissible_set requires both sum d_i and sum (1 - d_i) "
                         "to diverge")
    if is_inf(P.C) or is_inf(P.D):
        return AdmissibleSet.full_interval()
    values = set(_upper_half_candidates(seq))
    values.update(1 - a for a in _upper_half_candidates(seq.reflect()))
    entries = []
    for A in sorted(values):
        C = seq.linear_sum(1, 0, 0, A)
        D = seq.linear_sum(-1, 1, A, INF)
        w = search_witness(C, D, A, Fraction(1))
        if w is None:
            raise AssertionError(f"scan produced {A} but no witness exists")
        lo = seq.max_value_below(A)
        hi = seq.min_value_at_least(A)
        entries.append(AdmissibleEntry(
            A, w[0], w[1],
            (Fraction(0) if lo is None else lo, Fraction(1) if hi is None else hi)))
    return AdmissibleSet.finite(entries)
