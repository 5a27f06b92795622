"""Finite realizations and block certificates.

Finite feasible instances are realized as explicit real symmetric matrices
by a chain of plane rotations.  Infinite feasible instances get a
ConstructionPlan: a list of exact mass transfers followed by blocks that
are each either a finite three-point instance or a scaled projection, with
every block condition re-checkable in exact arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .extended import INF, is_inf
from .feasibility import (SpectrumTarget, decide, decide_case_a,
                          kadison_feasible, kadison_index)
from .sequences import DiagonalSpec, TailAtom, move_mass, partition_sums


class PlanSynthesisError(Exception):
    """A feasible instance for which no finite certificate could be assembled."""


class PlanVerificationError(Exception):
    pass


def majorization_check(eigs, diag) -> bool:
    """Prefix-sum dominance with equal totals, in exact arithmetic.

    Accepts eigs shorter than diag (padded with zeros, the finite-rank form)
    or longer when the surplus eigenvalues are all zero.
    """
    lam = sorted((Fraction(x) for x in eigs), reverse=True)
    d = sorted((Fraction(x) for x in diag), reverse=True)
    n = len(d)
    if len(lam) < n:
        lam += [Fraction(0)] * (n - len(lam))
    elif len(lam) > n:
        if any(x != 0 for x in lam[n:]):
            return False
        lam = lam[:n]
    acc_l = acc_d = Fraction(0)
    for i in range(n):
        acc_l += lam[i]
        acc_d += d[i]
        if acc_d > acc_l:
            return False
    return acc_d == acc_l


def construct_hermitian(eigs, diag) -> np.ndarray:
    """Real symmetric matrix with the given spectrum and diagonal.

    Chained 2x2 plane rotations: each step pins one diagonal entry to its
    target exactly (tracked in rational arithmetic), using at most n - 1
    rotations.  Requires majorization.
    """
    diag = [Fraction(x) for x in diag]
    n = len(diag)
    if not majorization_check(eigs, diag):
        raise ValueError("eigenvalues do not majorize the requested diagonal")
    lam = sorted((Fraction(x) for x in eigs), reverse=True)
    if len(lam) < n:
        lam += [Fraction(0)] * (n - len(lam))
    else:
        lam = sorted(lam, reverse=True)[:n]

    order = sorted(range(n), key=lambda i: diag[i])  # targets smallest-first
    M = np.zeros((n, n))
    # reservoir: (value, position) pairs kept sorted by value descending
    pool = sorted(((lam[j], j) for j in range(n)), key=lambda p: p[0], reverse=True)
    for val, pos in pool:
        M[pos, pos] = float(val)

    for step, idx in enumerate(order):
        t = diag[idx]
        if len(pool) == 1:
            a, pa = pool[0]
            assert a == t, "trace bookkeeping failed"
            M[pa, pa] = float(t)
            pool = []
            break
        # bracket: smallest j with pool[j] <= t, clamped to pair (j-1, j)
        j = next((i for i, (v, _) in enumerate(pool) if v <= t), len(pool) - 1)
        if j == 0:
            j = 1
        a, pa = pool[j - 1]
        b, pb = pool[j]
        if a == b:
            # degenerate bracket: t == a == b, no rotation needed
            assert t == a
            leftover = a
        else:
            c2 = (t - b) / (a - b)
            s2 = (a - t) / (a - b)
            c, s = math.sqrt(c2), math.sqrt(s2)
            G = np.eye(n)
            G[pa, pa] = c
            G[pb, pb] = c
            G[pa, pb] = -s
            G[pb, pa] = s
            M = G.T @ M @ G
            leftover = a + b - t
        M[pa, pa] = float(t)
        M[pb, pb] = float(leftover)
        pool = [p for i, p in enumerate(pool) if i not in (j - 1, j)]
        pool.append((leftover, pb))
        pool.sort(key=lambda p: p[0], reverse=True)
        # position pa now permanently holds target idx
        if pa != idx:
            perm = list(range(n))
            perm[pa], perm[idx] = perm[idx], perm[pa]
            # defer permutation: record instead
        # we fix targets at arbitrary positions and permute at the end
        order[step] = (idx, pa)

    # map fixed positions back to the requested order
    assign = {}
    for entry in order:
        if isinstance(entry, tuple):
            idx, pos = entry
            assign[pos] = idx
    if len(assign) < n:
        # the final pool entry (if loop broke early) holds the last target
        used = set(assign.keys())
        left_pos = [p for p in range(n) if p not in used]
        left_idx = [i for i in range(n) if i not in set(assign.values())]
        for p, i in zip(left_pos, left_idx):
            assign[p] = i
    perm = np.zeros((n, n))
    for pos, idx in assign.items():
        perm[idx, pos] = 1.0
    M = perm @ M @ perm.T
    M = (M + M.T) / 2.0
    for i in range(n):
        M[i, i] = float(diag[i])
    return M


def construct_three_point(seq, A, B, Z, N, K, subset_mode=False) -> np.ndarray:
    """Realize a finite three-point instance (spectrum B, A, 0 with the
    given multiplicities) as a symmetric matrix."""
    vals = [Fraction(x) for x in seq]
    target = SpectrumTarget(A, B, Z, N, K)
    dec = decide_case_a(DiagonalSpec(Fraction(B), tuple(vals)), target, subset_mode)
    if not dec.feasible:
        raise ValueError(f"infeasible instance: {dec.violation}")
    eigs = [Fraction(B)] * K + [Fraction(A)] * N + [Fraction(0)] * Z
    return construct_hermitian(eigs, vals)


# ---------------------------------------------------------------------------
# Construction plans
#
# Index references: ("finite", i) for an explicit term, ("tail", t, i) for
# term i (1-based) of tail t.  Symbolic parts of a tail:
#   ("suffix", t, s)    : all terms i >= s
#   ("odd_from", t, s)  : terms s, s+2, s+4, ...
#   ("even_from", t, s) : terms s+1, s+3, s+5, ...

@dataclass(frozen=True)
class Transfer:
    low: tuple
    high: tuple
    eta0: Fraction


@dataclass(frozen=True)
class FiniteThreePointBlock:
    refs: tuple
    parts: tuple
    Z: object
    N: int
    K: object


@dataclass(frozen=True)
class ScaledProjectionBlock:
    """Sub-diagonal of scale*Q + shift for a projection Q."""

    refs: tuple
    parts: tuple
    scale: Fraction
    shift: Fraction
    rank: object = None
    corank: object = None


@dataclass(frozen=True)
class ConstructionPlan:
    case_label: str
    reflected: bool
    transfers: tuple
    blocks: tuple


_COLLECT_CAP = 200000


def _region_stream(seq: DiagonalSpec, lo, hi):
    """(ref, value) pairs with value in [lo, hi); tails round-robin."""
    for i, x in enumerate(seq.finite_terms):
        if x >= lo and (is_inf(hi) or x < hi):
            yield ("finite", i), x
    live = []
    for t, atom in enumerate(seq.tails):
        rng = atom._index_range(lo, hi)
        if rng is not None:
            live.append([t, atom, rng[0], rng[1]])
    while live:
        nxt = []
        for t, atom, i, i1 in live:
            yield ("tail", t, i), atom.term(i)
            if is_inf(i1) or i < i1:
                nxt.append([t, atom, i + 1, i1])
        live = nxt


def _collect(stream, weight, threshold):
    """Gather refs until the accumulated weight reaches threshold."""
    refs, vals, total = [], [], Fraction(0)
    if threshold <= 0:
        return refs, vals, total
    for n, (ref, x) in enumerate(stream):
        if n > _COLLECT_CAP:
            break
        w = weight(x)
        if w <= 0:
            continue
        refs.append(ref)
        vals.append(x)
        total += w
        if total >= threshold:
            return refs, vals, total
    raise PlanSynthesisError("no finite index set accumulates the required mass")


def _ref_value(seq: DiagonalSpec, ref, overrides):
    if ref in overrides:
        return overrides[ref]
    if ref[0] == "finite":
        return seq.finite_terms[ref[1]]
    return seq.tails[ref[1]].term(ref[2])


def _part_atom(seq: DiagonalSpec, part) -> TailAtom:
    kind, t, s = part
    atom = seq.tails[t].suffix(s - 1)
    if kind == "suffix":
        return atom
    if kind == "odd_from":
        return atom.odd_part()
    if kind == "even_from":
        return atom.even_part()
    raise ValueError(f"unknown part kind {kind!r}")


def _complement_block(seq: DiagonalSpec, used_refs):
    """Refs + parts covering everything outside used_refs."""
    used_fin = {r[1] for r in used_refs if r[0] == "finite"}
    used_tail = {}
    for r in used_refs:
        if r[0] == "tail":
            used_tail.setdefault(r[1], set()).add(r[2])
    refs = [("finite", i) for i in range(len(seq.finite_terms)) if i not in used_fin]
    parts = []
    for t in range(len(seq.tails)):
        used = used_tail.get(t, set())
        m = max(used) if used else 0
        refs.extend(("tail", t, i) for i in range(1, m + 1) if i not in used)
        parts.append(("suffix", t, m + 1))
    return tuple(refs), tuple(parts)


def _lift_plan(seq: DiagonalSpec, target: SpectrumTarget, count: int,
               reflected: bool, label: str) -> ConstructionPlan:
    """Lift `count` entries of an infinite-mass tail up to A; the rest is a
    B-scaled projection diagonal."""
    A, B = target.A, target.B
    t_idx = None
    for t, atom in enumerate(seq.tails):
        if is_inf(atom.linear_sum(1, 0, 0, A)):
            t_idx = t
            break
    if t_idx is None:
        raise PlanSynthesisError("infinite below-A mass is not carried by a tail")
    atom = seq.tails[t_idx]
    rng = atom._index_range(0, A)
    cursor = rng[0]
    transfers = []
    lifted = []
    consumed = []
    for _ in range(count):
        if atom.v >= 0:
            i0 = cursor
            eta = A - atom.term(i0)
            low, lv, li = [], Fraction(0), i0 + 1
            while lv < eta:
                low.append(("tail", t_idx, li))
                lv += atom.term(li)
                li += 1
                if li - i0 > _COLLECT_CAP:
                    raise PlanSynthesisError("lift source exhausted")
            cursor = li
        else:
            # increasing terms: sources come before the lifted entry
            start = cursor
            i0 = start
            lv = Fraction(0)
            while True:
                i0 += 1
                lv += atom.term(i0 - 1)
                if lv >= A - atom.term(i0):
                    break
                if i0 - start > _COLLECT_CAP:
                    raise PlanSynthesisError("lift source exhausted")
            eta = A - atom.term(i0)
            low = [("tail", t_idx, i) for i in range(start, i0)]
            cursor = i0 + 1
        hi_ref = ("tail", t_idx, i0)
        if eta > 0:
            transfers.append(Transfer(tuple(low), (hi_ref,), eta))
            consumed.extend(low)
        lifted.append(hi_ref)
        consumed.append(hi_ref)
    rest_refs, rest_parts = _complement_block(seq, lifted + consumed)
    # the transfer sources stay in the rest block with their reduced values
    rest_refs = tuple(sorted(set(rest_refs) | (set(consumed) - set(lifted))))
    blocks = (
        FiniteThreePointBlock(tuple(lifted), (), 0, count, 0),
        ScaledProjectionBlock(rest_refs, rest_parts, B, Fraction(0)),
    )
    return ConstructionPlan(label, reflected, tuple(transfers), blocks)


def _plan_case_c(seq, target, reflected=False) -> ConstructionPlan:
    A, B, N = target.A, target.B, target.mA
    P = partition_sums(seq, A, B)
    if is_inf(P.C):
        return _lift_plan(seq, target, N, reflected, "c")
    if is_inf(P.D):
        return _plan_case_c(seq.reflect(), target.reflected(), not reflected)
    k = int((P.C - P.D - N * A) / B)
    if k <= -N:
        # reflect onto the k >= 0 case
        return _plan_case_c(seq.reflect(), target.reflected(), not reflected)
    C, D = P.C, P.D
    if k >= 0:
        if D == 0:
            i1_refs, i1_parts = _region_cover(seq, 0, A)
            i2_refs, i2_parts = _region_cover(seq, A, INF)
            blocks = (
                FiniteThreePointBlock(i1_refs, i1_parts, INF, N, k),
                ScaledProjectionBlock(i2_refs, i2_parts, B, Fraction(0), rank=INF),
            )
            return ConstructionPlan("c", reflected, (), blocks)
        refs1, _, tot1 = _collect(_region_stream(seq, 0, A), lambda x: x, N * A + k * B)
        eta = tot1 - N * A - k * B
        transfers = []
        refs2 = []
        if eta > 0:
            refs2, _, _ = _collect(_region_stream(seq, A, INF), lambda x: B - x, eta)
            transfers.append(Transfer(tuple(refs1), tuple(refs2), eta))
        blk_Z = len(refs1) - N - k
        if blk_Z < 0:
            raise PlanSynthesisError("transfer set too small for the block kernel")
        rest_refs, rest_parts = _complement_block(seq, list(refs1) + list(refs2))
        rest_refs = tuple(sorted(set(rest_refs) | set(refs2)))
        blocks = (
            FiniteThreePointBlock(tuple(refs1), (), blk_Z, N, k),
            ScaledProjectionBlock(rest_refs, rest_parts, B, Fraction(0)),
        )
        return ConstructionPlan("c", reflected, tuple(transfers), blocks)
    # -N < k < 0: projections at scale A on I1 and B - (B-A)Q on I2
    eta = C - (N + k) * A
    refs1, refs2 = [], []
    if eta > 0:
        refs1, _, _ = _collect(_region_stream(seq, 0, A), lambda x: x, eta)
        refs2, _, _ = _collect(_region_stream(seq, A, INF), lambda x: B - x, eta)
    transfers = [Transfer(tuple(refs1), tuple(refs2), eta)]
    i1_refs, i1_parts = _region_cover(seq, 0, A, refs1)
    i2_refs, i2_parts = _region_cover(seq, A, INF, refs2)
    blocks = (
        ScaledProjectionBlock(i1_refs, i1_parts, A, Fraction(0), rank=N + k),
        ScaledProjectionBlock(i2_refs, i2_parts, -(B - A), B, rank=-k),
    )
    return ConstructionPlan("c", reflected, tuple(transfers), blocks)


def _region_cover(seq: DiagonalSpec, lo, hi, forced=()):
    """Refs + parts for all entries with value in [lo, hi).

    Refs listed in `forced` (all of which must lie in the region) are made
    explicit so that transfers can address them individually.
    """
    refs = [("finite", i) for i, x in enumerate(seq.finite_terms)
            if x >= lo and (is_inf(hi) or x < hi)]
    forced_max = {}
    for r in forced:
        if r[0] == "tail":
            forced_max[r[1]] = max(forced_max.get(r[1], 0), r[2])
    parts = []
    for t, atom in enumerate(seq.tails):
        rng = atom._index_range(lo, hi)
        if rng is None:
            continue
        i0, i1 = rng
        if is_inf(i1):
            m = max(forced_max.get(t, i0 - 1), i0 - 1)
            refs.extend(("tail", t, i) for i in range(i0, m + 1))
            parts.append(("suffix", t, m + 1))
        else:
            refs.extend(("tail", t, i) for i in range(i0, i1 + 1))
    return tuple(refs), tuple(parts)


def _plan_case_e(seq, target, reflected=False) -> ConstructionPlan:
    A, B, Z = target.A, target.B, target.m0
    P = partition_sums(seq, A, B)
    eta = A * Z - P.C1
    lowmass = P.C          # sum of d over J1
    himass = P.D           # sum of B - d over J2 u J3
    branch_i = is_inf(P.C2) or is_inf(P.C3)
    if lowmass > eta and himass > eta:
        # Case 1: move eta off J1 and onto J2 u J3
        transfers = []
        refs1, refs2 = [], []
        if eta > 0:
            refs1, _, _ = _collect(_region_stream(seq, 0, A), lambda x: x, eta)
            refs2, _, _ = _collect(_region_stream(seq, A, INF), lambda x: B - x, eta)
            transfers.append(Transfer(tuple(refs1), tuple(refs2), eta))
        j1_refs, j1_parts = _region_cover(seq, 0, A, refs1)
        j23_refs, j23_parts = _region_cover(seq, A, INF, refs2)
        rank1 = INF if is_inf(P.card_I1) else P.card_I1 - Z
        blocks = (
            ScaledProjectionBlock(j1_refs, j1_parts, A, Fraction(0),
                                  rank=rank1, corank=Z),
            ScaledProjectionBlock(j23_refs, j23_parts, B - A, A,
                                  rank=INF if branch_i or is_inf(P.card_J3) else None),
        )
        return ConstructionPlan("e", reflected, tuple(transfers), blocks)
    if lowmass <= eta:
        # Case 2: J1 is finite with at most Z elements; zero out Z entries
        if is_inf(P.card_I1):
            raise PlanSynthesisError("divergent J1 mass bookkeeping")
        j1_refs, _ = _region_cover(seq, 0, A)
        need = Z - P.card_I1
        pool = []
        stream = _region_stream(seq, A, INF)
        for n, (ref, x) in enumerate(stream):
            pool.append((x, ref))
            if len(pool) >= max(4 * need + 8, 32):
                break
            if n > _COLLECT_CAP:
                raise PlanSynthesisError("high-side pool exhausted")
        pool.sort(key=lambda p: p[0])
        L1 = pool[:need]
        eta0 = sum((x for x, _ in L1), Fraction(0)) + lowmass
        cut = L1[-1][0] if L1 else Fraction(0)
        refs2, acc = [], Fraction(0)
        for x, ref in pool[need:]:
            if x < cut:
                continue
            refs2.append(ref)
            acc += B - x
            if acc >= eta0:
                break
        if acc < eta0:
            # extend from the stream beyond the pool
            for n, (ref, x) in enumerate(stream):
                if x < cut or B - x <= 0:
                    continue
                refs2.append(ref)
                acc += B - x
                if acc >= eta0:
                    break
                if n > _COLLECT_CAP:
                    raise PlanSynthesisError("high-side mass exhausted")
            if acc < eta0:
                raise PlanSynthesisError("high-side mass exhausted")
        K1 = list(j1_refs) + [ref for _, ref in L1]
        transfers = []
        if eta0 > 0:
            transfers.append(Transfer(tuple(K1), tuple(refs2), eta0))
        rest_refs, rest_parts = _complement_block(seq, K1 + list(refs2))
        rest_refs = tuple(sorted(set(rest_refs) | set(refs2)))
        blocks = (
            FiniteThreePointBlock(tuple(K1), (), Z, 0, 0),
            ScaledProjectionBlock(rest_refs, rest_parts, B - A, A, rank=INF),
        )
        return ConstructionPlan("e", reflected, tuple(transfers), blocks)
    raise PlanSynthesisError(
        "degenerate high-side mass (Case 3 of the kernel-finite construction); "
        "no finite certificate is synthesized for this corner")


def certify(seq: DiagonalSpec, target: SpectrumTarget) -> ConstructionPlan:
    """Certificate of feasibility for infinite-multiplicity patterns."""
    dec = decide(seq, target)
    if not dec.feasible:
        raise ValueError(f"infeasible instance: {dec.violation}")
    label = dec.witness.case_label
    if label in ("a", "b"):
        refs, parts = _complement_block(seq, [])
        blk = FiniteThreePointBlock(refs, parts, target.m0, target.mA, target.mB)
        return ConstructionPlan(label, False, (), (blk,))
    if label == "b_sym":
        r = seq.reflect()
        t = target.reflected()
        refs, parts = _complement_block(r, [])
        blk = FiniteThreePointBlock(refs, parts, t.m0, t.mA, t.mB)
        return ConstructionPlan("b_sym", True, (), (blk,))
    if label == "c":
        plan = _plan_case_c(seq, target)
        return plan
    if label == "e":
        return _plan_case_e(seq, target)
    if label == "e_sym":
        plan = _plan_case_e(seq.reflect(), target.reflected(), reflected=True)
        return ConstructionPlan("e_sym", True, plan.transfers, plan.blocks)
    if label == "f":
        P = partition_sums(seq, target.A, target.B)
        if is_inf(P.C):
            return _lift_plan(seq, target, 1, False, "f")
        return _lift_plan(seq.reflect(), target.reflected(), 1, True, "f")
    raise PlanSynthesisError(f"no plan synthesis for case {label!r}")


def _subspec(seq: DiagonalSpec, refs, parts, overrides) -> DiagonalSpec:
    vals = tuple(_ref_value(seq, r, overrides) for r in refs)
    atoms = tuple(_part_atom(seq, p) for p in parts)
    return DiagonalSpec(seq.bound_B, vals, atoms)


def verify_plan(seq: DiagonalSpec, target: SpectrumTarget,
                plan: ConstructionPlan) -> bool:
    """Re-check every plan invariant in exact arithmetic; raises on failure."""
    if plan.reflected:
        seq = seq.reflect()
        target = target.reflected()
    A, B = target.A, target.B

    overrides = {}
    for tr in plan.transfers:
        low = [_ref_value(seq, r, overrides) for r in tr.low]
        high = [_ref_value(seq, r, overrides) for r in tr.high]
        low2, high2 = move_mass(low, high, tr.eta0, B)
        overrides.update(zip(tr.low, low2))
        overrides.update(zip(tr.high, high2))

    # coverage: blocks partition the index set
    explicit = []
    for blk in plan.blocks:
        explicit.extend(blk.refs)
    if len(set(explicit)) != len(explicit):
        raise PlanVerificationError("blocks overlap")
    fin = sorted(r[1] for r in explicit if r[0] == "finite")
    if fin != list(range(len(seq.finite_terms))):
        raise PlanVerificationError("explicit terms not fully covered")
    parts_by_tail = {}
    for blk in plan.blocks:
        for p in blk.parts:
            parts_by_tail.setdefault(p[1], []).append(p)
    for t in range(len(seq.tails)):
        used = sorted(r[2] for r in explicit if r[0] == "tail" and r[1] == t)
        ps = sorted(parts_by_tail.get(t, []))
        kinds = [p[0] for p in ps]
        if kinds == ["suffix"]:
            s = ps[0][2]
        elif sorted(kinds) == ["even_from", "odd_from"] and ps[0][2] == ps[1][2]:
            s = ps[0][2]
        else:
            raise PlanVerificationError(f"tail {t} not covered by a recognized pattern")
        if used != list(range(1, s)):
            raise PlanVerificationError(f"tail {t} explicit indices do not fill 1..{s - 1}")
    moved = {r for tr in plan.transfers for r in tr.low + tr.high}
    if not moved <= set(explicit):
        raise PlanVerificationError("transfer touches an index hidden inside a tail part")

    for blk in plan.blocks:
        sub = _subspec(seq, blk.refs, blk.parts, overrides)
        if isinstance(blk, FiniteThreePointBlock):
            t = SpectrumTarget(A, B, blk.Z, blk.N, blk.K)
            dec = decide(sub, t, subset_mode=True)
            if not dec.feasible:
                raise PlanVerificationError(f"three-point block fails: {dec.violation}")
        else:
            s, sh = blk.scale, blk.shift
            q = sub.affine(Fraction(1) / s, -sh / s, Fraction(1))
            idx = kadison_index(q, Fraction(1, 2))
            if not kadison_feasible(idx):
                raise PlanVerificationError(f"projection block index {idx} infeasible")
            if blk.rank is not None:
                total = q.linear_sum(1, 0, 0, INF)
                if is_inf(blk.rank) != is_inf(total) or total != blk.rank:
                    raise PlanVerificationError(
                        f"projection rank {total} != {blk.rank}")
            if blk.corank is not None:
                comp = q.linear_sum(-1, 1, 0, INF)
                if is_inf(blk.corank) != is_inf(comp) or comp != blk.corank:
                    raise PlanVerificationError(
                        f"projection corank {comp} != {blk.corank}")
    return True
