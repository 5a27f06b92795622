"""Diagonal sequences with symbolic infinite tails.

A sequence is a finite multiset of explicit rationals plus finitely many
tail atoms.  Every atom has terms u + v*r^i for i = 1, 2, ... with
0 < r < 1 (or v = 0 for a constant tail), so region counts and weighted
sums split exactly at any rational threshold.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass
from fractions import Fraction

from .extended import INF, is_inf


def parse_rational(s) -> Fraction:
    """Parse "p/q" or integer strings (also accepts ints/Fractions)."""
    if isinstance(s, Fraction):
        return s
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, str):
        return Fraction(s)
    raise ValueError(f"not an exact rational: {s!r}")


def format_rational(x) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def _least_pow(r: Fraction, q: Fraction, strict: bool) -> int:
    """Smallest i >= 1 with r^i < q (strict) or r^i <= q."""
    i, p = 1, r
    while (p >= q) if strict else (p > q):
        i += 1
        p *= r
    return i


@dataclass(frozen=True)
class TailAtom:
    """Terms u + v*r^i for i = 1, 2, ...; v = 0 means a constant tail."""

    u: Fraction
    v: Fraction
    r: Fraction

    def __post_init__(self):
        object.__setattr__(self, "u", Fraction(self.u))
        object.__setattr__(self, "v", Fraction(self.v))
        object.__setattr__(self, "r", Fraction(self.r))
        if self.v != 0 and not (0 < self.r < 1):
            raise ValueError("geometric ratio must satisfy 0 < r < 1")

    @property
    def kind(self) -> str:
        if self.v == 0:
            return "const"
        if self.v > 0:
            return "geo_lower" if self.u == 0 else "geo_above"
        return "geo_upper"

    def term(self, i: int) -> Fraction:
        return self.u + self.v * self.r**i

    @property
    def first(self) -> Fraction:
        return self.term(1)

    @property
    def limit(self) -> Fraction:
        return self.u

    def lo_value(self) -> Fraction:
        return min(self.u, self.first)

    def hi_value(self) -> Fraction:
        return max(self.u, self.first)

    def values(self):
        for i in itertools.count(1):
            yield self.term(i)

    def head(self, n: int):
        return [self.term(i) for i in range(1, n + 1)]

    def affine(self, s, t) -> "TailAtom":
        s, t = Fraction(s), Fraction(t)
        return TailAtom(s * self.u + t, s * self.v, self.r)

    def suffix(self, n: int) -> "TailAtom":
        """Drop the first n terms."""
        return TailAtom(self.u, self.v * self.r**n, self.r)

    def even_part(self) -> "TailAtom":
        """Terms at even indices (an atom again, ratio r^2)."""
        return TailAtom(self.u, self.v, self.r * self.r)

    def odd_part(self) -> "TailAtom":
        """Terms at odd indices."""
        return TailAtom(self.u, self.v / self.r, self.r * self.r)

    def _index_range(self, lo, hi):
        """Indices i with lo <= term(i) < hi: None or (i0, i1), i1 may be INF."""
        u, v, r = self.u, self.v, self.r
        if v == 0:
            ok = u >= lo and (is_inf(hi) or u < hi)
            return (1, INF) if ok else None
        if v > 0:
            # strictly decreasing, values in (u, u + v*r]
            if is_inf(hi):
                i0 = 1
            elif u >= hi:
                return None
            elif self.first < hi:
                i0 = 1
            else:
                i0 = _least_pow(r, (hi - u) / v, strict=True)
            if u >= lo:
                i1 = INF
            else:
                if self.first < lo:
                    return None
                i1 = _least_pow(r, (lo - u) / v, strict=True) - 1
                if i1 < i0:
                    return None
            return (i0, i1)
        # v < 0: strictly increasing, values in [u + v*r, u)
        w = -v
        if self.first >= lo:
            i0 = 1
        elif u <= lo:
            return None
        else:
            i0 = _least_pow(r, (u - lo) / w, strict=False)
        if is_inf(hi) or u <= hi:
            i1 = INF
        else:
            if self.first >= hi:
                return None
            i1 = _least_pow(r, (u - hi) / w, strict=False) - 1
            if i1 < i0:
                return None
        return (i0, i1)

    def count_in(self, lo, hi):
        rng = self._index_range(lo, hi)
        if rng is None:
            return 0
        i0, i1 = rng
        return INF if is_inf(i1) else i1 - i0 + 1

    def linear_sum(self, s, t, lo, hi):
        """Sum of s*term(i) + t over terms in [lo, hi); terms must be >= 0 there."""
        s, t = Fraction(s), Fraction(t)
        rng = self._index_range(lo, hi)
        if rng is None:
            return Fraction(0)
        i0, i1 = rng
        u, v, r = self.u, self.v, self.r
        if is_inf(i1):
            limit_term = s * u + t
            if limit_term > 0:
                return INF
            if limit_term < 0:
                raise ArithmeticError("negatively divergent region sum")
            return s * v * r**i0 / (1 - r)
        n = i1 - i0 + 1
        geo = (r**i0 - r ** (i1 + 1)) / (1 - r) if v else Fraction(0)
        return (s * u + t) * n + s * v * geo

    # lookup helpers used by the admissible-set scan; only valid when every
    # infinite accumulation point is at 0 or the upper bound
    def max_value_below(self, x):
        u, v = self.u, self.v
        if v == 0:
            return u if u < x else None
        if v > 0:
            if self.first < x:
                return self.first
            if u >= x:
                return None
            i = _least_pow(self.r, (x - u) / v, strict=True)
            return self.term(i)
        # increasing to u
        if self.first >= x:
            return None
        if u <= x:
            raise ArithmeticError("no largest value below accumulation point")
        i0 = _least_pow(self.r, (u - x) / (-v), strict=False)
        return self.term(i0 - 1) if i0 > 1 else None

    def min_value_at_least(self, x):
        u, v = self.u, self.v
        if v == 0:
            return u if u >= x else None
        if v < 0:
            if self.first >= x:
                return self.first
            if u <= x:
                return None
            i = _least_pow(self.r, (u - x) / (-v), strict=False)
            return self.term(i)
        # decreasing to u
        if self.first < x:
            return None
        if u >= x:
            raise ArithmeticError("no smallest value above accumulation point")
        i1 = _least_pow(self.r, (x - u) / v, strict=True) - 1
        return self.term(i1)

    def ascending_values(self, lo, hi):
        """Distinct values in (lo, hi) in increasing order (may be infinite)."""
        u, v = self.u, self.v
        if v == 0:
            if lo < u < hi:
                yield u
            return
        if v < 0:
            if u < hi:
                raise ArithmeticError("increasing tail accumulates inside scan range")
            for i in itertools.count(1):
                x = self.term(i)
                if x >= hi:
                    return
                if x > lo:
                    yield x
        else:
            if u > lo:
                raise ArithmeticError("decreasing tail accumulates inside scan range")
            vals = []
            for i in itertools.count(1):
                x = self.term(i)
                if x <= lo:
                    break
                if x < hi:
                    vals.append(x)
            yield from sorted(vals)


def ConstantTail(v) -> TailAtom:
    return TailAtom(Fraction(v), Fraction(0), Fraction(1, 2))


def GeometricLower(c, r) -> TailAtom:
    c = Fraction(c)
    if c <= 0:
        raise ValueError("GeometricLower needs c > 0")
    return TailAtom(Fraction(0), c, Fraction(r))


def GeometricUpper(L, c, r) -> TailAtom:
    c = Fraction(c)
    if c <= 0:
        raise ValueError("GeometricUpper needs c > 0")
    return TailAtom(Fraction(L), -c, Fraction(r))


def GeometricAbove(base, c, r) -> TailAtom:
    c = Fraction(c)
    if c <= 0:
        raise ValueError("GeometricAbove needs c > 0")
    return TailAtom(Fraction(base), c, Fraction(r))


@dataclass(frozen=True)
class DiagonalSpec:
    """A diagonal sequence: explicit terms plus symbolic tails, all in [0, B]."""

    bound_B: Fraction
    finite_terms: tuple = ()
    tails: tuple = ()

    def __post_init__(self):
        B = Fraction(self.bound_B)
        if B <= 0:
            raise ValueError("bound_B must be positive")
        terms = tuple(Fraction(x) for x in self.finite_terms)
        tails = tuple(self.tails)
        object.__setattr__(self, "bound_B", B)
        object.__setattr__(self, "finite_terms", terms)
        object.__setattr__(self, "tails", tails)
        for x in terms:
            if not 0 <= x <= B:
                raise ValueError(f"term {x} outside [0, {B}]")
        for t in tails:
            if not isinstance(t, TailAtom):
                raise ValueError("tails must be TailAtom instances")
            if t.lo_value() < 0 or t.hi_value() > B:
                raise ValueError("tail values outside [0, B]")

    def count_in(self, lo, hi):
        total = sum(1 for x in self.finite_terms if x >= lo and (is_inf(hi) or x < hi))
        for t in self.tails:
            c = t.count_in(lo, hi)
            if is_inf(c):
                return INF
            total += c
        return total

    def linear_sum(self, s, t, lo, hi):
        s, t = Fraction(s), Fraction(t)
        total = Fraction(0)
        for x in self.finite_terms:
            if x >= lo and (is_inf(hi) or x < hi):
                total += s * x + t
        for atom in self.tails:
            part = atom.linear_sum(s, t, lo, hi)
            if is_inf(part):
                return INF
            total += part
        return total

    def reflect(self) -> "DiagonalSpec":
        B = self.bound_B
        return DiagonalSpec(
            B,
            tuple(B - x for x in self.finite_terms),
            tuple(t.affine(-1, B) for t in self.tails),
        )

    def affine(self, s, t, new_bound) -> "DiagonalSpec":
        s, t = Fraction(s), Fraction(t)
        return DiagonalSpec(
            Fraction(new_bound),
            tuple(s * x + t for x in self.finite_terms),
            tuple(a.affine(s, t) for a in self.tails),
        )

    def is_value(self, x) -> bool:
        if any(v == x for v in self.finite_terms):
            return True
        return any(t.min_value_at_least(x) == x for t in self.tails)

    def max_value_below(self, x):
        best = None
        for v in self.finite_terms:
            if v < x and (best is None or v > best):
                best = v
        for t in self.tails:
            v = t.max_value_below(x)
            if v is not None and (best is None or v > best):
                best = v
        return best

    def min_value_at_least(self, x):
        best = None
        for v in self.finite_terms:
            if v >= x and (best is None or v < best):
                best = v
        for t in self.tails:
            v = t.min_value_at_least(x)
            if v is not None and (best is None or v < best):
                best = v
        return best

    def ascending_values(self, lo, hi):
        """Distinct values in (lo, hi) ascending, merged across terms and tails."""
        streams = [iter(sorted({x for x in self.finite_terms if lo < x < hi}))]
        streams += [t.ascending_values(lo, hi) for t in self.tails]
        prev = None
        for x in heapq.merge(*streams):
            if x != prev:
                prev = x
                yield x

    def head_values(self, depth: int):
        """Finite truncation: all explicit terms plus `depth` terms per tail."""
        vals = list(self.finite_terms)
        for t in self.tails:
            vals.extend(t.head(depth))
        return vals


@dataclass(frozen=True)
class PartitionSums:
    """The threshold sums and cardinalities at inner value A (split at (A+B)/2)."""

    C: object
    D: object
    C1: object
    C2: object
    C3: object
    card_I1: object
    card_I2: object
    card_J2: object
    card_J3: object
    sum_d: object
    sum_comp: object

    @property
    def card_I(self):
        return self.card_I1 + self.card_I2


def partition_sums(seq: DiagonalSpec, A, B=None) -> PartitionSums:
    A = Fraction(A)
    B = seq.bound_B if B is None else Fraction(B)
    if not 0 < A < B:
        raise ValueError("need 0 < A < B")
    if B != seq.bound_B:
        raise ValueError("B must match the sequence bound")
    M = (A + B) / 2
    return PartitionSums(
        C=seq.linear_sum(1, 0, 0, A),
        D=seq.linear_sum(-1, B, A, INF),
        C1=seq.linear_sum(-1, A, 0, A),
        C2=seq.linear_sum(1, -A, A, M),
        C3=seq.linear_sum(-1, B, M, INF),
        card_I1=seq.count_in(0, A),
        card_I2=seq.count_in(A, INF),
        card_J2=seq.count_in(A, M),
        card_J3=seq.count_in(M, INF),
        sum_d=seq.linear_sum(1, 0, 0, INF),
        sum_comp=seq.linear_sum(-1, B, 0, INF),
    )


def move_mass(low, high, eta0, B):
    """Shift eta0 of diagonal mass off the low entries and onto the high ones.

    Returns (low2, high2) with low2[i] <= low[i], high[i] <= high2[i],
    sum(low2) = sum(low) - eta0 and sum(B - high2) = sum(B - high) - eta0.
    """
    B = Fraction(B)
    eta0 = Fraction(eta0)
    low = [Fraction(x) for x in low]
    high = [Fraction(x) for x in high]
    for x in low + high:
        if not 0 <= x <= B:
            raise ValueError(f"entry {x} outside [0, {B}]")
    if eta0 < 0:
        raise ValueError("eta0 must be nonnegative")
    if low and high and max(low) > min(high):
        raise ValueError("low entries must not exceed high entries")
    if eta0 > sum(low, Fraction(0)):
        raise ValueError("eta0 exceeds total low mass")
    if eta0 > sum((B - x for x in high), Fraction(0)):
        raise ValueError("eta0 exceeds total high headroom")
    low2 = list(low)
    rem = eta0
    for i in range(len(low2) - 1, -1, -1):
        take = min(low2[i], rem)
        low2[i] -= take
        rem -= take
    high2 = list(high)
    rem = eta0
    for i in range(len(high2)):
        take = min(B - high2[i], rem)
        high2[i] += take
        rem -= take
    return low2, high2


# ---------------------------------------------------------------------------
# JSON serialization

def tail_to_json(t: TailAtom) -> dict:
    k = t.kind
    if k == "const":
        return {"kind": "const", "v": format_rational(t.u)}
    if k == "geo_lower":
        return {"kind": "geo_lower", "c": format_rational(t.v), "r": format_rational(t.r)}
    if k == "geo_upper":
        return {"kind": "geo_upper", "L": format_rational(t.u),
                "c": format_rational(-t.v), "r": format_rational(t.r)}
    return {"kind": "geo_above", "base": format_rational(t.u),
            "c": format_rational(t.v), "r": format_rational(t.r)}


def tail_from_json(obj: dict) -> TailAtom:
    kind = obj.get("kind")
    if kind == "const":
        return ConstantTail(parse_rational(obj["v"]))
    if kind == "geo_lower":
        return GeometricLower(parse_rational(obj["c"]), parse_rational(obj["r"]))
    if kind == "geo_upper":
        return GeometricUpper(parse_rational(obj["L"]), parse_rational(obj["c"]),
                              parse_rational(obj["r"]))
    if kind == "geo_above":
        return GeometricAbove(parse_rational(obj["base"]), parse_rational(obj["c"]),
                              parse_rational(obj["r"]))
    raise ValueError(f"unknown tail kind: {kind!r}")


def spec_to_json(seq: DiagonalSpec) -> dict:
    return {
        "B": format_rational(seq.bound_B),
        "finite": [format_rational(x) for x in seq.finite_terms],
        "tails": [tail_to_json(t) for t in seq.tails],
    }


def spec_from_json(obj: dict) -> DiagonalSpec:
    if "B" not in obj:
        raise ValueError('missing "B" field')
    return DiagonalSpec(
        parse_rational(obj["B"]),
        tuple(parse_rational(x) for x in obj.get("finite", [])),
        tuple(tail_from_json(t) for t in obj.get("tails", [])),
    )
