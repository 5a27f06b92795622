"""Extended rational values: exact Fractions plus a +infinity sentinel.

All feasibility logic works with `fractions.Fraction` for finite values and
the singleton `INF` for infinite sums / cardinalities.  Subtracting INF from
INF raises: the one place the convention "inf - inf = 0" is allowed is the
carpenter index, and that branch is handled explicitly by its caller.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational


class _PlusInfinity:
    """Positive infinity, comparable with exact rationals."""

    __slots__ = ()

    def __repr__(self):
        return "INF"

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is INF

    def __gt__(self, other):
        return other is not INF

    def __ge__(self, other):
        return True

    def __eq__(self, other):
        return other is INF

    def __hash__(self):
        return hash(float("inf"))

    def __add__(self, other):
        if other is INF or isinstance(other, Rational):
            return INF
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if other is INF:
            raise ArithmeticError("INF - INF is undefined here")
        if isinstance(other, Rational):
            return INF
        return NotImplemented

    def __rsub__(self, other):
        raise ArithmeticError("finite - INF is undefined here")

    def __mul__(self, other):
        if other is INF:
            return INF
        if isinstance(other, Rational):
            if other > 0:
                return INF
            raise ArithmeticError("INF * nonpositive is undefined here")
        return NotImplemented

    __rmul__ = __mul__

    def __neg__(self):
        raise ArithmeticError("negated INF is not representable")


INF = _PlusInfinity()

#: An extended rational is either an exact Fraction or INF.
Ext = object


def is_inf(x) -> bool:
    return x is INF


def ext_sum(values):
    """Sum of extended rationals; INF absorbs."""
    total = Fraction(0)
    for v in values:
        if v is INF:
            return INF
        total += v
    return total


def as_fraction(x) -> Fraction:
    if x is INF:
        raise ValueError("expected a finite value, got INF")
    return Fraction(x)
