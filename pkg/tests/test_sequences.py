import random
from fractions import Fraction as F

import pytest

from threepoint import (INF, ConstantTail, DiagonalSpec, GeometricAbove,
                        GeometricLower, GeometricUpper, format_rational,
                        is_inf, move_mass, parse_rational, partition_sums,
                        spec_from_json, spec_to_json)

# ---------------------------------------------------------------------------
# rationals and tail atoms

def test_rational_round_trip():
    for s in ("1/3", "0", "5", "22/7"):
        assert format_rational(parse_rational(s)) == s


def test_geo_lower_terms():
    t = GeometricLower(F(1), F(1, 2))
    assert [t.term(i) for i in (1, 2, 3)] == [F(1, 2), F(1, 4), F(1, 8)]
    assert t.limit == 0


def test_geo_upper_terms():
    t = GeometricUpper(F(1), F(1), F(1, 2))
    assert [t.term(i) for i in (1, 2, 3)] == [F(1, 2), F(3, 4), F(7, 8)]
    assert t.limit == 1


def test_const_terms():
    t = ConstantTail(F(1, 3))
    assert t.term(7) == F(1, 3)
    assert is_inf(t.linear_sum(1, 0, 0, INF))


def test_affine_reflect():
    t = GeometricLower(F(1), F(1, 2))
    r = t.affine(-1, F(1))
    assert [r.term(i) for i in (1, 2)] == [F(1, 2), F(3, 4)]


def test_suffix_and_parity_split():
    t = GeometricLower(F(1), F(1, 2))
    s = t.suffix(2)
    assert s.term(1) == t.term(3)
    ev, od = t.even_part(), t.odd_part()
    assert od.term(1) == t.term(1) and od.term(2) == t.term(3)
    assert ev.term(1) == t.term(2) and ev.term(2) == t.term(4)


def test_linear_sum_geometric_closed_form():
    t = GeometricLower(F(1), F(1, 2))
    # total mass: sum 2^-i = 1
    assert t.linear_sum(1, 0, 0, INF) == 1
    # below 1/4: terms 1/8 + 1/16 + ... = 1/4
    assert t.linear_sum(1, 0, 0, F(1, 4)) == F(1, 4)
    # terms in [1/8, 1/2): 1/8 + 1/4 = 3/8
    assert t.linear_sum(1, 0, F(1, 8), F(1, 2)) == F(3, 8)


def test_linear_sum_divergent():
    t = ConstantTail(F(1, 4))
    assert is_inf(t.linear_sum(1, 0, 0, F(1, 2)))
    assert t.linear_sum(1, 0, F(1, 2), INF) == 0


def test_count_in():
    t = GeometricLower(F(1), F(1, 2))
    assert t.count_in(F(1, 8), F(1, 2)) == 2
    assert is_inf(t.count_in(0, F(1, 2)))


# ---------------------------------------------------------------------------
# DiagonalSpec

def _beta_family(beta):
    return DiagonalSpec(F(1), (), (GeometricLower(F(1), beta),
                                   GeometricUpper(F(1), F(1), beta)))


def test_spec_reflect_involution():
    seq = _beta_family(F(2, 5))
    assert seq.reflect().reflect() == seq


def test_partition_sums_example():
    seq = _beta_family(F(2, 5))
    P = partition_sums(seq, F(1, 2))
    # C = sum beta^i = beta/(1-beta) = 2/3; D symmetric
    assert P.C == F(2, 3) and P.D == F(2, 3)
    assert is_inf(P.card_I1) and is_inf(P.card_I2)


def test_partition_sums_reflection_swaps_C_D():
    seq = DiagonalSpec(F(1), (F(1, 3), F(2, 3)),
                       (GeometricLower(F(1, 2), F(1, 3)),
                        ConstantTail(F(3, 4))))
    P = partition_sums(seq, F(2, 5))
    Q = partition_sums(seq.reflect(), F(3, 5))
    assert P.C == Q.D or (is_inf(P.C) and is_inf(Q.D))
    assert P.D == Q.C or (is_inf(P.D) and is_inf(Q.C))


def test_ascending_values():
    # open interval: endpoints excluded, duplicates merged across tails
    seq = _beta_family(F(1, 2))
    vals = list(seq.ascending_values(F(1, 8), F(7, 8)))
    assert vals == [F(1, 4), F(1, 2), F(3, 4)]


def test_spec_json_round_trip():
    seq = DiagonalSpec(F(1), (F(1, 3),),
                       (GeometricLower(F(1), F(1, 2)),
                        GeometricUpper(F(1), F(1, 4), F(1, 3)),
                        ConstantTail(F(2, 7))))
    again = spec_from_json(spec_to_json(seq))
    assert again == seq


def test_spec_json_missing_B():
    with pytest.raises(ValueError):
        spec_from_json({"finite": ["1/2"]})


def test_spec_range_validation():
    with pytest.raises(ValueError):
        DiagonalSpec(F(1), (F(3, 2),))
    with pytest.raises(ValueError):
        DiagonalSpec(F(1), (), (GeometricLower(F(3), F(1, 2)),))


# ---------------------------------------------------------------------------
# move_mass

def test_move_mass_basic():
    low, high = [F(1, 4), F(1, 8)], [F(1, 2), F(3, 4)]
    l2, h2 = move_mass(low, high, F(1, 4), F(1))
    assert sum(low) - sum(l2) == F(1, 4)
    assert sum(h2) - sum(high) == F(1, 4)


def test_move_mass_invariants_random():
    rng = random.Random(7)
    B = F(1)
    checked = 0
    for trial in range(1000):
        nl = rng.randint(1, 5)
        nh = rng.randint(1, 5)
        cut = rng.randint(1, 15)
        low = sorted(F(rng.randint(0, cut), 16) for _ in range(nl))
        high = sorted(F(rng.randint(cut, 16), 16) for _ in range(nh))
        room = min(sum(low), sum(B - h for h in high))
        if trial % 10 == 0:
            eta = F(0)
        elif trial % 10 == 1:
            eta = room  # exhausts one side exactly
        else:
            eta = room * F(rng.randint(0, 16), 16)
            if eta > room:
                eta = room
        l2, h2 = move_mass(low, high, eta, B)
        assert sum(low) - sum(l2) == eta                      # (ops1)
        assert sum(h2) - sum(high) == eta                     # (ops2)
        assert all(0 <= y <= x for x, y in zip(low, l2))
        assert all(x <= y <= B for x, y in zip(high, h2))
        checked += 1
    assert checked == 1000


def test_move_mass_eta_too_large():
    with pytest.raises(ValueError):
        move_mass([F(1, 4)], [F(1, 2)], F(1, 2), F(1))
    with pytest.raises(ValueError):
        move_mass([F(1, 2)], [F(7, 8)], F(1, 4), F(1))
