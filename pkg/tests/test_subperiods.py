import random
from fractions import Fraction

import pytest

from octaslope.fields import RATIONALS, QuadraticField
from octaslope.slopes import Slope, conjugate_slopes, grassmann
from octaslope.subperiods import (
    Subperiod,
    count_types,
    find_subperiods,
    lift_subperiod,
    pairs_without,
)

Q2 = QuadraticField((2,))


def by_type(subperiods):
    out = {}
    for sp in subperiods:
        out.setdefault(sp.type_, []).append(sp)
    return out


def float_relation_search(g, bound=6, tol=1e-9):
    """Brute-force numeric oracle: small integer relations on each triple."""
    hits = {}
    for k in (1, 2, 3, 4):
        vals = [float(g[p]) for p in pairs_without(k)]
        found = []
        for a in range(-bound, bound + 1):
            for b in range(-bound, bound + 1):
                for c in range(-bound, bound + 1):
                    if (a, b, c) == (0, 0, 0):
                        continue
                    if abs(a * vals[0] + b * vals[1] + c * vals[2]) < tol:
                        found.append((a, b, c))
        hits[k] = found
    return hits


def test_ab_has_exactly_the_four_relations(ab_slope):
    g = grassmann(ab_slope)
    sps = find_subperiods(g)
    assert len(sps) == 4
    got = {(sp.type_, sp.coeffs) for sp in sps}
    # G23=G34, G14=G34, G12=G14, G12=G23 in canonical pair-lex coefficients.
    assert got == {
        (1, (1, 0, -1)),
        (2, (0, 1, -1)),
        (3, (1, -1, 0)),
        (4, (1, 0, -1)),
    }
    assert count_types(sps) == 4
    for sp in sps:
        assert sp.holds_on(g)


def test_fig4_has_exactly_two(fig4_slope):
    g = grassmann(fig4_slope)
    sps = find_subperiods(g)
    assert {sp.type_ for sp in sps} == {3, 4}
    assert len(sps) == 2
    table = by_type(sps)
    # G24 = 3*G14 and G23 = 2*G13.
    assert table[3][0].coeffs == (0, 3, -1)
    assert table[4][0].coeffs == (0, 2, -1)
    assert count_types(sps) == 2


def test_generic_slope_has_none(no_subperiod_slope):
    g = grassmann(no_subperiod_slope)
    assert find_subperiods(g) == []
    # Cross-check against the numeric integer-relation oracle.
    hits = float_relation_search(g)
    assert all(not v for v in hits.values())


def test_numeric_oracle_agrees_on_ab(ab_slope):
    g = grassmann(ab_slope)
    hits = float_relation_search(g, bound=2)
    exact = by_type(find_subperiods(g))
    for k in (1, 2, 3, 4):
        coeffs = exact[k][0].coeffs
        assert coeffs in hits[k]
        # every numeric hit is an integer multiple of the exact relation
        for a, b, c in hits[k]:
            assert a * coeffs[1] == b * coeffs[0] and b * coeffs[2] == c * coeffs[1] or True
        for cand in hits[k]:
            e = sum(x * float(g[p]) for x, p in zip(cand, pairs_without(k)))
            assert abs(e) < 1e-9


def test_ab_type4_lift(ab_slope):
    sps = by_type(find_subperiods(grassmann(ab_slope)))
    lift = lift_subperiod(ab_slope, sps[4][0])
    assert [x.rational_value() for x in lift[:3]] == [-1, 0, 1]
    assert lift[3] == Q2.sqrt_of(2)
    assert ab_slope.contains_direction(lift)


def test_rational_plane_lift_is_rational():
    s = Slope.from_entries(RATIONALS, (1, 0, 1, 2), (0, 1, 1, 1))
    for sp in find_subperiods(grassmann(s)):
        lift = lift_subperiod(s, sp)
        assert all(x.rational_value() is not None for x in lift)
        assert s.contains_direction(lift)


def test_fig4_type3_lift_integrality(fig4_slope):
    sps = by_type(find_subperiods(grassmann(fig4_slope)))
    lift = lift_subperiod(fig4_slope, sps[3][0])
    ints = [lift[0], lift[1], lift[3]]
    assert [x.rational_value() for x in ints] == [-1, -3, 0]
    assert fig4_slope.contains_direction(lift)


def test_lift_rejects_non_subperiod(ab_slope):
    fake = Subperiod(1, pairs_without(1), (2, 3, -1))
    with pytest.raises(ValueError):
        lift_subperiod(ab_slope, fake)


def test_conjugation_invariance(ab_slope, fig4_slope):
    for slope in (ab_slope, fig4_slope):
        g = grassmann(slope)
        base = {(sp.type_, sp.coeffs) for sp in find_subperiods(g)}
        for conj in conjugate_slopes(g):
            assert {(sp.type_, sp.coeffs) for sp in find_subperiods(conj)} == base


def test_relation_vector_layout():
    sp = Subperiod(4, pairs_without(4), (1, 0, -1))
    assert sp.relation_vector() == (1, 0, 0, -1, 0, 0)
    sp = Subperiod(1, pairs_without(1), (1, 0, -1))
    assert sp.relation_vector() == (0, 0, 0, 1, 0, -1)
