import random
from fractions import Fraction

import pytest

from octaslope.fields import RATIONALS, QuadraticField
from octaslope.slopes import (
    DegenerateSlopeError,
    PluckerViolationError,
    Slope,
    conjugate_slopes,
    grassmann,
    grassmann_from_values,
    is_irrational,
    plane_from_grassmann,
    rational_subspace,
    slope_from_config,
)

Q2 = QuadraticField((2,))
Q23 = QuadraticField((2, 3))


def rational_plane() -> Slope:
    return Slope.from_entries(RATIONALS, (1, 0, 1, 2), (0, 1, 1, 1))


def random_slope(rng, field, span=4) -> Slope:
    while True:
        entries = [
            field.element([Fraction(rng.randint(-span, span), rng.randint(1, 3)) for _ in range(field.degree)])
            for _ in range(8)
        ]
        try:
            return Slope(field, tuple(entries[:4]), tuple(entries[4:]))
        except ValueError:
            continue


def test_ab_grassmann_exact(ab_slope):
    g = grassmann(ab_slope)
    r2 = Q2.sqrt_of(2)
    assert tuple(g.g) == (Q2.one, r2, Q2.one, Q2.one, r2, Q2.one)
    assert g.normalized
    assert g.is_nondegenerate()


def test_rational_grassmann_by_hand():
    g = grassmann(rational_plane())
    assert [x.rational_value() for x in g.g] == [1, 1, 1, -1, -2, -1]
    assert g.plucker_defect().is_zero


def test_coordinate_plane_degenerate():
    s = Slope.from_entries(RATIONALS, (1, 0, 0, 0), (0, 1, 0, 0))
    g = grassmann(s)
    assert [x.rational_value() for x in g.g] == [1, 0, 0, 0, 0, 0]
    assert not g.is_nondegenerate()


def test_fig4_nondegenerate(fig4_slope):
    g = grassmann(fig4_slope)
    expected = (
        Q23.one,
        Q23.sqrt_of(2),
        Q23.sqrt_of(3),
        2 * Q23.sqrt_of(2),
        3 * Q23.sqrt_of(3),
        Q23.sqrt_of(6),
    )
    assert tuple(g.g) == expected
    assert g.is_nondegenerate()


def test_plucker_property_random():
    rng = random.Random(23)
    fields = (RATIONALS, Q2, QuadraticField((3,)), QuadraticField((5,)))
    for _ in range(1000):
        s = random_slope(rng, rng.choice(fields))
        assert grassmann(s, normalize=False).plucker_defect().is_zero


def test_plane_from_grassmann_round_trip(ab_slope):
    rng = random.Random(5)
    g = grassmann(ab_slope)
    assert grassmann(plane_from_grassmann(g)).g == g.g
    for _ in range(50):
        s = random_slope(rng, Q2)
        g = grassmann(s)
        if not g.is_nondegenerate():
            continue
        assert grassmann(plane_from_grassmann(g)).g == g.g


def test_plane_from_grassmann_errors():
    degenerate = grassmann_from_values(
        [Q2.one, Q2.zero, Q2.zero, Q2.zero, Q2.zero, Q2.zero]
    )
    with pytest.raises(DegenerateSlopeError):
        plane_from_grassmann(degenerate)
    bad = grassmann_from_values([Q2.one] * 6, normalize=False)
    with pytest.raises(PluckerViolationError):
        plane_from_grassmann(bad)


def test_rational_subspace_examples(ab_slope, fig4_slope):
    assert rational_subspace(ab_slope) == []
    assert is_irrational(ab_slope)
    assert len(rational_subspace(rational_plane())) == 2
    assert rational_subspace(fig4_slope) == []


def test_rational_subspace_vectors_lie_in_plane():
    s = rational_plane()
    for vec in rational_subspace(s):
        w = tuple(RATIONALS.rational(x) for x in vec)
        assert s.contains_direction(w)


def test_dimension_two_iff_commensurate():
    rng = random.Random(41)
    for _ in range(30):
        # Rational Grassmann vectors satisfying the identity give dimension 2.
        while True:
            g13, g14, g23, g24 = (Fraction(rng.randint(1, 5)) for _ in range(4))
            g34 = Fraction(rng.randint(1, 5))
            g12 = (g13 * g24 - g14 * g23) / g34
            if g12 != 0:
                break
        g = grassmann_from_values(
            [RATIONALS.rational(x) for x in (g12, g13, g14, g23, g24, g34)],
            normalize=False,
        )
        s = plane_from_grassmann(g)
        assert len(rational_subspace(s)) == 2
        ratios_rational = all(
            (a / b).rational_value() is not None
            for a in grassmann(s).g
            for b in grassmann(s).g
        )
        assert ratios_rational


def test_conjugate_slopes(ab_slope, fig4_slope):
    g = grassmann(ab_slope)
    conj = conjugate_slopes(g)
    assert len(conj) == 2
    r2 = Q2.sqrt_of(2)
    assert tuple(conj[1].g) == (Q2.one, -r2, Q2.one, Q2.one, -r2, Q2.one)

    rational_g = grassmann(rational_plane())
    assert conjugate_slopes(rational_g) == (rational_g,)

    fig4_conj = conjugate_slopes(grassmann(fig4_slope))
    assert len(fig4_conj) == 4
    for c in fig4_conj:
        assert c.satisfies_plucker()


def test_config_round_trip(ab_slope):
    data = {
        "format": 1,
        "radicands": [2],
        "u": [["0", "1"], ["1", "0"], ["0", "0"], ["-1", "0"]],
        "v": [["0", "0"], ["1", "0"], ["0", "1"], ["1", "0"]],
        "offset": ["1/8", "1/16", "5/32", "1/64"],
    }
    s = slope_from_config(data)
    assert s.u == ab_slope.u and s.v == ab_slope.v and s.offset == ab_slope.offset
    with pytest.raises(ValueError):
        slope_from_config({**data, "format": 2})


def test_permuted_axes():
    s = rational_plane()
    p = s.permuted_axes((2, 1, 3, 4))
    g = grassmann(p, normalize=False)
    assert g[(1, 2)].rational_value() == -1
