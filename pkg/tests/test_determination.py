import random
from fractions import Fraction

import pytest

from octaslope.determination import (
    DETERMINED,
    FEWER_THAN_THREE_TYPES,
    HIGHER_DIMENSIONAL,
    ONE_PARAMETER_FAMILY,
    SubperiodSystem,
    ZeroRestrictedForm,
    analyze_slope,
    determined_by_subperiods,
    solve_pencil,
)
from octaslope.fields import RATIONALS, QuadraticField
from octaslope.quadforms import (
    PLUCKER_FORM,
    conics_intersect_finitely,
    evaluate_form_rational,
    poly_eval,
    resultant_in_var,
    restrict_form,
)
from octaslope.slopes import (
    Slope,
    conjugate_slopes,
    grassmann,
    grassmann_from_values,
    plane_from_grassmann,
)
from octaslope.subperiods import find_subperiods

Q2 = QuadraticField((2,))


def analysis_of(slope):
    return analyze_slope(slope)


def test_ab_is_one_parameter_family(ab_slope):
    result = analysis_of(ab_slope)
    assert result.types == 4
    assert result.verdict.rank == 3
    assert result.verdict.status == ONE_PARAMETER_FAMILY
    witness = result.verdict.family
    assert witness is not None

    # The family reproduces (1, t, 1, 1, 2/t, 1): check t = sqrt2 and t = 2.
    r2 = Q2.sqrt_of(2)
    for t in (r2, Q2.rational(2)):
        g = grassmann_from_values(
            [Q2.one, t, Q2.one, Q2.one, 2 * t.inverse(), Q2.one], normalize=True
        )
        assert g.satisfies_plucker()
        for sp in result.subperiods:
            assert sp.holds_on(g)
        assert witness.contains(g)
    # ... and rejects a non-member satisfying neither conic nor relations.
    bad = grassmann_from_values(
        [Q2.one, Q2.rational(3), Q2.one, Q2.one, Q2.one, Q2.one], normalize=True
    )
    assert not witness.contains(bad)


def test_totally_rational_determined(rational_slope):
    result = analysis_of(rational_slope)
    assert len(result.subperiods) == 8
    assert result.types == 4
    assert result.verdict.rank == 5
    assert result.verdict.status == DETERMINED
    (sol,) = result.verdict.solutions
    assert sol.g == result.coords.g


def test_fig4_fewer_than_three_types(fig4_slope):
    result = analysis_of(fig4_slope)
    assert result.types == 2
    assert result.verdict.status == FEWER_THAN_THREE_TYPES


def test_rank4_determined_slope_with_conjugate_solutions():
    # Slope with subperiods G12=G23, G24=G14, G34=G13, G23+G24-2*G34=0.
    r2 = Q2.sqrt_of(2)
    coords = grassmann_from_values(
        [
            Q2.rational(2) - r2,
            Q2.one,
            r2,
            Q2.rational(2) - r2,
            r2,
            Q2.one,
        ],
        normalize=True,
    )
    slope = plane_from_grassmann(coords)
    result = analysis_of(slope)
    assert result.verdict.rank == 4
    assert result.verdict.status == DETERMINED
    sols = result.verdict.solutions
    assert len(sols) == 2
    normalized_source = result.coords
    assert any(s.g == normalized_source.g for s in sols)
    # entrywise conjugate of each other
    for a, b in zip(sols[0].g, sols[1].g):
        assert a.conjugations()[1] == b
    # Corollary check: a single quadratic field carries every solution entry.
    radicands = {s.g[0].field.radicands for s in sols}
    assert all(len(r) <= 1 for r in radicands)


def test_empty_system_higher_dimensional():
    system = SubperiodSystem(())
    verdict = determined_by_subperiods(system)
    assert verdict.status == HIGHER_DIMENSIONAL
    assert verdict.rank == 0


def test_one_parameter_family_via_zero_pencil():
    # (G23,G24,G34) = (1,2,3)s and G13 = G14 = 3*G12: quadric vanishes on the kernel.
    r2 = Q2.sqrt_of(2)
    coords = grassmann_from_values(
        [r2 / 3, r2, r2, Q2.one, Q2.rational(2), Q2.rational(3)], normalize=False
    )
    slope = plane_from_grassmann(coords)
    result = analysis_of(slope)
    assert result.verdict.rank == 4
    assert result.verdict.status == ONE_PARAMETER_FAMILY
    assert result.verdict.family.contains(grassmann(slope))


def test_solve_pencil_against_interpolation_oracle():
    w1 = (1, 0, 1, 1, 0, 1)
    w2 = (0, 1, 0, 0, 1, 0)
    pencil = solve_pencil(w1, w2)

    def direct(al, be):
        vec = [al * a + be * b for a, b in zip(w1, w2)]
        return evaluate_form_rational(PLUCKER_FORM, vec)

    # Interpolate A, B, C independently from three evaluations.
    a = direct(1, 0)
    c = direct(0, 1)
    b = direct(1, 1) - a - c
    assert (pencil.a, pencil.b, pencil.c) == (a, b, c) == (2, 0, -1)
    for alpha, beta in pencil.roots:
        value = alpha * alpha * pencil.a + alpha * beta * pencil.b + beta * beta * pencil.c
        assert value.is_zero


def test_solve_pencil_simple_cases():
    # A=1, B=0, C=-2 realized by vectors restricting the quadric accordingly:
    # construct directly from coefficients via synthetic vectors is awkward;
    # exercise the root classification through equivalent systems instead.
    pencil = solve_pencil((1, 0, 0, 0, 0, 1), (0, 1, 0, 0, 2, 0))
    # Q(a*w1 + b*w2) = a^2 - 2*b^2
    assert (pencil.a, pencil.b, pencil.c) == (1, 0, -2)
    roots = pencil.roots
    assert len(roots) == 2
    r2 = QuadraticField((2,)).sqrt_of(2)
    assert {alpha / beta for alpha, beta in roots} == {r2, -r2}

    pencil = solve_pencil((0, 1, 0, 0, 1, 0), (1, 0, 0, 0, 0, 0))
    # Q = -a^2 ... sign flip: roots should be the double rational root (0:1)? compute:
    assert pencil.a == -1 and pencil.b == 0 and pencil.c == 0
    assert len(pencil.roots) == 1  # double root at alpha = 0

    with pytest.raises(ZeroRestrictedForm):
        solve_pencil((1, 0, 0, 0, 0, 0), (0, 1, 0, 0, 0, 0))


def test_solve_pencil_projective_infinity():
    # A = 0, B != 0: roots are (1:0) and (-C:B).
    pencil = solve_pencil((0, 1, 0, 0, 0, 0), (0, 0, 0, 0, 1, 1))
    assert pencil.a == 0
    assert any(beta.is_zero for _, beta in pencil.roots)


def test_no_real_roots_reported_empty():
    # Q(a*w1+b*w2) = a^2 + b^2 has no real projective roots.
    pencil = solve_pencil((1, 0, 0, 0, 0, 1), (0, 1, 0, 0, -1, 0))
    assert pencil.discriminant < 0
    assert pencil.roots == ()


def test_verdict_conjugation_invariant(ab_slope):
    g = grassmann(ab_slope)
    verdicts = []
    for conj in conjugate_slopes(g):
        sps = find_subperiods(conj)
        system = SubperiodSystem.from_subperiods(sps, conj)
        verdicts.append(determined_by_subperiods(system))
    assert {v.status for v in verdicts} == {ONE_PARAMETER_FAMILY}
    assert {v.rank for v in verdicts} == {3}


def test_resultant_against_sylvester_oracle():
    import numpy as np

    rng = random.Random(9)
    for _ in range(60):
        t1 = {
            k: Fraction(rng.randint(-4, 4))
            for k in ((2, 0, 0), (0, 2, 0), (0, 0, 2), (1, 1, 0), (1, 0, 1), (0, 1, 1))
        }
        t2 = {
            k: Fraction(rng.randint(-4, 4))
            for k in ((2, 0, 0), (0, 2, 0), (0, 0, 2), (1, 1, 0), (1, 0, 1), (0, 1, 1))
        }
        t1 = {k: v for k, v in t1.items() if v}
        t2 = {k: v for k, v in t2.items() if v}
        if not t1 or not t2:
            continue
        res = resultant_in_var(t1, t2, 0)
        # evaluate both via numeric Sylvester determinant at a random point
        beta, gamma = Fraction(rng.randint(1, 7)), Fraction(rng.randint(1, 7))

        def coeffs_in_alpha(t):
            out = [Fraction(0)] * 3
            for (i, j, k), c in t.items():
                out[i] += c * beta**j * gamma**k
            return out

        p = coeffs_in_alpha(t1)
        q = coeffs_in_alpha(t2)
        while p and p[-1] == 0:
            p.pop()
        while q and q[-1] == 0:
            q.pop()
        if len(p) != 3 or len(q) != 3:
            continue  # oracle below assumes full degree; other branches tested elsewhere
        syl = np.array(
            [
                [float(p[2]), float(p[1]), float(p[0]), 0.0],
                [0.0, float(p[2]), float(p[1]), float(p[0])],
                [float(q[2]), float(q[1]), float(q[0]), 0.0],
                [0.0, float(q[2]), float(q[1]), float(q[0])],
            ]
        )
        expected = np.linalg.det(syl)
        got = float(poly_eval(res, (Fraction(0), beta, gamma)))
        assert abs(got - expected) < 1e-6 * max(1.0, abs(expected))


def test_conics_intersect_finitely_basics():
    circleish = {(2, 0, 0): Fraction(1), (0, 2, 0): Fraction(1), (0, 0, 2): Fraction(-1)}
    doubled = {k: 3 * v for k, v in circleish.items()}
    assert not conics_intersect_finitely(circleish, doubled)
    other = {(2, 0, 0): Fraction(1), (0, 2, 0): Fraction(-1)}
    assert conics_intersect_finitely(circleish, other)
    # common linear factor x: x*y vs x*z
    xy = {(1, 1, 0): Fraction(1)}
    xz = {(1, 0, 1): Fraction(1)}
    assert not conics_intersect_finitely(xy, xz)
