"""Randomized searches used as oracles: determined slopes and structured samples.

Blind sampling of plane bases essentially never lands on a slope with a rank-4
subperiod system, so the determined-slope search samples candidate relation
sets with small integer coefficients, intersects them with the quadric exactly,
and keeps the quadratic-irrational intersection points.  Every hit is verified
end to end through the ordinary detection pipeline before being returned.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .determination import (
    DETERMINED,
    SlopeAnalysis,
    SubperiodSystem,
    ZeroRestrictedForm,
    analyze_slope,
    solve_pencil,
)
from .fields import QuadraticField
from .slopes import (
    GrassmannCoords,
    Slope,
    grassmann,
    grassmann_from_values,
    is_irrational,
    plane_from_grassmann,
)
from .subperiods import Subperiod, find_subperiods, pairs_without


class SearchExhausted(RuntimeError):
    pass


def _random_relation(rng: random.Random, type_: int, span: int = 3) -> Subperiod:
    while True:
        coeffs = tuple(rng.randint(-span, span) for _ in range(3))
        if any(coeffs):
            return Subperiod(type_, pairs_without(type_), coeffs)


@dataclass(frozen=True)
class DeterminedSearchResult:
    slope: Slope
    analysis: SlopeAnalysis
    attempts: int


def search_determined_slope(seed: int = 0, max_attempts: int = 2000) -> DeterminedSearchResult:
    """Find an irrational slope whose subperiod system has rank 4 and a
    nondegenerate restricted quadric, so that the verdict is Determined with
    exactly two conjugate quadratic solutions."""
    rng = random.Random(seed)
    for attempt in range(1, max_attempts + 1):
        relations = [_random_relation(rng, k) for k in (1, 2, 3, 4)]
        system = SubperiodSystem.from_subperiods(relations)
        if system.rank != 4:
            continue
        kernel = system.kernel()
        try:
            pencil = solve_pencil(kernel[0], kernel[1])
        except ZeroRestrictedForm:
            continue
        if not pencil.roots or pencil.field.degree != 2:
            continue  # want genuinely quadratic intersection points
        alpha, beta = pencil.roots[0]
        vec = tuple(alpha * kernel[0][i] + beta * kernel[1][i] for i in range(6))
        coords = grassmann_from_values(vec, normalize=True)
        if not coords.is_nondegenerate():
            continue
        slope = plane_from_grassmann(coords)
        if not is_irrational(slope):
            continue
        analysis = analyze_slope(slope)
        if analysis.verdict.status != DETERMINED:
            continue
        if len(analysis.verdict.solutions) != 2:
            continue
        return DeterminedSearchResult(slope, analysis, attempt)
    raise SearchExhausted(f"no determined slope found in {max_attempts} attempts")


def sample_quadratic_slope(
    rng: random.Random, radicand: int | None = None, span: int = 3
) -> Slope:
    """A random nondegenerate irrational slope over a single quadratic field.

    Grassmann triples of such a slope live in a 2-dimensional Q-space, so all
    four subperiod types are automatically present.
    """
    fields = [QuadraticField((d,)) for d in (2, 3, 5, 7)]
    while True:
        field = QuadraticField((radicand,)) if radicand else rng.choice(fields)
        entries = [
            field.element(
                [Fraction(rng.randint(-span, span), rng.randint(1, 2)) for _ in range(2)]
            )
            for _ in range(8)
        ]
        try:
            slope = Slope(field, tuple(entries[:4]), tuple(entries[4:]))
        except ValueError:
            continue
        coords = grassmann(slope)
        if not coords.is_nondegenerate():
            continue
        if not is_irrational(slope):
            continue
        return slope


def sample_two_two_rational(rng: random.Random, span: int = 5) -> Slope:
    """A slope with two subperiods each of two prescribed types.

    Built from a fully rational Grassmann vector: the triples without the two
    chosen indexes are forced proportional to rational triples, and the
    quadric pins the remaining coordinate.
    """
    while True:
        g13, g14, g23, g24, g34 = (
            Fraction(rng.randint(1, span)) * rng.choice((1, -1)) for _ in range(5)
        )
        g12 = (g13 * g24 - g14 * g23) / g34
        if g12 == 0:
            continue
        from .fields import RATIONALS

        coords = grassmann_from_values(
            [RATIONALS.rational(x) for x in (g12, g13, g14, g23, g24, g34)],
            normalize=False,
        )
        return plane_from_grassmann(coords)
