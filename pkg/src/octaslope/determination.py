"""Deciding whether a slope is pinned down (up to conjugacy) by its subperiods.

The subperiod relations are linear in the six Grassmann coordinates and the
coordinates also satisfy one fixed quadric, so the solution set is a quadric
section of the rational kernel of the relations.  Kernel dimension kappa
classifies everything:

  kappa = 1      a single projective point: determined.
  kappa = 2      a binary quadratic; nonzero -> at most two (conjugate) points,
                 identically zero -> the whole kernel line is a family.
  kappa = 3      a conic in P^2; nonzero -> a one-parameter family,
                 identically zero -> two-dimensional.
  kappa >= 4     the section always has dimension >= 2.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Sequence

from .fields import (
    FieldElement,
    QuadraticField,
    RATIONALS,
    fraction_str,
    kernel_fractions,
    primitive_integer_vector,
    rank_fractions,
    rref_fractions,
    squarefree_core,
)
from .quadforms import (
    PLUCKER_FORM,
    Poly,
    binary_coefficients,
    evaluate_form_rational,
    poly_is_zero,
    restrict_form,
)
from .slopes import GrassmannCoords, Slope, grassmann, grassmann_from_values
from .subperiods import Subperiod, count_types, find_subperiods

DETERMINED = "Determined"
ONE_PARAMETER_FAMILY = "OneParameterFamily"
HIGHER_DIMENSIONAL = "HigherDimensional"
FEWER_THAN_THREE_TYPES = "FewerThanThreeTypes"


class ZeroRestrictedForm(Exception):
    """The quadric restricts to the zero form on the given pencil."""


@dataclass(frozen=True)
class SubperiodSystem:
    """Subperiod linear forms on (G12,...,G34) plus the fixed quadric."""

    forms: tuple[tuple[int, int, int, int, int, int], ...]
    source: GrassmannCoords | None = None

    @classmethod
    def from_subperiods(
        cls, subperiods: Sequence[Subperiod], source: GrassmannCoords | None = None
    ) -> "SubperiodSystem":
        forms = tuple(sp.relation_vector() for sp in subperiods)
        system = cls(forms, source)
        if source is not None:
            for sp in subperiods:
                if not sp.holds_on(source):
                    raise ValueError("a linear form does not annihilate the source slope")
            if not source.satisfies_plucker():
                raise ValueError("source coordinates violate the quadratic identity")
        return system

    @property
    def rank(self) -> int:
        return rank_fractions([[Fraction(x) for x in f] for f in self.forms])

    def kernel(self) -> list[tuple[int, ...]]:
        """Echelon basis of the rational kernel, primitive integer vectors."""
        rows = [[Fraction(x) for x in f] for f in self.forms]
        basis = kernel_fractions(rows, 6)
        if not basis:
            return []
        echelon, _ = rref_fractions(basis)
        return [primitive_integer_vector(v) for v in echelon]


@dataclass(frozen=True)
class PencilResult:
    """Restriction of the quadric to a 2-dim kernel: A a^2 + B ab + C b^2."""

    a: Fraction
    b: Fraction
    c: Fraction
    roots: tuple[tuple[FieldElement, FieldElement], ...]
    field: QuadraticField

    @property
    def discriminant(self) -> Fraction:
        return self.b * self.b - 4 * self.a * self.c


def solve_pencil(
    w1: Sequence[int], w2: Sequence[int]
) -> PencilResult:
    """Exact coefficients and projective roots of the restricted quadric.

    Roots live in Q when the discriminant is a square ratio, in Q(sqrt(m)) for
    its squarefree core m otherwise, and are absent when it is negative.
    A zero restricted form is signaled for the caller to treat as a family.
    """
    if rank_fractions([[Fraction(x) for x in w1], [Fraction(x) for x in w2]]) != 2:
        raise ValueError("pencil vectors must be independent")
    qa = evaluate_form_rational(PLUCKER_FORM, [Fraction(x) for x in w1])
    qc = evaluate_form_rational(PLUCKER_FORM, [Fraction(x) for x in w2])
    both = [Fraction(x) + Fraction(y) for x, y in zip(w1, w2)]
    qb = evaluate_form_rational(PLUCKER_FORM, both) - qa - qc
    if qa == 0 and qb == 0 and qc == 0:
        raise ZeroRestrictedForm("quadric vanishes on the whole pencil")

    roots: list[tuple[FieldElement, FieldElement]] = []
    field = RATIONALS
    if qa == 0:
        roots.append((RATIONALS.one, RATIONALS.zero))  # point at infinity
        if qb != 0:
            roots.append((RATIONALS.rational(-qc), RATIONALS.rational(qb)))
    else:
        disc = qb * qb - 4 * qa * qc
        if disc == 0:
            roots.append((RATIONALS.rational(-qb), RATIONALS.rational(2 * qa)))
        elif disc > 0:
            s, m = squarefree_core(disc.numerator * disc.denominator)
            if m == 1:
                rt = Fraction(s, disc.denominator)
                roots.append((RATIONALS.rational(-qb + rt), RATIONALS.rational(2 * qa)))
                roots.append((RATIONALS.rational(-qb - rt), RATIONALS.rational(2 * qa)))
            else:
                field = QuadraticField((m,))
                rt = field.sqrt_of(m) * Fraction(s, disc.denominator)
                alpha = field.rational(-qb)
                roots.append((alpha + rt, field.rational(2 * qa)))
                roots.append((alpha - rt, field.rational(2 * qa)))
    return PencilResult(qa, qb, qc, tuple(roots), field)


@dataclass(frozen=True)
class FamilyWitness:
    """A positive-dimensional solution set: kernel basis plus the restricted quadric."""

    kernel: tuple[tuple[int, ...], ...]
    form: Poly

    def coordinates_of(self, g: GrassmannCoords) -> tuple[FieldElement, ...] | None:
        """Coordinates of g in the kernel basis, or None if g is outside the span.

        The echelon basis has distinct leading columns with zeros elsewhere in
        those columns, so coordinates read off directly.
        """
        leads = []
        for vec in self.kernel:
            lead = next(i for i, x in enumerate(vec) if x)
            leads.append(lead)
        coords = tuple(g.g[l] / self.kernel[t][l] for t, l in enumerate(leads))
        for idx in range(6):
            total = g.field.zero
            for t, vec in enumerate(self.kernel):
                total = total + coords[t] * vec[idx]
            if total != g.g[idx]:
                return None
        return coords

    def contains(self, g: GrassmannCoords) -> bool:
        coords = self.coordinates_of(g)
        if coords is None:
            return False
        total = g.field.zero
        for exps, c in self.form.items():
            term = g.field.rational(c)
            for x, e in zip(coords, exps):
                for _ in range(e):
                    term = term * x
            total = total + term
        return total.is_zero

    def to_json(self) -> dict:
        return {
            "kernel": [list(v) for v in self.kernel],
            "quadric": {
                "".join(map(str, exps)): fraction_str(c) for exps, c in sorted(self.form.items())
            },
        }


@dataclass(frozen=True)
class Verdict:
    status: str
    rank: int
    solutions: tuple[GrassmannCoords, ...] = ()
    family: FamilyWitness | None = None
    pencil: PencilResult | None = None

    def to_json(self) -> dict:
        out: dict = {"status": self.status, "rank": self.rank}
        if self.solutions:
            out["solutions"] = [s.to_json() for s in self.solutions]
        if self.family is not None:
            out["family"] = self.family.to_json()
        return out


def determined_by_subperiods(system: SubperiodSystem) -> Verdict:
    """Classify the quadric section of the subperiod kernel; see module docstring."""
    kernel = system.kernel()
    rank = 6 - len(kernel)
    kappa = len(kernel)
    if kappa == 0:
        raise ValueError("subperiod forms have full rank; no projective solutions exist")
    if kappa >= 4:
        return Verdict(HIGHER_DIMENSIONAL, rank)
    if kappa == 3:
        ternary = restrict_form(PLUCKER_FORM, kernel)
        if poly_is_zero(ternary):
            return Verdict(HIGHER_DIMENSIONAL, rank)
        return Verdict(ONE_PARAMETER_FAMILY, rank, family=FamilyWitness(tuple(kernel), ternary))
    if kappa == 2:
        try:
            pencil = solve_pencil(kernel[0], kernel[1])
        except ZeroRestrictedForm:
            return Verdict(
                ONE_PARAMETER_FAMILY, rank, family=FamilyWitness(tuple(kernel), {})
            )
        solutions = []
        for alpha, beta in pencil.roots:
            vec = tuple(
                alpha * kernel[0][i] + beta * kernel[1][i] for i in range(6)
            )
            sol = grassmann_from_values(vec, normalize=True)
            _check_solution(system, sol)
            solutions.append(sol)
        return Verdict(DETERMINED, rank, solutions=tuple(solutions), pencil=pencil)
    # kappa == 1: the kernel line itself, when it lies on the quadric.
    vec = [RATIONALS.rational(x) for x in kernel[0]]
    sol = grassmann_from_values(vec, normalize=True)
    if not sol.satisfies_plucker():
        raise ValueError("rank-5 system whose kernel line violates the quadratic identity")
    _check_solution(system, sol)
    return Verdict(DETERMINED, rank, solutions=(sol,))


def _check_solution(system: SubperiodSystem, sol: GrassmannCoords) -> None:
    if not sol.satisfies_plucker():
        raise AssertionError("solution violates the quadratic identity")
    for form in system.forms:
        total = sol.field.zero
        for c, x in zip(form, sol.g):
            total = total + x * c
        if not total.is_zero:
            raise AssertionError("solution violates a subperiod form")


@dataclass(frozen=True)
class SlopeAnalysis:
    slope: Slope
    coords: GrassmannCoords
    subperiods: tuple[Subperiod, ...]
    types: int
    system: SubperiodSystem
    verdict: Verdict

    def to_json(self) -> dict:
        return {
            "format": 1,
            "grassmann": self.coords.to_json(),
            "subperiods": [sp.to_json() for sp in self.subperiods],
            "types": self.types,
            "rank": self.verdict.rank,
            "verdict": self.verdict.to_json(),
            "field": {"radicands": list(self.slope.field.radicands)},
        }


def analyze_slope(slope: Slope) -> SlopeAnalysis:
    """Full pipeline: coordinates, subperiods, type count, determination verdict.

    Fewer than three subperiod types short-circuits the verdict: such planes
    never admit weak local rules, whatever the kernel geometry says.
    """
    coords = grassmann(slope)
    subperiods = tuple(find_subperiods(coords))
    types = count_types(subperiods)
    system = SubperiodSystem.from_subperiods(subperiods, coords)
    if types < 3:
        rank = system.rank if subperiods else 0
        verdict = Verdict(FEWER_THAN_THREE_TYPES, rank)
    else:
        verdict = determined_by_subperiods(system)
    return SlopeAnalysis(slope, coords, subperiods, types, system, verdict)
