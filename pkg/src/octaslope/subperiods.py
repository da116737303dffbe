"""Detection and lifting of subperiods: integer relations on Grassmann triples.

A type-k subperiod is a rational linear relation on the three Grassmann
coordinates carrying no index k.  Detection is pure linear algebra over Q on
the rational components of the coordinates; no numeric integer-relation
heuristics enter the trusted path.  Relations are stored with explicit
pair labels because sign and ordering conventions vary in the literature.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .fields import FieldElement, rational_kernel
from .slopes import (
    DegenerateSlopeError,
    GrassmannCoords,
    PAIR_INDEX,
    PAIRS,
    Slope,
    Vec4,
    grassmann,
)


def pairs_without(k: int) -> tuple[tuple[int, int], ...]:
    return tuple(p for p in PAIRS if k not in p)


@dataclass(frozen=True)
class Subperiod:
    """An integer relation sum(coeffs[t] * G[pairs[t]]) = 0 with no index `type_`."""

    type_: int
    pairs: tuple[tuple[int, int], tuple[int, int], tuple[int, int]]
    coeffs: tuple[int, int, int]

    def __post_init__(self) -> None:
        if self.type_ not in (1, 2, 3, 4):
            raise ValueError("subperiod type must be 1..4")
        if self.pairs != pairs_without(self.type_):
            raise ValueError("pairs must be the lexicographic pairs without the type index")

    def evaluate(self, g: GrassmannCoords) -> FieldElement:
        total = g[self.pairs[0]] * self.coeffs[0]
        for p, c in zip(self.pairs[1:], self.coeffs[1:]):
            total = total + g[p] * c
        return total

    def holds_on(self, g: GrassmannCoords) -> bool:
        return self.evaluate(g).is_zero

    def relation_vector(self) -> tuple[int, int, int, int, int, int]:
        """The relation as an integer 6-vector on (G12, G13, G14, G23, G24, G34)."""
        vec = [0] * 6
        for p, c in zip(self.pairs, self.coeffs):
            vec[PAIR_INDEX[p]] = c
        return tuple(vec)

    def direction_entries(self) -> tuple[tuple[int, int, int], tuple[int, ...]]:
        """Integer entries of the lifted direction and their positions.

        For the relation c1*G_A + c2*G_B + c3*G_C = 0 on the sorted pairs
        without k, the lifted line has entries (c3, -c2, c1) at the three
        positions != k (sorted), matching the triple-minor identity.
        """
        positions = tuple(i for i in (1, 2, 3, 4) if i != self.type_)
        c1, c2, c3 = self.coeffs
        return (c3, -c2, c1), positions

    def to_json(self) -> dict:
        return {
            "type": self.type_,
            "pairs": [f"{i}{j}" for (i, j) in self.pairs],
            "coeffs": list(self.coeffs),
        }


def find_subperiods(g: GrassmannCoords) -> list[Subperiod]:
    """All subperiods of a nondegenerate slope, canonically normalized.

    Per type the rational kernel of the 1x3 coordinate matrix gives 0, 1 or 2
    independent relations, reported as a reduced echelon basis with primitive
    integer coefficients.
    """
    if not g.is_nondegenerate():
        raise DegenerateSlopeError("subperiod detection requires a nondegenerate slope")
    found: list[Subperiod] = []
    for k in (1, 2, 3, 4):
        pairs = pairs_without(k)
        basis = rational_kernel([[g[p] for p in pairs]], 3)
        for coeffs in basis:
            found.append(Subperiod(k, pairs, coeffs))
    return found


def count_types(subperiods: Sequence[Subperiod]) -> int:
    return len({sp.type_ for sp in subperiods})


def lift_subperiod(slope: Slope, sp: Subperiod) -> Vec4:
    """The direction in span(u, v) with the subperiod's integer entries.

    Solves w = lam*u + mu*v from two of the three prescribed entries (any pair
    with nonvanishing minor works for nondegenerate slopes) and checks the
    third exactly; failure means sp is not a subperiod of this slope.
    """
    entries, positions = sp.direction_entries()
    g = grassmann(slope, normalize=False)
    field = slope.field
    pivot = None
    for a in range(3):
        for b in range(a + 1, 3):
            pa, pb = positions[a], positions[b]
            det = g[(pa, pb)] if pa < pb else -g[(pb, pa)]
            if not det.is_zero:
                pivot = (a, b, det)
                break
        if pivot:
            break
    if pivot is None:
        raise DegenerateSlopeError("no invertible entry pair; slope too degenerate to lift")
    a, b, det = pivot
    pa, pb = positions[a], positions[b]
    wa = field.rational(entries[a])
    wb = field.rational(entries[b])
    ua, ub = slope.u[pa - 1], slope.u[pb - 1]
    va, vb = slope.v[pa - 1], slope.v[pb - 1]
    lam = (wa * vb - wb * va) / det
    mu = (ua * wb - ub * wa) / det
    lift = tuple(lam * x + mu * y for x, y in zip(slope.u, slope.v))
    for pos, want in zip(positions, entries):
        if lift[pos - 1] != field.rational(want):
            raise ValueError(f"relation is not a subperiod of this slope (type {sp.type_})")
    return lift
