"""Coincidences: window points hit by three unit-segment projections, and
their integer quadratic equations on the Grassmann coordinates.

A coincidence pins the slope by one polynomial equation: picking on each of
three concurrent segments the point that projects onto the coincidence gives
three lattice-like points whose pairwise differences lie in the plane;
eliminating the basis coefficients through the Grassmann minors and clearing
denominators leaves an integer equation in the products of coordinates.
Combined with three independent subperiods, zero-dimensionality of the system
is decided by resultants of the two restricted conics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .fields import FieldElement, rank_fractions
from .geometry import PlaneFrame
from .quadforms import (
    PLUCKER_FORM,
    conics_intersect_finitely,
    evaluate_form,
    restrict_form,
)
from .slopes import GeometryError, GrassmannCoords, PAIR_INDEX, Slope, grassmann
from .subperiods import Subperiod

IntVec = tuple[int, int, int, int]


class DependentSubperiodsError(GeometryError):
    """The three subperiods handed to the zero-dimensionality test are dependent."""


@dataclass(frozen=True)
class LatticeSegment:
    """The open unit segment base + (0,1)*e_direction with integer base."""

    base: IntVec
    direction: int  # 1..4

    def to_json(self) -> dict:
        return {"base": list(self.base), "direction": self.direction}


@dataclass(frozen=True)
class Coincidence:
    segments: tuple[LatticeSegment, ...]
    point: tuple[FieldElement, FieldElement]

    @property
    def directions(self) -> tuple[int, ...]:
        return tuple(sorted({s.direction for s in self.segments}))

    def to_json(self) -> dict:
        return {
            "segments": [s.to_json() for s in self.segments],
            "point": [x.to_json() for x in self.point],
            "multiplicity": len(self.segments),
        }


def _cross(a, b) -> FieldElement:
    return a[0] * b[1] - a[1] * b[0]


def _segment_parameter(
    frame: PlaneFrame, seg: LatticeSegment, point, start=None
) -> FieldElement | None:
    """Exact parameter t with phi(base) + t*phi(e_d) = point, if on the open segment."""
    if start is None:
        start = frame.phi_int(seg.base)
    edge = frame.phi_e(seg.direction - 1)
    rel = (point[0] - start[0], point[1] - start[1])
    if not _cross(edge, rel).is_zero:
        return None
    comp = 0 if not edge[0].is_zero else 1
    t = rel[comp] / edge[comp]
    if t.sign() <= 0 or (t - 1).sign() >= 0:
        return None
    return t


def find_coincidences(slope: Slope, radius: int, *, frame: PlaneFrame | None = None) -> list[Coincidence]:
    """All coincidences among segments with |base|_inf <= radius meeting the window.

    Floating pairwise intersection proposes candidate points (any true triple
    point is proposed by each of its pairs); each candidate is then recomputed
    and re-verified exactly against every nearby segment, so the output has no
    missed or spurious triples.
    """
    frame = frame or PlaneFrame(slope)
    if not frame.g.is_nondegenerate():
        raise GeometryError("coincidences require a nondegenerate slope")
    win = frame.window
    lo1, hi1 = win.bbox1
    lo2, hi2 = win.bbox2
    pad = 1e-6

    edges_f = [(float(frame.w1[i]), float(frame.w2[i])) for i in range(4)]
    reach = max(math.hypot(*e) for e in edges_f)

    segments: list[LatticeSegment] = []
    starts: list[tuple[float, float]] = []
    rng = range(-radius, radius + 1)
    for z1 in rng:
        for z2 in rng:
            for z3 in rng:
                for z4 in rng:
                    base = (z1, z2, z3, z4)
                    s = (
                        z1 * edges_f[0][0]
                        + z2 * edges_f[1][0]
                        + z3 * edges_f[2][0]
                        + z4 * edges_f[3][0]
                    )
                    t = (
                        z1 * edges_f[0][1]
                        + z2 * edges_f[1][1]
                        + z3 * edges_f[2][1]
                        + z4 * edges_f[3][1]
                    )
                    if not (
                        lo1 - reach - pad <= s <= hi1 + reach + pad
                        and lo2 - reach - pad <= t <= hi2 + reach + pad
                    ):
                        continue
                    for d in (1, 2, 3, 4):
                        segments.append(LatticeSegment(base, d))
                        starts.append((s, t))

    n = len(segments)
    if n == 0:
        return []
    sx = np.array([p[0] for p in starts])
    sy = np.array([p[1] for p in starts])
    dx = np.array([edges_f[seg.direction - 1][0] for seg in segments])
    dy = np.array([edges_f[seg.direction - 1][1] for seg in segments])
    dd = dx * dx + dy * dy

    # all pairwise transversal intersections, vectorized over the second index
    candidates: dict[tuple[int, int], set[int]] = {}
    for a in range(n):
        denom = dx[a] * dy - dy[a] * dx
        with np.errstate(divide="ignore", invalid="ignore"):
            rel_x = sx - sx[a]
            rel_y = sy - sy[a]
            ta = (rel_x * dy - rel_y * dx) / denom
            tb = (rel_x * dy[a] - rel_y * dx[a]) / denom
        ok = (
            (np.abs(denom) > 1e-12)
            & (ta > -pad)
            & (ta < 1 + pad)
            & (tb > -pad)
            & (tb < 1 + pad)
        )
        ok[: a + 1] = False
        for b in np.nonzero(ok)[0]:
            px = sx[a] + ta[b] * dx[a]
            py = sy[a] + ta[b] * dy[a]
            if not (lo1 - pad <= px <= hi1 + pad and lo2 - pad <= py <= hi2 + pad):
                continue
            key = (round(px * 1e7), round(py * 1e7))
            group = candidates.setdefault(key, set())
            group.add(a)
            group.add(int(b))

    phi_cache: dict[IntVec, tuple[FieldElement, FieldElement]] = {}

    def phi(base: IntVec):
        p = phi_cache.get(base)
        if p is None:
            p = frame.phi_int(base)
            phi_cache[base] = p
        return p

    edges = [frame.phi_e(i) for i in range(4)]

    def exact_point(a: int, b: int):
        pa, pb = segments[a], segments[b]
        ea, eb = edges[pa.direction - 1], edges[pb.direction - 1]
        denom = _cross(ea, eb)
        if denom.is_zero:
            return None
        qa, qb = phi(pa.base), phi(pb.base)
        rel = (qb[0] - qa[0], qb[1] - qa[1])
        t = _cross(rel, eb) / denom
        return (qa[0] + t * ea[0], qa[1] + t * ea[1])

    def float_support(px: float, py: float) -> list[int]:
        """Indices of segments passing within 1e-6 of the point (open range)."""
        wx = px - sx
        wy = py - sy
        tt = (wx * dx + wy * dy) / dd
        off2 = (wx - tt * dx) ** 2 + (wy - tt * dy) ** 2
        near = (off2 < 1e-12) & (tt > -pad) & (tt < 1 + pad)
        return [int(i) for i in np.nonzero(near)[0]]

    found: dict[tuple, Coincidence] = {}
    for key, group in candidates.items():
        if len(group) < 3:
            continue
        remaining = sorted(group)
        guard = 0
        while len(remaining) >= 3 and guard < 16:
            guard += 1
            point = None
            for ai in range(len(remaining)):
                for bi in range(ai + 1, len(remaining)):
                    point = exact_point(remaining[ai], remaining[bi])
                    if point is not None:
                        break
                if point is not None:
                    break
            if point is None:
                break
            pkey = (point[0].canonical_terms(), point[1].canonical_terms())
            px, py = float(point[0]), float(point[1])
            nearby = float_support(px, py)
            through = [
                idx
                for idx in nearby
                if _segment_parameter(frame, segments[idx], point, phi(segments[idx].base))
                is not None
            ]
            consumed = set(through) & set(remaining)
            if not consumed:
                break
            remaining = [i for i in remaining if i not in consumed]
            if pkey in found or len(through) < 3:
                continue
            if not win.contains(point):
                continue
            segs = tuple(
                sorted((segments[i] for i in through), key=lambda s: (s.base, s.direction))
            )
            found[pkey] = Coincidence(segs, point)
    out = list(found.values())
    out.sort(key=lambda c: tuple((s.base, s.direction) for s in c.segments))
    return out


# ---------------------------------------------------------------------------
# Integer coincidence equations
# ---------------------------------------------------------------------------

_ROLE_TERMS = (
    # coefficient index, role pairs; the equation reads
    # a*H14*H23 - b*H13*H24 + c*H12*H34 + d*H24*H34 + e*H14*H34 + f*H14*H24 = 0
    (0, 1, ((1, 4), (2, 3))),
    (1, -1, ((1, 3), (2, 4))),
    (2, 1, ((1, 2), (3, 4))),
    (3, 1, ((2, 4), (3, 4))),
    (4, 1, ((1, 4), (3, 4))),
    (5, 1, ((1, 4), (2, 4))),
)


@dataclass(frozen=True)
class CoincidenceEquation:
    """Integer equation a*G14G23 - b*G13G24 + c*G12G34 + d*G24G34 + e*G14G34
    + f*G14G24 = 0 after relabeling axes so `special` plays the role of 4."""

    special: int
    coeffs: tuple[int, int, int, int, int, int]
    roles: tuple[int, int, int, int]  # roles[r-1] = original axis playing role r

    def quadric(self) -> dict[tuple[int, int], Fraction]:
        """The equation as a quadratic form on the original pair coordinates."""
        out: dict[tuple[int, int], Fraction] = {}
        for idx, sign_, pairs in _ROLE_TERMS:
            coeff = Fraction(sign_ * self.coeffs[idx])
            if not coeff:
                continue
            factors = []
            for (r, s) in pairs:
                a, b = self.roles[r - 1], self.roles[s - 1]
                if a < b:
                    factors.append((PAIR_INDEX[(a, b)], 1))
                else:
                    factors.append((PAIR_INDEX[(b, a)], -1))
            (i1, s1), (i2, s2) = factors
            key = (min(i1, i2), max(i1, i2))
            out[key] = out.get(key, Fraction(0)) + coeff * s1 * s2
        return {k: v for k, v in out.items() if v}

    def evaluate(self, g: GrassmannCoords) -> FieldElement:
        return evaluate_form(self.quadric(), g.g)

    def to_json(self) -> dict:
        return {
            "special": self.special,
            "coeffs": list(self.coeffs),
            "roles": list(self.roles),
        }


def coincidence_equation(
    slope: Slope,
    coincidence: Coincidence,
    *,
    frame: PlaneFrame | None = None,
    special: int | None = None,
) -> CoincidenceEquation:
    """Synthesize the integer equation of a coincidence via exact elimination.

    Three segments with distinct directions are chosen; the missing direction
    plays the special role.  The result annihilates the slope's coordinates
    exactly (asserted).
    """
    frame = frame or PlaneFrame(slope)
    chosen: dict[int, LatticeSegment] = {}
    for seg in coincidence.segments:
        if special is not None and seg.direction == special:
            continue
        chosen.setdefault(seg.direction, seg)
    if len(chosen) < 3:
        raise GeometryError(
            "coincidence does not offer three segments of distinct directions"
        )
    directions = sorted(chosen)[:3]
    missing = ({1, 2, 3, 4} - set(directions)).pop()
    if special is not None and special != missing:
        raise GeometryError(f"cannot make {special} special; directions are {directions}")

    roles = (*directions, missing)  # roles[r-1] = original axis of role r+... role 4 = missing
    # lattice-like points: on each chosen segment, the point over the coincidence
    points_role: list[list[FieldElement]] = []
    for d in directions:
        seg = chosen[d]
        t = _segment_parameter(frame, seg, coincidence.point)
        if t is None:
            raise GeometryError("segment does not pass through the coincidence point")
        coords = [frame.field.rational(x) for x in seg.base]
        coords[d - 1] = coords[d - 1] + t
        points_role.append([coords[roles[r] - 1] for r in range(4)])

    def integer_at(p: list[FieldElement], role: int) -> int:
        value = p[role - 1].rational_value()
        if value is None or value.denominator != 1:
            raise AssertionError("expected an integer entry in the elimination")
        return int(value)

    p1, p2, p3 = points_role
    a2, a3, a4 = integer_at(p1, 2), integer_at(p1, 3), integer_at(p1, 4)
    b1, b3, b4 = integer_at(p2, 1), integer_at(p2, 3), integer_at(p2, 4)
    c1, c2, c4 = integer_at(p3, 1), integer_at(p3, 2), integer_at(p3, 4)

    coeffs = (
        0,  # a
        a4 - b4,  # b
        a4 - c4,  # c
        b1 - c1,  # d
        c2 - a2,  # e
        a3 - b3,  # f
    )
    eq = CoincidenceEquation(missing, coeffs, roles)
    if not eq.evaluate(frame.g).is_zero:
        raise AssertionError("synthesized coincidence equation does not vanish on the slope")
    return eq


def plucker_equation() -> CoincidenceEquation:
    """The fixed quadric itself in coincidence-equation form (a=b=c=1)."""
    return CoincidenceEquation(4, (1, 1, 1, 0, 0, 0), (1, 2, 3, 4))


def zero_dimensional_with_coincidence(
    subperiods: Sequence[Subperiod], equation: CoincidenceEquation
) -> bool:
    """Whether {three subperiods} + quadric + coincidence has finitely many
    projective solutions.

    The three relations must have distinct types and be independent; their
    kernel is a projective plane on which the two quadrics restrict to ternary
    conics, and finiteness is decided by exact resultants.
    """
    if len(subperiods) != 3 or len({sp.type_ for sp in subperiods}) != 3:
        raise DependentSubperiodsError("need three subperiods of three distinct types")
    from .determination import SubperiodSystem

    system = SubperiodSystem.from_subperiods(subperiods)
    if system.rank != 3:
        raise DependentSubperiodsError("subperiods are dependent")
    kernel = system.kernel()
    t1 = restrict_form(PLUCKER_FORM, kernel)
    t2 = restrict_form(equation.quadric(), kernel)
    return conics_intersect_finitely(t1, t2)
