"""Projections, the octagonal window, and exact cut-and-project selection.

The frame fixes exact orthogonal bases of the slope plane E and of E-perp;
a lattice point is addressed through the two dot products phi(z) = (<z,w1>,
<z,w2>), which determine its E-perp position.  The window is the zonotope
spanned by the four phi(e_i), represented as four strips (pairs of half-plane
constraints), one per direction: that makes the flip-set identities of the
shift analysis hold constraint-by-constraint.

Boundary convention: a boundary point belongs to the window iff the outward
normal of its tight constraint is lexicographically negative.  Selection runs
a floating prefilter with conservative margins; only near-boundary candidates
reach the exact field predicates, so the decision is always the exact one.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from typing import Iterable, Sequence

import numpy as np

from .fields import FieldElement, QuadraticField, to_fraction
from .slopes import (
    DegenerateSlopeError,
    GeometryError,
    Slope,
    Vec4,
    dot,
    grassmann,
)

IntVec = tuple[int, int, int, int]


class BoundaryHitError(GeometryError):
    """A lattice projection landed exactly on the window boundary."""

    def __init__(self, point: IntVec, constraint: int, suggestion: tuple[Fraction, ...]):
        self.point = point
        self.constraint = constraint
        self.suggestion = suggestion
        nice = ", ".join(str(x) for x in suggestion)
        super().__init__(
            f"lattice point {point} lies exactly on window constraint {constraint}; "
            f"try offset ({nice})"
        )


def suggest_offset(offset: Sequence[Fraction], seed: int = 0) -> tuple[Fraction, ...]:
    """A deterministic small rational perturbation of the offset."""
    rng = random.Random(seed)
    return tuple(
        to_fraction(x) + Fraction(rng.randrange(1, 64) * 2 + 1, 1 << 13) for x in offset
    )


@dataclass(frozen=True)
class HalfPlane:
    """Constraint cx*x + cy*y <= bound; boundary included iff closed."""

    cx: FieldElement
    cy: FieldElement
    bound: FieldElement
    closed: bool

    def value(self, p: tuple[FieldElement, FieldElement]) -> FieldElement:
        return self.cx * p[0] + self.cy * p[1] - self.bound


def _lex_negative(cx: FieldElement, cy: FieldElement) -> bool:
    s = cx.sign()
    if s != 0:
        return s < 0
    return cy.sign() < 0


class Window:
    """The half-open octagonal window of a nondegenerate slope, in phi coordinates."""

    def __init__(self, frame: "PlaneFrame"):
        field = frame.field
        edges = [frame.phi_e(i) for i in range(4)]  # phi(e_1..e_4)
        constraints: list[HalfPlane] = []
        for i in range(4):
            sx, sy = edges[i]
            # functional a(p) = sx*p2 - sy*p1, constant along phi(e_i)
            cx, cy = -sy, sx
            lo = field.zero
            hi = field.zero
            for j in range(4):
                if j == i:
                    continue
                val = cx * edges[j][0] + cy * edges[j][1]
                s = val.sign()
                if s > 0:
                    hi = hi + val
                elif s < 0:
                    lo = lo + val
            constraints.append(HalfPlane(cx, cy, hi, _lex_negative(cx, cy)))
            constraints.append(HalfPlane(-cx, -cy, -lo, _lex_negative(-cx, -cy)))
        self.constraints = tuple(constraints)
        self.frame = frame
        self.vertices = self._hull(edges, field)
        if len(self.vertices) != 8:
            raise DegenerateSlopeError(
                f"window has {len(self.vertices)} vertices; expected an octagon"
            )
        half = Fraction(1, 2)
        self.center = (
            sum((e[0] for e in edges), field.zero) * half,
            sum((e[1] for e in edges), field.zero) * half,
        )
        # float mirrors for the prefilter
        self.cxf = np.array([float(c.cx) for c in self.constraints])
        self.cyf = np.array([float(c.cy) for c in self.constraints])
        self.bf = np.array([float(c.bound) for c in self.constraints])
        self.bbox1 = (
            float(sum(min(0.0, float(e[0])) for e in edges)),
            float(sum(max(0.0, float(e[0])) for e in edges)),
        )
        self.bbox2 = (
            float(sum(min(0.0, float(e[1])) for e in edges)),
            float(sum(max(0.0, float(e[1])) for e in edges)),
        )
        self.perp_rad2_f = max(
            float(p[0]) ** 2 / float(frame.h1) + float(p[1]) ** 2 / float(frame.h2)
            for p in self.vertices
        )

    @staticmethod
    def _hull(edges, field) -> tuple[tuple[FieldElement, FieldElement], ...]:
        corners = []
        for mask in range(16):
            x = field.zero
            y = field.zero
            for i in range(4):
                if mask >> i & 1:
                    x = x + edges[i][0]
                    y = y + edges[i][1]
            corners.append((x, y))
        uniq: list[tuple[FieldElement, FieldElement]] = []
        for p in corners:
            if not any(p[0] == q[0] and p[1] == q[1] for q in uniq):
                uniq.append(p)

        def cmp(p, q):
            s = (p[0] - q[0]).sign()
            if s:
                return s
            return (p[1] - q[1]).sign()

        pts = sorted(uniq, key=cmp_to_key(cmp))

        def orient(o, a, b) -> int:
            return ((a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])).sign()

        def build(seq):
            out = []
            for p in seq:
                while len(out) >= 2 and orient(out[-2], out[-1], p) <= 0:
                    out.pop()
                out.append(p)
            return out

        lower = build(pts)
        upper = build(reversed(pts))
        return tuple(lower[:-1] + upper[:-1])

    def classify(self, p: tuple[FieldElement, FieldElement]) -> tuple[bool, list[int]]:
        """(membership under the half-open rule, tight constraints when on the boundary).

        tight is nonempty only for points of the closed octagon boundary; the
        half-open rule then decides membership via the closed flags.
        """
        tight: list[int] = []
        inside = True
        for idx, c in enumerate(self.constraints):
            s = c.value(p).sign()
            if s > 0:
                return False, []
            if s == 0:
                tight.append(idx)
                if not c.closed:
                    inside = False
        return inside, tight

    def contains(self, p: tuple[FieldElement, FieldElement]) -> bool:
        return self.classify(p)[0]

    def strip_contains(self, i: int, p: tuple[FieldElement, FieldElement]) -> bool:
        """Membership in the tube window + R*phi(e_i): the two direction-i constraints."""
        for c in self.constraints[2 * i : 2 * i + 2]:
            s = c.value(p).sign()
            if s > 0 or (s == 0 and not c.closed):
                return False
        return True


class PlaneFrame:
    """Exact orthogonal frames for a nondegenerate slope and its perpendicular."""

    def __init__(self, slope: Slope):
        self.slope = slope
        self.field = slope.field
        self.g = grassmann(slope)
        if not self.g.is_nondegenerate():
            raise DegenerateSlopeError("frame construction requires a nondegenerate slope")
        g = self.g
        zero = self.field.zero
        w1 = (g[(2, 3)], -g[(1, 3)], g[(1, 2)], zero)
        w2_raw = (g[(2, 4)], -g[(1, 4)], zero, g[(1, 2)])
        c = dot(w1, w2_raw) / dot(w1, w1)
        w2 = tuple(b - c * a for a, b in zip(w1, w2_raw))
        self.w1: Vec4 = w1
        self.w2: Vec4 = w2
        u, v = slope.u, slope.v
        self.b1: Vec4 = u
        cb = dot(u, v) / dot(u, u)
        self.b2: Vec4 = tuple(y - cb * x for x, y in zip(u, v))
        self.h1 = dot(w1, w1)
        self.h2 = dot(w2, w2)
        self.g1 = dot(self.b1, self.b1)
        self.g2 = dot(self.b2, self.b2)
        for w in (w1, w2):
            if not (dot(w, u).is_zero and dot(w, v).is_zero):
                raise AssertionError("perpendicular frame is not orthogonal to the slope")
        if not dot(w1, w2).is_zero:
            raise AssertionError("perpendicular frame is not orthogonal")

        self.w1f = np.array([float(x) for x in w1])
        self.w2f = np.array([float(x) for x in w2])
        self.b1f = np.array([float(x) for x in self.b1])
        self.b2f = np.array([float(x) for x in self.b2])
        self.g1f, self.g2f = float(self.g1), float(self.g2)
        self.h1f, self.h2f = float(self.h1), float(self.h2)
        self.sq_g1f, self.sq_g2f = math.sqrt(self.g1f), math.sqrt(self.g2f)
        self.window = Window(self)
        self.phi_offset = self.phi_fractions(slope.offset)
        self.phi_offset_f = (float(self.phi_offset[0]), float(self.phi_offset[1]))

    # -- exact projections ---------------------------------------------------

    def phi_e(self, i: int) -> tuple[FieldElement, FieldElement]:
        return (self.w1[i], self.w2[i])

    def phi_int(self, z: Sequence[int]) -> tuple[FieldElement, FieldElement]:
        s = self.w1[0] * z[0]
        t = self.w2[0] * z[0]
        for i in (1, 2, 3):
            if z[i]:
                s = s + self.w1[i] * z[i]
                t = t + self.w2[i] * z[i]
        return s, t

    def phi_fractions(self, x: Sequence[Fraction]) -> tuple[FieldElement, FieldElement]:
        s = self.field.zero
        t = self.field.zero
        for i in range(4):
            q = to_fraction(x[i])
            if q:
                s = s + self.w1[i] * q
                t = t + self.w2[i] * q
        return s, t

    def phi_field(self, x: Sequence[FieldElement]) -> tuple[FieldElement, FieldElement]:
        return dot(self.w1, x), dot(self.w2, x)

    def ecoords_int(self, z: Sequence[int]) -> tuple[FieldElement, FieldElement]:
        a = self.b1[0] * z[0]
        b = self.b2[0] * z[0]
        for i in (1, 2, 3):
            if z[i]:
                a = a + self.b1[i] * z[i]
                b = b + self.b2[i] * z[i]
        return a / self.g1, b / self.g2

    def ecoords_field(self, x: Sequence[FieldElement]) -> tuple[FieldElement, FieldElement]:
        return dot(self.b1, x) / self.g1, dot(self.b2, x) / self.g2

    def e_inner(self, p, q) -> FieldElement:
        return p[0] * q[0] * self.g1 + p[1] * q[1] * self.g2

    def e_dist2(self, p, q) -> FieldElement:
        d0, d1 = p[0] - q[0], p[1] - q[1]
        return d0 * d0 * self.g1 + d1 * d1 * self.g2

    def pi_norm2_int(self, z: Sequence[int]) -> FieldElement:
        s, t = self.phi_int(z)
        zz = sum(c * c for c in z)
        return self.field.rational(zz) - (s * s / self.h1) - (t * t / self.h2)

    # -- float projections (rendering, prefilters, routing) -------------------

    def xy(self, z: Sequence[int]) -> tuple[float, float]:
        c1 = float(np.dot(self.b1f, z)) / self.g1f
        c2 = float(np.dot(self.b2f, z)) / self.g2f
        return c1 * self.sq_g1f, c2 * self.sq_g2f

    def xy_of_ecoords(self, p) -> tuple[float, float]:
        return float(p[0]) * self.sq_g1f, float(p[1]) * self.sq_g2f

    # -- membership -----------------------------------------------------------

    def tube_point(self, z: Sequence[int], shift=None) -> tuple[FieldElement, FieldElement]:
        """phi(z - offset - shift), the exact window test point for z."""
        s, t = self.phi_int(z)
        s = s - self.phi_offset[0]
        t = t - self.phi_offset[1]
        if shift is not None:
            ps, pt = shift
            s = s - ps
            t = t - pt
        return s, t

    def in_tube(self, z: Sequence[int], shift=None) -> bool:
        return self.window.contains(self.tube_point(z, shift))

    def phi_shift(self, shift: Sequence) -> tuple[FieldElement, FieldElement]:
        """phi of a shift vector with rational or field entries."""
        entries = []
        for x in shift:
            if isinstance(x, FieldElement):
                entries.append(x.promote(self.field) if x.field != self.field else x)
            else:
                entries.append(self.field.rational(to_fraction(x)))
        return self.phi_field(tuple(entries))


# ---------------------------------------------------------------------------
# Lattice point selection
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Region:
    """Disk |pi(z)| <= radius, or a rectangle in the orthonormal E chart."""

    kind: str  # "disk" | "rect"
    radius: Fraction = Fraction(0)
    width: Fraction = Fraction(0)
    height: Fraction = Fraction(0)

    @classmethod
    def disk(cls, radius) -> "Region":
        return cls("disk", radius=to_fraction(radius))

    @classmethod
    def rect(cls, width, height) -> "Region":
        return cls("rect", width=to_fraction(width), height=to_fraction(height))

    @property
    def reach(self) -> float:
        if self.kind == "disk":
            return float(self.radius)
        return math.hypot(float(self.width), float(self.height)) / 2


def select_vertices(
    frame: PlaneFrame,
    region: Region,
    *,
    shift: tuple[FieldElement, FieldElement] | None = None,
    on_boundary: str = "error",
    seed: int = 0,
) -> list[IntVec]:
    """All z in Z^4 with phi(z - offset - shift) in the half-open window and
    pi(z) in the region, in lexicographic order.

    A float pass with rigorous margins decides the bulk; candidates within a
    margin of any boundary are re-decided exactly.  With on_boundary="error",
    an exactly tight window constraint raises BoundaryHitError (the offset is
    not generic); with "resolve", the half-open rule settles it.
    """
    if on_boundary not in ("error", "resolve"):
        raise ValueError("on_boundary must be 'error' or 'resolve'")
    win = frame.window
    off1 = frame.phi_offset[0] + (shift[0] if shift else frame.field.zero)
    off2 = frame.phi_offset[1] + (shift[1] if shift else frame.field.zero)
    off1f, off2f = float(off1), float(off2)

    reach = region.reach
    off_perp = math.sqrt(off1f**2 / frame.h1f + off2f**2 / frame.h2f)
    perp_reach = math.sqrt(win.perp_rad2_f) + off_perp + 0.1
    big = int(math.floor(math.sqrt(reach * reach + perp_reach * perp_reach))) + 2

    coord_scale = (np.abs(frame.w1f).sum() + np.abs(frame.w2f).sum()) * (big + 1) + abs(
        off1f
    ) + abs(off2f)
    wmargin = 1e-9 * (1.0 + coord_scale)
    lo1 = win.bbox1[0] + off1f - wmargin
    hi1 = win.bbox1[1] + off1f + wmargin
    lo2 = win.bbox2[0] + off2f - wmargin
    hi2 = win.bbox2[1] + off2f + wmargin

    if region.kind == "disk":
        r2f = float(region.radius) ** 2
    else:
        rxf = (float(region.width) / 2) ** 2
        ryf = (float(region.height) / 2) ** 2
    rmargin = 1e-9 * (1.0 + reach * reach + 4 * big)

    w1f, w2f = frame.w1f, frame.w2f
    assert w1f[3] == 0.0
    inv_w24 = 1.0 / w2f[3]
    axis = np.arange(-big, big + 1)
    z2g, z3g = np.meshgrid(axis, axis, indexing="ij")
    s_23 = z2g * w1f[1] + z3g * w1f[2]
    t_23 = z2g * w2f[1] + z3g * w2f[2]

    accepted: list[IntVec] = []
    exact_cache: dict[IntVec, bool] = {}

    for z1 in range(-big, big + 1):
        s_vals = s_23 + z1 * w1f[0]
        mask = (s_vals >= lo1) & (s_vals <= hi1)
        if not mask.any():
            continue
        i2, i3 = np.nonzero(mask)
        t_base = t_23[i2, i3] + z1 * w2f[0]
        a = (lo2 - t_base) * inv_w24
        b = (hi2 - t_base) * inv_w24
        z4lo = np.ceil(np.minimum(a, b) - 1e-12).astype(int)
        z4hi = np.floor(np.maximum(a, b) + 1e-12).astype(int)
        z4lo = np.maximum(z4lo, -big)
        z4hi = np.minimum(z4hi, big)
        counts = z4hi - z4lo + 1
        valid = counts > 0
        if not valid.any():
            continue
        i2, i3, t_base = i2[valid], i3[valid], t_base[valid]
        z4lo, z4hi = z4lo[valid], z4hi[valid]
        layers = int((z4hi - z4lo).max()) + 1
        for k in range(layers):
            z4 = z4lo + k
            sel = z4 <= z4hi
            if not sel.any():
                continue
            z2c = axis[i2[sel]]
            z3c = axis[i3[sel]]
            z4c = z4[sel]
            z1c = np.full_like(z2c, z1)
            sc = z1c * w1f[0] + z2c * w1f[1] + z3c * w1f[2]
            tc = t_base[sel] + z4c * w2f[3]
            p1 = sc - off1f
            p2 = tc - off2f
            slack = win.bf[None, :] - (
                p1[:, None] * win.cxf[None, :] + p2[:, None] * win.cyf[None, :]
            )
            min_slack = slack.min(axis=1)
            c1 = (
                z1c * frame.b1f[0] + z2c * frame.b1f[1] + z3c * frame.b1f[2] + z4c * frame.b1f[3]
            ) / frame.g1f
            c2 = (
                z1c * frame.b2f[0] + z2c * frame.b2f[1] + z3c * frame.b2f[2] + z4c * frame.b2f[3]
            ) / frame.g2f
            if region.kind == "disk":
                d2 = c1 * c1 * frame.g1f + c2 * c2 * frame.g2f
                reg_in = d2 < r2f - rmargin
                reg_out = d2 > r2f + rmargin
            else:
                dx = c1 * c1 * frame.g1f
                dy = c2 * c2 * frame.g2f
                reg_in = (dx < rxf - rmargin) & (dy < ryf - rmargin)
                reg_out = (dx > rxf + rmargin) | (dy > ryf + rmargin)
            sure_in = (min_slack > wmargin) & reg_in
            sure_out = (min_slack < -wmargin) | reg_out
            border = ~sure_in & ~sure_out
            for idx in np.nonzero(sure_in)[0]:
                accepted.append((int(z1c[idx]), int(z2c[idx]), int(z3c[idx]), int(z4c[idx])))
            for idx in np.nonzero(border)[0]:
                z = (int(z1c[idx]), int(z2c[idx]), int(z3c[idx]), int(z4c[idx]))
                if z not in exact_cache:
                    exact_cache[z] = _exact_accept(
                        frame, z, (off1, off2), region, on_boundary, seed
                    )
                if exact_cache[z]:
                    accepted.append(z)
    accepted.sort()
    return accepted


def _exact_accept(
    frame: PlaneFrame,
    z: IntVec,
    off: tuple[FieldElement, FieldElement],
    region: Region,
    on_boundary: str,
    seed: int,
) -> bool:
    s, t = frame.phi_int(z)
    p = (s - off[0], t - off[1])
    inside, tight = frame.window.classify(p)
    if tight and on_boundary == "error":
        raise BoundaryHitError(z, tight[0], suggest_offset(frame.slope.offset, seed))
    if not inside:
        return False
    zz = sum(c * c for c in z)
    perp2 = s * s / frame.h1 + t * t / frame.h2
    pi2 = frame.field.rational(zz) - perp2
    if region.kind == "disk":
        bound = frame.field.rational(region.radius * region.radius)
        return (bound - pi2).sign() >= 0
    c1, c2 = frame.ecoords_int(z)
    dx = c1 * c1 * frame.g1
    dy = c2 * c2 * frame.g2
    bx = frame.field.rational(Fraction(region.width, 2) ** 2)
    by = frame.field.rational(Fraction(region.height, 2) ** 2)
    return (bx - dx).sign() >= 0 and (by - dy).sign() >= 0


def brute_force_vertices(
    frame: PlaneFrame,
    region: Region,
    box: int,
    *,
    shift: tuple[FieldElement, FieldElement] | None = None,
) -> list[IntVec]:
    """Fully exact reference selection over an integer box (test oracle)."""
    off1 = frame.phi_offset[0] + (shift[0] if shift else frame.field.zero)
    off2 = frame.phi_offset[1] + (shift[1] if shift else frame.field.zero)
    out = []
    rng = range(-box, box + 1)
    for z1 in rng:
        for z2 in rng:
            for z3 in rng:
                for z4 in rng:
                    z = (z1, z2, z3, z4)
                    if _exact_accept(frame, z, (off1, off2), region, "resolve", 0):
                        out.append(z)
    return out
