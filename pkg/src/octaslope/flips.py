"""Phason-flip sets of a shifted slope, their line/lattice structure, and the
staircase construction.

E(s) collects the lattice points entering the shifted tube but not the
original one.  Writing the window as the intersection of four direction
strips makes the classification sets E_i = {selected by the shifted window,
outside strip i} satisfy union(E_i) = E(s) constraint-by-constraint, exactly.
Their geometry (sparse points, lines directed by subperiod lifts, or a
lattice) is verified with exact squared-distance predicates.

The staircase shifts the plane band by band: each step edge is a polyline
routed between two consecutive flip lines, keeping a clearance from every
flip point so that local patterns cannot witness the seam.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .fields import FieldElement, to_fraction
from .geometry import IntVec, PlaneFrame, Region, select_vertices
from .slopes import GeometryError, Slope, TRIPLES, PAIR_INDEX, grassmann
from .subperiods import Subperiod, find_subperiods, lift_subperiod
from .tiling import Face, TilingPatch, faces_from_vertices


class ShiftTooLargeError(GeometryError):
    """The shift is too large for the small-shift flip structure to hold."""


class CorridorError(GeometryError):
    """No admissible step-edge corridor was found at this radius."""


EPoint = tuple[FieldElement, FieldElement]


def _shift_vector(frame: PlaneFrame, shift: Sequence) -> tuple[FieldElement, ...]:
    out = []
    for x in shift:
        if isinstance(x, FieldElement):
            out.append(x.promote(frame.field) if x.field != frame.field else x)
        else:
            out.append(frame.field.rational(to_fraction(x)))
    if len(out) != 4:
        raise ValueError("shift must be a 4-vector")
    return tuple(out)


def _parallel_axis(shift: Sequence[FieldElement]) -> int | None:
    nonzero = [i for i, x in enumerate(shift) if not x.is_zero]
    return nonzero[0] + 1 if len(nonzero) == 1 else None


@dataclass(frozen=True)
class ShiftSet:
    """E(s) within a disk, classified into the four strip-violation sets."""

    shift: tuple[FieldElement, ...]
    radius: Fraction
    classes: dict[int, tuple[IntVec, ...]]
    points: tuple[IntVec, ...]

    def to_json(self) -> dict:
        return {
            "shift": [x.to_json() for x in self.shift],
            "counts": {str(i): len(self.classes[i]) for i in (1, 2, 3, 4)},
            "classes": {str(i): [list(z) for z in self.classes[i]] for i in (1, 2, 3, 4)},
        }


def shifted_points(
    slope_or_frame,
    shift: Sequence,
    radius,
    *,
    frame: PlaneFrame | None = None,
    base_shift: EPoint | None = None,
    validate_r=None,
) -> ShiftSet:
    """Enumerate and classify E(s) = (tube of E+s) minus (tube of E) exactly.

    base_shift moves the reference plane (used for staircase steps); with
    validate_r set, close pairs in each class must align along a subperiod
    direction, otherwise the shift is rejected as too large.
    """
    if isinstance(slope_or_frame, PlaneFrame):
        frame = slope_or_frame
    else:
        frame = frame or PlaneFrame(slope_or_frame)
    radius = to_fraction(radius)
    svec = _shift_vector(frame, shift)
    phi_s = frame.phi_field(svec)
    if phi_s[0].is_zero and phi_s[1].is_zero:
        raise ValueError("shift lies in the slope plane; the flip set is empty")
    zero = frame.field.zero
    base = base_shift if base_shift is not None else (zero, zero)
    total = (base[0] + phi_s[0], base[1] + phi_s[1])

    candidates = select_vertices(
        frame, Region.disk(radius), shift=total, on_boundary="resolve"
    )
    if not candidates:
        empty: dict[int, tuple[IntVec, ...]] = {i: () for i in (1, 2, 3, 4)}
        return ShiftSet(svec, radius, empty, ())

    win = frame.window
    arr = np.array(candidates, dtype=float)
    s_raw = arr @ frame.w1f
    t_raw = arr @ frame.w2f
    off1 = frame.phi_offset[0] + base[0]
    off2 = frame.phi_offset[1] + base[1]
    p1 = s_raw - float(off1)
    p2 = t_raw - float(off2)
    slack = win.bf[None, :] - (p1[:, None] * win.cxf[None, :] + p2[:, None] * win.cyf[None, :])
    margin = 1e-9 * (1.0 + np.abs(slack).max())

    classes: dict[int, list[IntVec]] = {1: [], 2: [], 3: [], 4: []}
    points: list[IntVec] = []
    for row, z in enumerate(candidates):
        strip_ok = []
        need_exact = False
        for i in range(4):
            ms = min(slack[row, 2 * i], slack[row, 2 * i + 1])
            if ms > margin:
                strip_ok.append(True)
            elif ms < -margin:
                strip_ok.append(False)
            else:
                need_exact = True
                strip_ok.append(None)
        if need_exact:
            q = frame.tube_point(z, shift=base)
            strip_ok = [win.strip_contains(i, q) for i in range(4)]
        if all(strip_ok):
            continue  # inside the unshifted tube: not a flip
        points.append(z)
        for i in range(4):
            if not strip_ok[i]:
                classes[i + 1].append(z)

    axis = _parallel_axis(svec)
    if axis is not None and classes[axis]:
        raise AssertionError(f"shift along e_{axis} must empty class {axis}")
    for z in points:
        assert any(z in classes[i] for i in (1, 2, 3, 4) if classes[i])

    result = ShiftSet(
        svec,
        radius,
        {i: tuple(classes[i]) for i in (1, 2, 3, 4)},
        tuple(points),
    )
    if validate_r is not None:
        _validate_dichotomy(frame, result, to_fraction(validate_r))
    return result


def _triple_form_value(frame: PlaneFrame, skip: int, d: IntVec) -> FieldElement:
    """w_a*G_bc - w_b*G_ac + w_c*G_ab over the indices != skip (independent of w_skip)."""
    (a, b, c) = tuple(i for i in (1, 2, 3, 4) if i != skip)
    g = frame.g
    return (
        g[(b, c)] * d[a - 1] - g[(a, c)] * d[b - 1] + g[(a, b)] * d[c - 1]
    )


def _close_pairs(frame: PlaneFrame, zs: Sequence[IntVec], r: Fraction):
    """Pairs at E-distance <= r, found by a float grid and confirmed exactly."""
    rf = float(r)
    xy = [frame.xy(z) for z in zs]
    cell = max(rf, 1e-6)
    grid: dict[tuple[int, int], list[int]] = {}
    for idx, (x, y) in enumerate(xy):
        grid.setdefault((math.floor(x / cell), math.floor(y / cell)), []).append(idx)
    r2 = r * r
    for (cx, cy), members in grid.items():
        neighbors = []
        for dx in (0, 1):
            for dy in (-1, 0, 1):
                if dx == 0 and dy < 0:
                    continue
                neighbors.append(grid.get((cx + dx, cy + dy), ()))
        for ai, a in enumerate(members):
            for block in neighbors:
                for b in block:
                    if block is members and b <= a:
                        continue
                    d2f = (xy[a][0] - xy[b][0]) ** 2 + (xy[a][1] - xy[b][1]) ** 2
                    if d2f > rf * rf + 1e-6:
                        continue
                    diff = tuple(p - q for p, q in zip(zs[a], zs[b]))
                    d2 = frame.pi_norm2_int(diff)
                    if (frame.field.rational(r2) - d2).sign() >= 0:
                        yield a, b


def _validate_dichotomy(frame: PlaneFrame, ss: ShiftSet, r: Fraction) -> None:
    """Close pairs in each class must align along a type-i subperiod direction."""
    for i in (1, 2, 3, 4):
        zs = ss.classes[i]
        for a, b in _close_pairs(frame, zs, r):
            diff = tuple(p - q for p, q in zip(zs[a], zs[b]))
            if not _triple_form_value(frame, i, diff).is_zero:
                raise ShiftTooLargeError(
                    f"class {i} points {zs[a]} and {zs[b]} are within {r} but not "
                    f"aligned with a type-{i} subperiod; shrink the shift"
                )


# ---------------------------------------------------------------------------
# Structure verification (sparse / lines / lattice)
# ---------------------------------------------------------------------------


@dataclass
class TypeReport:
    type_: int
    clause: str  # "neutralized" | "sparse" | "lines" | "lattice"
    passed: bool
    count: int
    witness: tuple | None = None
    line_positions: list[float] = dc_field(default_factory=list)
    line_direction: tuple[float, float] | None = None

    def to_json(self) -> dict:
        out = {
            "type": self.type_,
            "clause": self.clause,
            "passed": self.passed,
            "count": self.count,
        }
        if self.witness is not None:
            out["witness"] = [list(z) for z in self.witness]
        return out


@dataclass
class StructureReport:
    per_type: dict[int, TypeReport]

    @property
    def passed(self) -> bool:
        return all(t.passed for t in self.per_type.values())

    def to_json(self) -> dict:
        return {"passed": self.passed, "types": [t.to_json() for t in self.per_type.values()]}


class _LineChart:
    """Exact affine chart along a direction of the slope plane.

    along(p) and across(p) are linear field functionals; true Euclidean
    distances across the direction compare via across^2 * g1 * g2 against
    threshold^2 * |direction|^2.
    """

    def __init__(self, frame: PlaneFrame, direction: EPoint):
        self.frame = frame
        self.dir = direction
        self.norm2 = frame.e_inner(direction, direction)  # |d'|^2
        self.scale2 = frame.g1 * frame.g2  # cross term metric factor
        self.norm2_f = float(self.norm2)
        self.scale2_f = float(self.scale2)

    def across(self, p: EPoint) -> FieldElement:
        return self.dir[0] * p[1] - self.dir[1] * p[0]

    def along(self, p: EPoint) -> FieldElement:
        return self.frame.e_inner(p, self.dir)

    def across_distance_cmp(self, da: FieldElement, threshold: Fraction) -> int:
        """sign(|da|_true - threshold) computed exactly."""
        lhs = da * da * self.scale2
        rhs = self.norm2 * Fraction(threshold * threshold)
        return (lhs - rhs).sign()

    def across_float(self, p: EPoint | tuple[float, float], is_float=False) -> float:
        if is_float:
            x, y = p
        else:
            x, y = float(p[0]), float(p[1])
        return (float(self.dir[0]) * y - float(self.dir[1]) * x) * math.sqrt(
            self.scale2_f / self.norm2_f
        )


def _subperiods_by_type(subperiods: Sequence[Subperiod]) -> dict[int, list[Subperiod]]:
    table: dict[int, list[Subperiod]] = {1: [], 2: [], 3: [], 4: []}
    for sp in subperiods:
        table[sp.type_].append(sp)
    return table


def verify_structure(
    frame: PlaneFrame,
    ss: ShiftSet,
    subperiods: Sequence[Subperiod],
    r,
) -> StructureReport:
    """Check each class against the clause matching its subperiod count:

    0 subperiods: pairwise distance >= r; 1: points within distance 1 of
    parallel lines directed by the subperiod lift, lines >= r apart;
    2: points within distance 1 of a rank-2 lattice of lift directions.
    Failures come back as report entries with witnesses, never exceptions.
    """
    r = to_fraction(r)
    table = _subperiods_by_type(subperiods)
    axis = _parallel_axis(ss.shift)
    slope = frame.slope
    reports: dict[int, TypeReport] = {}
    for i in (1, 2, 3, 4):
        zs = ss.classes[i]
        if axis == i:
            reports[i] = TypeReport(i, "neutralized", passed=not zs, count=len(zs))
            continue
        count = len(table[i])
        if count == 0:
            witness = None
            for a, b in _close_pairs(frame, zs, r):
                diff = tuple(p - q for p, q in zip(zs[a], zs[b]))
                d2 = frame.pi_norm2_int(diff)
                if (frame.field.rational(r * r) - d2).sign() > 0:
                    witness = (zs[a], zs[b])
                    break
            reports[i] = TypeReport(i, "sparse", passed=witness is None, count=len(zs), witness=witness)
        elif count == 1:
            reports[i] = _verify_lines(frame, slope, table[i][0], zs, r, i)
        else:
            reports[i] = _verify_lattice(frame, slope, table[i][:2], zs, i)
    return StructureReport(reports)


def _verify_lines(
    frame: PlaneFrame, slope: Slope, sp: Subperiod, zs: Sequence[IntVec], r: Fraction, i: int
) -> TypeReport:
    lift = lift_subperiod(slope, sp)
    direction = frame.ecoords_field(lift)
    chart = _LineChart(frame, direction)
    pts = [(z, frame.ecoords_int(z)) for z in zs]
    order = sorted(range(len(pts)), key=lambda k: chart.across_float(pts[k][1]))
    report = TypeReport(
        i,
        "lines",
        passed=True,
        count=len(zs),
        line_direction=(float(direction[0]), float(direction[1])),
    )
    if not pts:
        return report
    clusters: list[list[int]] = [[order[0]]]
    for k in order[1:]:
        prev = clusters[-1][-1]
        gap = chart.across(pts[k][1]) - chart.across(pts[prev][1])
        if chart.across_distance_cmp(gap, Fraction(2)) > 0:
            clusters.append([k])
        else:
            clusters[-1].append(k)
    mids = []
    for cluster in clusters:
        lo = chart.across(pts[cluster[0]][1])
        hi = chart.across(pts[cluster[-1]][1])
        if chart.across_distance_cmp(hi - lo, Fraction(2)) > 0:
            report.passed = False
            report.witness = (pts[cluster[0]][0], pts[cluster[-1]][0])
            return report
        mids.append((lo + hi) / 2)
        report.line_positions.append(
            chart.across_float(((pts[cluster[0]][1][0] + pts[cluster[-1]][1][0]) / 2,
                                (pts[cluster[0]][1][1] + pts[cluster[-1]][1][1]) / 2))
        )
    for a, b in zip(mids, mids[1:]):
        if chart.across_distance_cmp(b - a, r) < 0:
            report.passed = False
            report.witness = None
            return report
    return report


def _field_round(x: FieldElement) -> int:
    n = math.floor(float(x) + 0.5)
    while (x - n).sign() < 0 and (n - x - Fraction(1, 2)).sign() > 0:
        n -= 1
    while (x - n - Fraction(1, 2)).sign() > 0:
        n += 1
    return n


def _verify_lattice(
    frame: PlaneFrame, slope: Slope, sps: Sequence[Subperiod], zs: Sequence[IntVec], i: int
) -> TypeReport:
    l1 = frame.ecoords_field(lift_subperiod(slope, sps[0]))
    l2 = frame.ecoords_field(lift_subperiod(slope, sps[1]))
    report = TypeReport(i, "lattice", passed=True, count=len(zs))
    if not zs:
        return report
    det = l1[0] * l2[1] - l1[1] * l2[0]
    if det.is_zero:
        report.passed = False
        return report
    anchor = frame.ecoords_int(zs[0])
    one = frame.field.rational(1)
    for z in zs:
        p = frame.ecoords_int(z)
        d = (p[0] - anchor[0], p[1] - anchor[1])
        alpha = (d[0] * l2[1] - d[1] * l2[0]) / det
        beta = (l1[0] * d[1] - l1[1] * d[0]) / det
        na, nb = _field_round(alpha), _field_round(beta)
        ok = False
        for da in (0, -1, 1):
            for db in (0, -1, 1):
                ra = alpha - (na + da)
                rb = beta - (nb + db)
                rem = (ra * l1[0] + rb * l2[0], ra * l1[1] + rb * l2[1])
                if (one - frame.e_inner(rem, rem)).sign() >= 0:
                    ok = True
                    break
            if ok:
                break
        if not ok:
            report.passed = False
            report.witness = (z,)
            return report
    return report


# ---------------------------------------------------------------------------
# Steps and staircases
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StepCurve:
    """A monotone polyline in the slope plane, waypoints with rational ecoords."""

    chart_dir: EPoint  # field direction defining the (along, across) chart
    waypoints: tuple[tuple[Fraction, Fraction], ...]  # ecoords pairs

    def side_of(self, frame: PlaneFrame, p: EPoint) -> int:
        """-1 left of (before) the curve, +1 right of (beyond); exact."""
        chart = _LineChart(frame, self.chart_dir)
        t = chart.along(p)
        pts = self.waypoints
        ts = [chart.along((frame.field.rational(a), frame.field.rational(b))) for a, b in pts]
        if (t - ts[0]).sign() <= 0:
            a, b = pts[0], pts[1]
        elif (t - ts[-1]).sign() >= 0:
            a, b = pts[-2], pts[-1]
        else:
            lo, hi = 0, len(pts) - 1
            while hi - lo > 1:
                mid = (lo + hi) // 2
                if (t - ts[mid]).sign() >= 0:
                    lo = mid
                else:
                    hi = mid
            a, b = pts[lo], pts[hi]
        ax, ay = frame.field.rational(a[0]), frame.field.rational(a[1])
        bx, by = frame.field.rational(b[0]), frame.field.rational(b[1])
        cross = (bx - ax) * (p[1] - ay) - (by - ay) * (p[0] - ax)
        s = cross.sign()
        if s == 0:
            return 1  # on-curve points count as beyond (deterministic)
        # orient so that +1 means larger across-coordinate
        dcross = (bx - ax) * self.chart_dir[1] - (by - ay) * self.chart_dir[0]
        return s if dcross.sign() >= 0 else -s

    def to_json(self) -> dict:
        from .fields import fraction_str

        return {
            "waypoints": [[fraction_str(a), fraction_str(b)] for a, b in self.waypoints]
        }


def _point_segment_dist2_cmp(
    frame: PlaneFrame, p: EPoint, a: EPoint, b: EPoint, threshold2: Fraction
) -> int:
    """sign(dist(p, segment ab)^2 - threshold2), exact in the E metric."""
    v = (b[0] - a[0], b[1] - a[1])
    w = (p[0] - a[0], p[1] - a[1])
    wv = frame.e_inner(w, v)
    vv = frame.e_inner(v, v)
    thr = frame.field.rational(threshold2)
    if wv.sign() <= 0:
        return (frame.e_inner(w, w) - thr).sign()
    if (wv - vv).sign() >= 0:
        wb = (p[0] - b[0], p[1] - b[1])
        return (frame.e_inner(wb, wb) - thr).sign()
    d2 = frame.e_inner(w, w) - wv * wv / vv
    return (d2 - thr).sign()


def _route_corridor(
    ts: list[float],
    lo: float,
    hi: float,
    obstacles: list[tuple[float, float]],
    clearance: float,
) -> list[float] | None:
    """Waypoint heights across a stripe whose polyline avoids obstacle disks.

    Per column gap [t_k, t_k+1] every obstacle is inflated using its minimal
    horizontal distance to the gap, so a segment whose height range stays in
    one allowed component keeps true 2D clearance.  A component-chain DP picks
    a corridor; the greedy height walk then stays near the previous height.
    """
    mid = (lo + hi) / 2
    ncols = len(ts) - 1
    comps: list[list[tuple[float, float]]] = []
    for k in range(ncols):
        t0, t1 = ts[k], ts[k + 1]
        forbidden: list[tuple[float, float]] = []
        for (ot, on) in obstacles:
            if ot < t0:
                dt = t0 - ot
            elif ot > t1:
                dt = ot - t1
            else:
                dt = 0.0
            if dt < clearance:
                h = math.sqrt(clearance * clearance - dt * dt)
                forbidden.append((on - h, on + h))
        forbidden.sort()
        allowed: list[tuple[float, float]] = []
        cursor = lo
        for (flo, fhi) in forbidden:
            if flo > cursor:
                allowed.append((cursor, min(flo, hi)))
            cursor = max(cursor, fhi)
            if cursor >= hi:
                break
        if cursor < hi:
            allowed.append((cursor, hi))
        allowed = [(a, b) for (a, b) in allowed if b - a > 1e-9]
        if not allowed:
            return None
        comps.append(allowed)

    def overlap(a, b):
        return min(a[1], b[1]) - max(a[0], b[0]) > 1e-9

    # forward reachability over components, tracking one parent each
    parents: list[dict[int, int | None]] = [{j: None for j in range(len(comps[0]))}]
    for k in range(1, ncols):
        layer: dict[int, int | None] = {}
        for j, comp in enumerate(comps[k]):
            for jp in parents[k - 1]:
                if overlap(comps[k - 1][jp], comp):
                    layer[j] = jp
                    break
        if not layer:
            return None
        parents.append(layer)

    def score(j):
        a, b = comps[ncols - 1][j]
        return (abs((a + b) / 2 - mid), a)

    chain = [min(parents[-1], key=score)]
    for k in range(ncols - 1, 0, -1):
        chain.append(parents[k][chain[-1]])
    chain.reverse()

    heights: list[float] = []
    first = comps[0][chain[0]]
    prev = min(max(mid, first[0] + 1e-6), first[1] - 1e-6)
    heights.append(prev)
    for k in range(ncols):
        cur = comps[k][chain[k]]
        if k + 1 < ncols:
            nxt = comps[k + 1][chain[k + 1]]
            a = max(cur[0], nxt[0]) + 1e-6
            b = min(cur[1], nxt[1]) - 1e-6
        else:
            a, b = cur[0] + 1e-6, cur[1] - 1e-6
        heights.append(min(max(prev, a), b))
        prev = heights[-1]
    return heights


@dataclass(frozen=True)
class StepPatch:
    """A patch selected by E on one side of each curve and by E + k*s beyond."""

    patch: TilingPatch
    curves: tuple[StepCurve, ...]
    shift: tuple[FieldElement, ...]
    bands: dict[IntVec, int]
    clearance: Fraction
    line_type: int

    def band_vertices(self, band: int) -> list[IntVec]:
        return [z for z, b in self.bands.items() if b == band]

    def to_json(self) -> dict:
        return {
            "patch": self.patch.to_json(),
            "curves": [c.to_json() for c in self.curves],
            "bands": {",".join(map(str, z)): b for z, b in sorted(self.bands.items())},
        }


def build_staircase(
    slope: Slope,
    shift: Sequence,
    r,
    steps: int,
    radius,
    *,
    frame: PlaneFrame | None = None,
    line_type: int | None = None,
    clearance: Fraction | None = None,
) -> StepPatch:
    """Assemble a k-step staircase: band i is selected by the window of
    E + i*shift, with step edges routed between consecutive flip lines at a
    clearance from every flip point of that step's shift set.
    """
    if steps < 1:
        raise ValueError("need at least one step")
    frame = frame or PlaneFrame(slope)
    r = to_fraction(r)
    radius = to_fraction(radius)
    clearance = to_fraction(clearance) if clearance is not None else r
    if clearance < Fraction(r, 2):
        raise ValueError("clearance below r/2 breaks the step invariant")
    svec = _shift_vector(frame, shift)
    phi_s = frame.phi_field(svec)
    subperiods = find_subperiods(frame.g)
    table = _subperiods_by_type(subperiods)
    axis = _parallel_axis(svec)

    if line_type is None:
        candidates = [
            i for i in (1, 2, 3, 4) if i != axis and len(table[i]) == 1
        ]
        if not candidates:
            raise CorridorError("no single-subperiod type available to define flip lines")
        line_type = candidates[0]
    lift = lift_subperiod(slope, table[line_type][0])
    direction = frame.ecoords_field(lift)
    chart = _LineChart(frame, direction)

    enum_radius = radius + r + 2
    zero = frame.field.zero
    curves: list[StepCurve] = []
    spanf = float(radius) + float(r) + 2.0
    # target stripe midpoints spread across the patch, one per step edge
    targets = [
        -float(radius) + (i + 1) * 2 * float(radius) / (steps + 1) for i in range(steps)
    ]
    used_mids: list[float] = []
    for i in range(steps):
        base = (phi_s[0] * i, phi_s[1] * i)
        ss = shifted_points(frame, svec, enum_radius, base_shift=base)
        line_pts = ss.classes[line_type]
        if not line_pts:
            raise CorridorError(f"step {i}: no type-{line_type} flip lines to route between")
        across = sorted(chart.across_float(frame.ecoords_int(z)) for z in line_pts)
        gaps = []
        for a, b in zip(across, across[1:]):
            if b - a > 2.5:  # distinct lines (clusters are <= 2 wide)
                gaps.append((a, b))
        gaps = [
            (a, b)
            for (a, b) in gaps
            if all(not (a < m < b) for m in used_mids)
        ]
        if not gaps:
            raise CorridorError(f"step {i}: no free stripe between flip lines")
        target = targets[i]
        a, b = min(gaps, key=lambda g: abs((g[0] + g[1]) / 2 - target))
        used_mids.append((a + b) / 2)
        stripe_lo = a + 1.0 + float(clearance) / 2
        stripe_hi = b - 1.0 - float(clearance) / 2
        if stripe_hi - stripe_lo < 0.25:
            raise CorridorError(f"step {i}: stripe between lines too narrow")
        obstacles = []
        for z in ss.points:
            p = frame.ecoords_int(z)
            nf = chart.across_float(p)
            if stripe_lo - float(clearance) - 1 <= nf <= stripe_hi + float(clearance) + 1:
                obstacles.append((_along_float(frame, chart, p), nf))
        step_len = max(float(r) / 2, 0.25)
        count = int(2 * spanf / step_len) + 2
        ts = [-spanf + k * 2 * spanf / (count - 1) for k in range(count)]
        heights = _route_corridor(ts, stripe_lo, stripe_hi, obstacles, float(clearance) + 0.05)
        if heights is None:
            raise CorridorError(f"step {i}: corridor blocked at clearance {clearance}")
        waypoints = []
        for t, n in zip(ts, heights):
            waypoints.append(_chart_to_ecoords(frame, chart, t, n))
        curve = StepCurve(direction, tuple(waypoints))
        _verify_curve_clearance(frame, curve, ss, Fraction(r, 2))
        curves.append(curve)

    # vertex selection band by band
    union: set[IntVec] = set()
    for b in range(steps + 1):
        base = (phi_s[0] * b, phi_s[1] * b)
        sel = select_vertices(
            frame, Region.disk(radius), shift=base, on_boundary="resolve"
        )
        union.update(sel)
    bands: dict[IntVec, int] = {}
    vertices: list[IntVec] = []
    for z in sorted(union):
        p = frame.ecoords_int(z)
        band = 0
        for curve in curves:
            if curve.side_of(frame, p) > 0:
                band += 1
        base = (phi_s[0] * band, phi_s[1] * band)
        if frame.window.contains(frame.tube_point(z, shift=base)):
            bands[z] = band
            vertices.append(z)
    faces = faces_from_vertices(vertices)
    patch = TilingPatch(slope, Region.disk(radius), tuple(sorted(vertices)), tuple(faces))
    return StepPatch(patch, tuple(curves), svec, bands, clearance, line_type)


def build_step(
    slope: Slope,
    shift: Sequence,
    r,
    radius,
    *,
    frame: PlaneFrame | None = None,
    line_type: int | None = None,
    clearance: Fraction | None = None,
) -> StepPatch:
    """A single step: the half patch of E glued to the half patch of E + s
    across a corridor avoiding all flip points."""
    return build_staircase(
        slope, shift, r, 1, radius, frame=frame, line_type=line_type, clearance=clearance
    )


def _along_float(frame: PlaneFrame, chart: _LineChart, p: EPoint) -> float:
    x, y = frame.xy_of_ecoords(p)
    dx, dy = frame.xy_of_ecoords(chart.dir)
    norm = math.hypot(dx, dy)
    return (x * dx + y * dy) / norm


def _chart_to_ecoords(
    frame: PlaneFrame, chart: _LineChart, t: float, n: float
) -> tuple[Fraction, Fraction]:
    dx, dy = frame.xy_of_ecoords(chart.dir)
    norm = math.hypot(dx, dy)
    ux, uy = dx / norm, dy / norm
    x = t * ux - n * uy
    y = t * uy + n * ux
    c1 = x / frame.sq_g1f
    c2 = y / frame.sq_g2f
    return (Fraction(round(c1 * 4096), 4096), Fraction(round(c2 * 4096), 4096))


def _verify_curve_clearance(
    frame: PlaneFrame, curve: StepCurve, ss: ShiftSet, min_clearance: Fraction
) -> None:
    """Exact check: no flip point within min_clearance of the polyline."""
    thr2 = min_clearance * min_clearance
    pts = [
        (frame.field.rational(a), frame.field.rational(b)) for a, b in curve.waypoints
    ]
    xyz = [frame.xy_of_ecoords(p) for p in pts]
    for z in ss.points:
        p = frame.ecoords_int(z)
        x, y = frame.xy_of_ecoords(p)
        thr_f = float(min_clearance)
        for k in range(len(pts) - 1):
            ax, ay = xyz[k]
            bx, by = xyz[k + 1]
            # quick reject in floats
            if (
                min(ax, bx) - thr_f - 0.01 <= x <= max(ax, bx) + thr_f + 0.01
                and min(ay, by) - thr_f - 0.01 <= y <= max(ay, by) + thr_f + 0.01
            ):
                if _point_segment_dist2_cmp(frame, p, pts[k], pts[k + 1], thr2) < 0:
                    raise CorridorError(
                        f"flip point {z} within {min_clearance} of the step edge"
                    )


def tube_deviation(frame: PlaneFrame, zs: Iterable[IntVec], base_shift: EPoint | None = None) -> FieldElement:
    """max over points of the largest constraint excess for the (shifted) tube.

    Negative means all points are inside; grows with the distance to the tube.
    """
    zero = frame.field.zero
    best: FieldElement | None = None
    for z in zs:
        q = frame.tube_point(z, shift=base_shift)
        for c in frame.window.constraints:
            v = c.value(q)
            if best is None or (v - best).sign() > 0:
                best = v
    if best is None:
        raise ValueError("no points supplied")
    return best
