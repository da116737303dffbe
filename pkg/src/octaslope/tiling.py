"""Cut-and-project tiling patches: faces, frequencies, patterns and r-atlases.

A patch is the set of selected lattice vertices inside a region together with
every unit 2-face whose four corners are selected; its projection to the slope
plane is the tiling patch, edge-to-edge by construction.  An r-map collects
the tiles meeting a closed ball of diameter r around a vertex; patterns are
compared after translating their lexicographically minimal base to the origin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .fields import FieldElement, to_fraction
from .geometry import IntVec, PlaneFrame, Region, select_vertices
from .slopes import PAIRS, Slope

Face = tuple[IntVec, int, int]  # (base, i, j) with 1 <= i < j <= 4

_UNIT: tuple[IntVec, ...] = (
    (1, 0, 0, 0),
    (0, 1, 0, 0),
    (0, 0, 1, 0),
    (0, 0, 0, 1),
)


def _add(a: IntVec, b: IntVec) -> IntVec:
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3])


def _sub(a: IntVec, b: IntVec) -> IntVec:
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3])


def face_corners(face: Face) -> tuple[IntVec, IntVec, IntVec, IntVec]:
    """Corners in cyclic order: base, base+ei, base+ei+ej, base+ej."""
    base, i, j = face
    ei, ej = _UNIT[i - 1], _UNIT[j - 1]
    return (base, _add(base, ei), _add(_add(base, ei), ej), _add(base, ej))


def faces_from_vertices(vertices: Iterable[IntVec]) -> list[Face]:
    vset = set(vertices)
    faces: list[Face] = []
    for z in vset:
        for (i, j) in PAIRS:
            ei, ej = _UNIT[i - 1], _UNIT[j - 1]
            if (
                _add(z, ei) in vset
                and _add(z, ej) in vset
                and _add(_add(z, ei), ej) in vset
            ):
                faces.append((z, i, j))
    faces.sort()
    return faces


@dataclass(frozen=True)
class TilingPatch:
    slope: Slope
    region: Region
    vertices: tuple[IntVec, ...]
    faces: tuple[Face, ...]

    @property
    def radius(self) -> Fraction:
        return self.region.radius

    def vertex_set(self) -> set[IntVec]:
        return set(self.vertices)

    def to_json(self) -> dict:
        return {
            "format": 1,
            "vertices": [list(v) for v in self.vertices],
            "faces": [{"base": list(b), "i": i, "j": j} for (b, i, j) in self.faces],
        }


def generate_patch(
    slope: Slope,
    radius,
    *,
    rect: tuple | None = None,
    on_boundary: str = "error",
    seed: int = 0,
    frame: PlaneFrame | None = None,
) -> TilingPatch:
    """Select the lattice vertices of the tiling inside a disk (or rectangle)
    of the slope plane and assemble all unit 2-faces with selected corners.

    Generic offsets are enforced by default: a lattice projection exactly on
    the window boundary raises BoundaryHitError with a suggested perturbation.
    """
    frame = frame or PlaneFrame(slope)
    region = Region.rect(*rect) if rect else Region.disk(radius)
    vertices = select_vertices(frame, region, on_boundary=on_boundary, seed=seed)
    faces = faces_from_vertices(vertices)
    return TilingPatch(slope, region, tuple(vertices), tuple(faces))


def tile_frequencies(patch: TilingPatch) -> dict[tuple[int, int], int]:
    counts = {pair: 0 for pair in PAIRS}
    for (_, i, j) in patch.faces:
        counts[(i, j)] += 1
    return counts


def vertex_star(patch: TilingPatch, z: IntVec) -> list[Face]:
    """The faces of the patch incident to the vertex z."""
    out = []
    for face in patch.faces:
        if z in face_corners(face):
            out.append(face)
    return out


# ---------------------------------------------------------------------------
# Patterns and r-atlases
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Pattern:
    """A finite face set, translated so the lexicographically minimal base is 0."""

    faces: frozenset[Face]

    @classmethod
    def from_faces(cls, faces: Iterable[Face]) -> "Pattern":
        faces = list(faces)
        if not faces:
            return cls(frozenset())
        origin = min(b for (b, _, _) in faces)
        return cls(frozenset((_sub(b, origin), i, j) for (b, i, j) in faces))

    def translates_into(self, other: "Pattern") -> bool:
        """Whether some translate of self is a subset of other."""
        if not self.faces:
            return True
        mine = sorted(self.faces)
        anchor = mine[0]
        for (b, i, j) in other.faces:
            if (i, j) != (anchor[1], anchor[2]):
                continue
            delta = _sub(b, anchor[0])
            if all(((_add(fb, delta), fi, fj) in other.faces) for (fb, fi, fj) in mine):
                return True
        return False

    def to_json(self) -> dict:
        return {"faces": [{"base": list(b), "i": i, "j": j} for (b, i, j) in sorted(self.faces)]}


class _BallPredicate:
    """Does a projected tile meet the closed ball of radius r/2 around a vertex?

    Distances are squared and compared in the exact metric of the slope plane;
    a float pass with margin short-circuits the easy cases.
    """

    def __init__(self, frame: PlaneFrame, r: Fraction):
        self.frame = frame
        self.r = r
        self.rr4 = Fraction(r, 2) ** 2  # (r/2)^2
        self.rr4f = float(self.rr4)
        self._ecoords: dict[IntVec, tuple[FieldElement, FieldElement]] = {}
        self._xy: dict[IntVec, tuple[float, float]] = {}
        self._decisions: dict[Face, bool] = {}  # keyed by (center - base, i, j)

    def ecoords(self, z: IntVec):
        p = self._ecoords.get(z)
        if p is None:
            p = self.frame.ecoords_int(z)
            self._ecoords[z] = p
        return p

    def xy(self, z: IntVec):
        p = self._xy.get(z)
        if p is None:
            p = self.frame.xy(z)
            self._xy[z] = p
        return p

    def _dist2_float(self, center: IntVec, corners) -> float:
        cx, cy = self.xy(center)
        pts = [self.xy(c) for c in corners]
        inside = True
        best = math.inf
        n = len(pts)
        for t in range(n):
            ax, ay = pts[t]
            bx, by = pts[(t + 1) % n]
            vx, vy = bx - ax, by - ay
            wx, wy = cx - ax, cy - ay
            cross = vx * wy - vy * wx
            if cross < 0:
                inside = False
            vv = vx * vx + vy * vy
            tproj = (wx * vx + wy * vy) / vv
            tproj = min(1.0, max(0.0, tproj))
            dx, dy = wx - tproj * vx, wy - tproj * vy
            best = min(best, dx * dx + dy * dy)
        return 0.0 if inside else best

    def _dist2_exact(self, center: IntVec, corners) -> FieldElement:
        frame = self.frame
        c = self.ecoords(center)
        pts = [self.ecoords(z) for z in corners]
        n = len(pts)
        crosses = []
        for t in range(n):
            a, b = pts[t], pts[(t + 1) % n]
            cross = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
            crosses.append(cross.sign())
        if all(s >= 0 for s in crosses) or all(s <= 0 for s in crosses):
            return frame.field.zero
        best: FieldElement | None = None
        for t in range(n):
            a, b = pts[t], pts[(t + 1) % n]
            v = (b[0] - a[0], b[1] - a[1])
            w = (c[0] - a[0], c[1] - a[1])
            wv = frame.e_inner(w, v)
            vv = frame.e_inner(v, v)
            if wv.sign() <= 0:
                d2 = frame.e_inner(w, w)
            elif (wv - vv).sign() >= 0:
                wb = (c[0] - b[0], c[1] - b[1])
                d2 = frame.e_inner(wb, wb)
            else:
                d2 = frame.e_inner(w, w) - wv * wv / vv
            if best is None or (d2 - best).sign() < 0:
                best = d2
        assert best is not None
        return best

    def borderline(self, center: IntVec, face: Face) -> bool:
        """Exact decision for near-threshold cases, cheap paths first.

        Decisions depend only on the center's position relative to the face,
        so they are cached by (center - base, i, j); a corner within the ball
        settles containment without the full point-to-quad distance.
        """
        key = (_sub(center, face[0]), face[1], face[2])
        cached = self._decisions.get(key)
        if cached is not None:
            return cached
        corners = face_corners(face)
        result = None
        if center in corners:
            result = True
        else:
            bound = self.frame.field.rational(self.rr4)
            for corner in corners:
                diff = _sub(center, corner)
                d2 = self.frame.pi_norm2_int(diff)
                if (bound - d2).sign() >= 0:
                    result = True
                    break
            if result is None:
                d2 = self._dist2_exact(center, corners)
                result = (bound - d2).sign() >= 0
        self._decisions[key] = result
        return result

    def __call__(self, center: IntVec, face: Face) -> bool:
        corners = face_corners(face)
        d2f = self._dist2_float(center, corners)
        if d2f < self.rr4f - 1e-7:
            return True
        if d2f > self.rr4f + 1e-7:
            return False
        return self.borderline(center, face)


def r_atlas(
    patch: TilingPatch,
    r,
    *,
    frame: PlaneFrame | None = None,
    safety: Fraction = Fraction(3),
) -> set[Pattern]:
    """The set of r-maps of the patch, one candidate per sufficiently interior vertex.

    Ball centers are patch vertices; the patch must extend r/2 + safety past
    the centers so every tile meeting a ball is present with all its corners.
    The bulk of the tile/ball tests run vectorized in floats; candidates close
    to the threshold are re-decided exactly.
    """
    import numpy as np

    r = to_fraction(r)
    if patch.region.kind != "disk":
        raise ValueError("r_atlas needs a disk patch")
    frame = frame or PlaneFrame(patch.slope)
    margin = Fraction(r, 2) + safety
    if patch.radius <= margin:
        raise ValueError(f"patch radius {patch.radius} too small for r={r}")
    cut = patch.radius - margin
    cutf = float(cut)
    predicate = _BallPredicate(frame, r)
    rr4f = predicate.rr4f

    faces = patch.faces
    corners_xy = np.empty((len(faces), 4, 2))
    base_xy = np.empty((len(faces), 2))
    for idx, face in enumerate(faces):
        for t, corner in enumerate(face_corners(face)):
            corners_xy[idx, t] = predicate.xy(corner)
        base_xy[idx] = corners_xy[idx, 0]
    edge_v = np.roll(corners_xy, -1, axis=1) - corners_xy  # (F, 4, 2)
    edge_vv = (edge_v**2).sum(axis=2)  # (F, 4)

    reach = float(r) / 2 + 2.4  # tile diameter bound plus slack
    atlas: set[Pattern] = set()
    cut2 = cut * cut
    for z in patch.vertices:
        x, y = predicate.xy(z)
        if x * x + y * y > cutf * cutf + 1e-6:
            continue
        if x * x + y * y > cutf * cutf - 1e-6:
            pi2 = frame.pi_norm2_int(z)
            if (frame.field.rational(cut2) - pi2).sign() < 0:
                continue
        near = np.nonzero(
            (np.abs(base_xy[:, 0] - x) <= reach) & (np.abs(base_xy[:, 1] - y) <= reach)
        )[0]
        if near.size == 0:
            atlas.add(Pattern.from_faces(()))
            continue
        w = np.array([x, y]) - corners_xy[near]  # (K, 4, 2)
        v = edge_v[near]
        vv = edge_vv[near]
        cross = v[:, :, 0] * w[:, :, 1] - v[:, :, 1] * w[:, :, 0]
        inside = np.all(cross >= 0, axis=1) | np.all(cross <= 0, axis=1)
        tproj = np.clip((w * v).sum(axis=2) / vv, 0.0, 1.0)
        diff = w - tproj[:, :, None] * v
        d2 = (diff**2).sum(axis=2).min(axis=1)
        d2[inside] = 0.0
        found = [faces[near[k]] for k in np.nonzero(d2 < rr4f - 1e-7)[0]]
        for k in np.nonzero((d2 >= rr4f - 1e-7) & (d2 <= rr4f + 1e-7))[0]:
            if predicate.borderline(z, faces[near[k]]):
                found.append(faces[near[k]])
        atlas.add(Pattern.from_faces(found))
    return atlas


def atlas_monotone_embeds(small: set[Pattern], large: set[Pattern]) -> bool:
    """Every pattern of the small atlas embeds (up to translation) in some large one."""
    return all(any(p.translates_into(q) for q in large) for p in small)
