"""2-planes in R^4: Grassmann coordinates, nondegeneracy, irrationality, config IO.

A slope is an affine 2-plane spanned by two field vectors u, v with a rational
offset.  Its six Grassmann coordinates G_ij = u_i v_j - u_j v_i (i < j) satisfy
the quadratic identity G12*G34 = G13*G24 - G14*G23 and are kept normalized so
that the lexicographically first nonzero coordinate equals 1, which makes
equality of slopes-up-to-scale a componentwise comparison.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from .fields import (
    FieldElement,
    QuadraticField,
    RationalLike,
    fraction_str,
    rational_kernel,
    to_fraction,
)

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

PAIRS: tuple[tuple[int, int], ...] = ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4))
PAIR_INDEX = {p: i for i, p in enumerate(PAIRS)}
TRIPLES: tuple[tuple[int, int, int], ...] = ((1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4))

CONFIG_FORMAT = 1


class GeometryError(Exception):
    """A geometric precondition was violated."""


class DegenerateSlopeError(GeometryError):
    """Some Grassmann coordinate vanishes where nondegeneracy is required."""


class PluckerViolationError(GeometryError):
    """Six numbers that do not satisfy the Grassmann quadratic identity."""


Vec4 = tuple[FieldElement, FieldElement, FieldElement, FieldElement]


def field_vector(field: QuadraticField, entries: Sequence) -> Vec4:
    out = []
    for e in entries:
        if isinstance(e, FieldElement):
            out.append(e.promote(field) if e.field != field else e)
        else:
            out.append(field.rational(to_fraction(e)))
    if len(out) != 4:
        raise ValueError("expected 4 entries")
    return tuple(out)


def dot(a: Sequence[FieldElement], b: Sequence[FieldElement]) -> FieldElement:
    total = a[0] * b[0]
    for x, y in zip(a[1:], b[1:]):
        total = total + x * y
    return total


def vec_sub(a: Sequence[FieldElement], b: Sequence[FieldElement]) -> Vec4:
    return tuple(x - y for x, y in zip(a, b))


def vec_scale(a: Sequence[FieldElement], s) -> Vec4:
    return tuple(x * s for x in a)


@dataclass(frozen=True)
class Slope:
    """An affine 2-plane of R^4: span(u, v) + offset, over a quadratic field."""

    field: QuadraticField
    u: Vec4
    v: Vec4
    offset: tuple[Fraction, Fraction, Fraction, Fraction] = (
        Fraction(0),
        Fraction(0),
        Fraction(0),
        Fraction(0),
    )

    def __post_init__(self) -> None:
        for w in (self.u, self.v):
            if len(w) != 4 or any(e.field != self.field for e in w):
                raise ValueError("basis vectors must be 4-vectors over the slope field")
        if all(m.is_zero for m in _minors(self.u, self.v)):
            raise ValueError("u and v are linearly dependent")

    @classmethod
    def from_entries(
        cls,
        field: QuadraticField,
        u: Sequence,
        v: Sequence,
        offset: Sequence[RationalLike] = (0, 0, 0, 0),
    ) -> "Slope":
        off = tuple(to_fraction(x) for x in offset)
        return cls(field, field_vector(field, u), field_vector(field, v), off)

    def with_offset(self, offset: Sequence[RationalLike]) -> "Slope":
        return Slope(self.field, self.u, self.v, tuple(to_fraction(x) for x in offset))

    def translated(self, delta: Sequence[Fraction]) -> "Slope":
        off = tuple(a + b for a, b in zip(self.offset, delta))
        return Slope(self.field, self.u, self.v, off)

    def contains_direction(self, w: Sequence[FieldElement]) -> bool:
        """Whether the direction w lies in span(u, v): all triple minors vanish."""
        g = _minors(self.u, self.v)
        for (i, j, k) in TRIPLES:
            gi, gj, gk = (PAIR_INDEX[(j, k)], PAIR_INDEX[(i, k)], PAIR_INDEX[(i, j)])
            val = w[i - 1] * g[gi] - w[j - 1] * g[gj] + w[k - 1] * g[gk]
            if not val.is_zero:
                return False
        return True

    def permuted_axes(self, perm: Sequence[int]) -> "Slope":
        """Relabel coordinate axes: entry i of the result is old entry perm[i] (1-based)."""
        u = tuple(self.u[p - 1] for p in perm)
        v = tuple(self.v[p - 1] for p in perm)
        off = tuple(self.offset[p - 1] for p in perm)
        return Slope(self.field, u, v, off)

    def to_json(self) -> dict:
        return {
            "radicands": list(self.field.radicands),
            "u": [e.to_json()["coeffs"] for e in self.u],
            "v": [e.to_json()["coeffs"] for e in self.v],
            "offset": [fraction_str(x) for x in self.offset],
        }


def _minors(u: Sequence[FieldElement], v: Sequence[FieldElement]) -> list[FieldElement]:
    return [u[i - 1] * v[j - 1] - u[j - 1] * v[i - 1] for (i, j) in PAIRS]


@dataclass(frozen=True)
class GrassmannCoords:
    """The six minors of a slope basis, optionally scale-normalized."""

    field: QuadraticField
    g: tuple[FieldElement, ...]
    normalized: bool = False

    def __post_init__(self) -> None:
        if len(self.g) != 6:
            raise ValueError("need 6 Grassmann coordinates")

    def __getitem__(self, key) -> FieldElement:
        if isinstance(key, tuple):
            return self.g[PAIR_INDEX[key]]
        return self.g[key]

    def plucker_defect(self) -> FieldElement:
        g = self.g
        return g[0] * g[5] - g[1] * g[4] + g[2] * g[3]

    def satisfies_plucker(self) -> bool:
        return self.plucker_defect().is_zero

    def is_nondegenerate(self) -> bool:
        return all(not x.is_zero for x in self.g)

    def normalize(self) -> "GrassmannCoords":
        lead = next((x for x in self.g if not x.is_zero), None)
        if lead is None:
            raise ValueError("all Grassmann coordinates are zero")
        return GrassmannCoords(self.field, tuple(x / lead for x in self.g), True)

    def conjugates(self) -> tuple["GrassmannCoords", ...]:
        cols = [x.conjugations() for x in self.g]
        out = []
        for j in range(self.field.degree):
            out.append(GrassmannCoords(self.field, tuple(col[j] for col in cols), self.normalized))
        return tuple(out)

    def to_json(self) -> dict:
        return {
            "pairs": [f"{i}{j}" for (i, j) in PAIRS],
            "values": [x.to_json() for x in self.g],
            "normalization": "lex-first-nonzero=1" if self.normalized else "raw",
        }


def grassmann(slope: Slope, normalize: bool = True) -> GrassmannCoords:
    """The six 2x2 minors of (u, v); the quadratic identity is asserted exactly."""
    coords = GrassmannCoords(slope.field, tuple(_minors(slope.u, slope.v)))
    if not coords.satisfies_plucker():
        raise AssertionError("minor computation violated the Grassmann identity")
    return coords.normalize() if normalize else coords


def is_nondegenerate(g: GrassmannCoords) -> bool:
    return g.is_nondegenerate()


def grassmann_from_values(values: Sequence[FieldElement], normalize: bool = True) -> GrassmannCoords:
    field = values[0].field
    vals = tuple(v.promote(field) if v.field != field else v for v in values)
    coords = GrassmannCoords(field, vals)
    return coords.normalize() if normalize else coords


def rational_subspace(slope: Slope) -> list[tuple[int, int, int, int]]:
    """Basis over Q of the rational vectors contained in span(u, v).

    A vector w lies in the plane iff the four triple forms
    x_i G_jk - x_j G_ik + x_k G_ij (i<j<k) vanish on it; the rational solutions
    are the rational kernel of that 4x4 field matrix.  Empty iff irrational.
    """
    g = grassmann(slope, normalize=False)
    zero = slope.field.zero
    rows = []
    for (i, j, k) in TRIPLES:
        row = [zero] * 4
        row[i - 1] = g[(j, k)]
        row[j - 1] = -g[(i, k)]
        row[k - 1] = g[(i, j)]
        rows.append(row)
    return [v for v in rational_kernel(rows, 4)]


def is_irrational(slope: Slope) -> bool:
    return not rational_subspace(slope)


def plane_from_grassmann(g: GrassmannCoords) -> Slope:
    """A slope with the given coordinates: u = (0, G12, G13, G14), v = (-G12, 0, G23, G24).

    Requires nondegeneracy and the quadratic identity; the minors of the result
    are the input scaled by G12.
    """
    if not g.satisfies_plucker():
        raise PluckerViolationError("input does not satisfy the Grassmann identity")
    if not g.is_nondegenerate():
        raise DegenerateSlopeError("degenerate coordinates cannot be inverted")
    zero = g.field.zero
    u = (zero, g[(1, 2)], g[(1, 3)], g[(1, 4)])
    v = (-g[(1, 2)], zero, g[(2, 3)], g[(2, 4)])
    return Slope(g.field, u, v)


def conjugate_slopes(g: GrassmannCoords) -> tuple[GrassmannCoords, ...]:
    """Entrywise algebraic conjugations; each image satisfies the identity exactly."""
    out = g.conjugates()
    for c in out:
        if not c.satisfies_plucker():
            raise AssertionError("conjugation broke the Grassmann identity")
    return out


# ---------------------------------------------------------------------------
# Slope config files
# ---------------------------------------------------------------------------


def _parse_vector(field: QuadraticField, rows: Sequence[Sequence[str]], name: str) -> Vec4:
    if len(rows) != 4:
        raise ValueError(f"{name} must have 4 entries")
    return tuple(field.element(row) for row in rows)


def slope_from_config(data: dict) -> Slope:
    if data.get("format") != CONFIG_FORMAT:
        raise ValueError(f"unsupported config format {data.get('format')!r}")
    field = QuadraticField(tuple(data.get("radicands", ())))
    u = _parse_vector(field, data["u"], "u")
    v = _parse_vector(field, data["v"], "v")
    offset = tuple(to_fraction(x) for x in data.get("offset", ("0", "0", "0", "0")))
    if len(offset) != 4:
        raise ValueError("offset must have 4 entries")
    return Slope(field, u, v, offset)


def bundled_config_path(name: str) -> Path | None:
    stem = name[:-5] if name.endswith(".toml") else name
    path = Path(__file__).parent / "configs" / f"{stem}.toml"
    return path if path.is_file() else None


def load_slope(path_or_name: str | Path) -> Slope:
    """Load a slope config from a file path or a bundled config name."""
    path = Path(path_or_name)
    if not path.is_file():
        bundled = bundled_config_path(str(path_or_name))
        if bundled is None:
            raise FileNotFoundError(f"no slope config at {path_or_name!r}")
        path = bundled
    with open(path, "rb") as handle:
        data = tomllib.load(handle)
    return slope_from_config(data)


def ammann_beenker() -> Slope:
    """The plane spanned by (sqrt2, 1, 0, -1) and (0, 1, sqrt2, 1), generic offset."""
    return load_slope("ab")
