import math
from fractions import Fraction

import pytest

from octaslope.geometry import PlaneFrame, Region, select_vertices
from octaslope.slopes import PAIRS, grassmann
from octaslope.tiling import (
    Pattern,
    atlas_monotone_embeds,
    face_corners,
    faces_from_vertices,
    generate_patch,
    r_atlas,
    tile_frequencies,
    vertex_star,
)


@pytest.fixture(scope="module")
def ab_frame(ab_slope):
    return PlaneFrame(ab_slope)


@pytest.fixture(scope="module")
def ab_patch(ab_slope, ab_frame):
    return generate_patch(ab_slope, 12, frame=ab_frame)


def test_face_closure(ab_patch):
    vset = ab_patch.vertex_set()
    assert ab_patch.faces == tuple(faces_from_vertices(vset))
    for face in ab_patch.faces:
        assert all(c in vset for c in face_corners(face))


def test_planarity_invariant(ab_patch, ab_frame):
    # every selected vertex passes the exact half-open window test
    for z in ab_patch.vertices[::7]:
        assert ab_frame.in_tube(z)


def test_faces_pairwise_interior_disjoint(ab_slope, ab_frame):
    patch = generate_patch(ab_slope, 5, frame=ab_frame)
    quads = []
    for face in patch.faces:
        quads.append([ab_frame.xy(c) for c in face_corners(face)])

    def separated(qa, qb):
        # separating axis test on the two convex quads, with slack for shared edges
        for quad in (qa, qb):
            n = len(quad)
            for t in range(n):
                ax, ay = quad[t]
                bx, by = quad[(t + 1) % n]
                nx, ny = by - ay, ax - bx
                da = [nx * x + ny * y for (x, y) in qa]
                db = [nx * x + ny * y for (x, y) in qb]
                if min(da) >= max(db) - 1e-9 or min(db) >= max(da) - 1e-9:
                    return True
        return False

    for a in range(len(quads)):
        for b in range(a + 1, len(quads)):
            assert separated(quads[a], quads[b])


def test_frequencies_approach_grassmann_ratios(ab_slope, ab_frame):
    patch = generate_patch(ab_slope, 20, frame=ab_frame)
    counts = tile_frequencies(patch)
    squares = counts[(1, 3)] + counts[(2, 4)]
    rhombi = sum(counts.values()) - squares
    assert abs(rhombi / squares - math.sqrt(2)) < 0.1 * math.sqrt(2)


def test_frequencies_permutation_consistent(rational_slope):
    patch = generate_patch(rational_slope, 8)
    counts = tile_frequencies(patch)
    perm = (2, 1, 3, 4)
    permuted = rational_slope.permuted_axes(perm)
    counts_p = tile_frequencies(generate_patch(permuted, 8))

    def relabel(pair):
        i, j = sorted((perm.index(pair[0]) + 1, perm.index(pair[1]) + 1))
        return (i, j)

    for pair in PAIRS:
        assert counts[pair] == counts_p[relabel(pair)]


def test_vertex_star_size(ab_patch, ab_frame):
    # interior vertices carry between 1 and 8 incident faces
    inner = [z for z in ab_patch.vertices if sum(x * x for x in ab_frame.xy(z)) < 36.0]
    assert inner
    for z in inner[:40]:
        star = vertex_star(ab_patch, z)
        assert 1 <= len(star) <= 8


def test_atlas_r0_is_vertex_stars_and_saturates(ab_slope, ab_frame):
    small = r_atlas(generate_patch(ab_slope, 16, frame=ab_frame), 0, frame=ab_frame)
    large = r_atlas(generate_patch(ab_slope, 22, frame=ab_frame), 0, frame=ab_frame)
    assert small == large  # saturation at moderate radius
    assert 10 <= len(small) <= 64


def test_atlas_monotone_in_r(ab_slope, ab_frame):
    patch = generate_patch(ab_slope, 16, frame=ab_frame)
    a0 = r_atlas(patch, 0, frame=ab_frame)
    a1 = r_atlas(patch, 1, frame=ab_frame)
    assert atlas_monotone_embeds(a0, a1)


def test_atlas_equal_across_offsets_small(ab_slope):
    other = ab_slope.with_offset((Fraction(7, 64), Fraction(9, 128), Fraction(3, 16), Fraction(11, 32)))
    atlases = []
    for s in (ab_slope, other):
        frame = PlaneFrame(s)
        patch = generate_patch(s, 20, frame=frame)
        atlases.append(r_atlas(patch, 1, frame=frame))
    assert atlases[0] == atlases[1]


def test_pattern_canonicalization():
    faces = [((3, 1, 0, 2), 1, 2), ((3, 1, 1, 2), 1, 3)]
    p = Pattern.from_faces(faces)
    assert ((0, 0, 0, 0), 1, 2) in p.faces
    shifted = Pattern.from_faces([((7, -1, 0, 5), 1, 2), ((7, -1, 1, 5), 1, 3)])
    assert p == shifted


def test_patch_json_shape(ab_patch):
    data = ab_patch.to_json()
    assert data["format"] == 1
    assert all(len(v) == 4 for v in data["vertices"])
    face = data["faces"][0]
    assert set(face) == {"base", "i", "j"}


def test_radius_zero_patch_is_tiny(ab_slope, ab_frame):
    patch = generate_patch(ab_slope, 0, frame=ab_frame)
    assert len(patch.vertices) <= 1
    assert patch.faces == ()
