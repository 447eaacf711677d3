"""Shared test/demo polytopes and the deterministic random polygon sampler."""

from __future__ import annotations

import random

from .polytope import Polytope, polygon_from_vertices

# The pentagon with edge lengths (1, 1, 2, 2, 2): listing the vertices from
# (2, 2) puts the two unit edges first, so edge 1 (the u0 edge) is never
# split by a Minkowski summand and the printed equations use the customary
# labels.
HOUSE_VERTICES = [(2, 2), (1, 3), (0, 2), (0, 0), (2, 0)]


def house() -> Polytope:
    return polygon_from_vertices(HOUSE_VERTICES)


def unit_triangle() -> Polytope:
    return polygon_from_vertices([(0, 0), (1, 0), (0, 1)])


def interval(m: int) -> Polytope:
    return polygon_from_vertices([(0,), (m,)])


def square(side: int = 2) -> Polytope:
    return polygon_from_vertices([(0, 0), (side, 0), (side, side), (0, side)])


def polytope_file_text(verts, dim: int = 2) -> str:
    lines = [f"dim {dim}"]
    for v in verts:
        lines.append("vertex " + " ".join(str(x) for x in v))
    return "\n".join(lines) + "\n"


def cube_file_text() -> str:
    """Explicit 1-skeleton input for the unit cube (dim-3 file format demo)."""
    verts = [
        (0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0),
        (0, 0, 1), (1, 0, 1), (1, 1, 1), (0, 1, 1),
    ]
    edges = [
        (1, 2), (2, 3), (3, 4), (4, 1),
        (5, 6), (6, 7), (7, 8), (8, 5),
        (1, 5), (2, 6), (3, 7), (4, 8),
    ]
    faces = [
        (1, 2, 3, 4),
        (5, 6, 7, 8),
        (1, 10, -5, -9),
        (2, 11, -6, -10),
        (3, 12, -7, -11),
        (4, 9, -8, -12),
    ]
    lines = ["dim 3"]
    lines += ["vertex " + " ".join(map(str, v)) for v in verts]
    lines += [f"edge {t} {h}" for t, h in edges]
    lines += ["face2 " + " ".join(map(str, f)) for f in faces]
    return "\n".join(lines) + "\n"


def tetrahedron_file_text() -> str:
    """Unit tetrahedron with its Hilbert basis supplied in the input."""
    verts = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]
    edges = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]
    faces = [
        (1, 4, -2),  # z = 0 face: v1 -> v2 -> v3 -> v1
        (1, 5, -3),  # y = 0 face: v1 -> v2 -> v4 -> v1
        (2, 6, -3),  # x = 0 face: v1 -> v3 -> v4 -> v1
        (4, 6, -5),  # slanted face: v2 -> v3 -> v4 -> v2
    ]
    lines = ["dim 3"]
    lines += ["vertex " + " ".join(map(str, v)) for v in verts]
    lines += [f"edge {t} {h}" for t, h in edges]
    lines += ["face2 " + " ".join(map(str, f)) for f in faces]
    lines += [
        "hilbert",
        "gen 1 0 0 0",
        "gen 0 1 0 0",
        "gen 0 0 1 0",
        "gen -1 -1 -1 1",
    ]
    return "\n".join(lines) + "\n"


RANDOM_POLYGON_SEED = 20260810


def random_polygons(count: int = 20, seed: int = RANDOM_POLYGON_SEED, max_vertices: int = 6,
                    box: int = 3) -> list[Polytope]:
    """Deterministic sample of convex lattice polygons with small coordinates."""
    rng = random.Random(seed)
    seen = set()
    out: list[Polytope] = []
    while len(out) < count:
        npts = rng.randint(3, 8)
        pts = {(rng.randint(-box, box), rng.randint(-box, box)) for _ in range(npts)}
        if len(pts) < 3:
            continue
        from .polytope import _convex_hull_ccw

        hull = _convex_hull_ccw(sorted(pts))
        if not 3 <= len(hull) <= max_vertices:
            continue
        key = tuple(hull)
        if key in seen:
            continue
        seen.add(key)
        out.append(polygon_from_vertices(hull))
    return out
