"""Lattice polytopes with oriented edges, 2-faces and 1-skeleton paths.

A polytope is stored combinatorially: integer vertices (first vertex at the
origin), oriented edges with primitive direction and lattice length, and
2-faces as signed edge cycles.  Polygons are built from their vertex list;
in dimension >= 3 the edge and 2-face data must be supplied explicitly (no
convex hull computation is attempted there).

Vertex and edge indices are 1-based throughout the public API, matching the
input file format.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd


class PolytopeError(ValueError):
    """Invalid polytope input (validation failure)."""


class UnsupportedDimensionError(ValueError):
    """Operation not available in this dimension without extra input data."""


@dataclass(frozen=True)
class Edge:
    tail: int  # 1-based vertex index
    head: int
    vector: tuple[int, ...]  # head - tail
    primitive: tuple[int, ...]
    length: int


@dataclass(frozen=True)
class Path:
    """Edge-step vector mu in {-1,0,+1}^n together with its endpoints."""

    steps: tuple[int, ...]
    start: int
    end: int


@dataclass(frozen=True)
class Polytope:
    dim: int
    vertices: tuple[tuple[int, ...], ...]
    edges: tuple[Edge, ...]
    two_faces: tuple[tuple[tuple[int, int], ...], ...]  # ((edge index, sign), ...)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def vertex(self, i: int) -> tuple[int, ...]:
        return self.vertices[i - 1]

    def edge_lengths(self) -> tuple[int, ...]:
        return tuple(e.length for e in self.edges)

    def is_polygon_cycle(self) -> bool:
        """True when the edges are the boundary cycle v1 -> v2 -> ... -> v1."""
        n = len(self.vertices)
        if self.dim != 2 or len(self.edges) != n:
            return False
        return all(
            e.tail == i + 1 and e.head == (i + 1) % n + 1 for i, e in enumerate(self.edges)
        )


def dot(a, b) -> int:
    return sum(x * y for x, y in zip(a, b))


def _vec_sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _primitive(v: tuple[int, ...]) -> tuple[tuple[int, ...], int]:
    g = 0
    for x in v:
        g = gcd(g, abs(x))
    if g == 0:
        raise PolytopeError("zero edge vector")
    return tuple(x // g for x in v), g


def _cross2(a, b) -> int:
    return a[0] * b[1] - a[1] * b[0]


def _convex_hull_ccw(points):
    """Monotone-chain hull, counterclockwise, collinear points dropped."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def half(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and _cross2(_vec_sub(out[-1], out[-2]), _vec_sub(p, out[-2])) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = half(pts)
    upper = half(reversed(pts))
    return lower[:-1] + upper[:-1]


def polygon_from_vertices(verts) -> Polytope:
    """Build a polygon (or a 1-dimensional interval) from integer points.

    The vertex cycle starts at the first input point and runs counterclockwise;
    all vertices are translated so the first one sits at the origin.  Interval
    input (1-coordinate points) is accepted and yields a single edge with no
    2-faces.
    """
    verts = [tuple(int(x) for x in v) for v in verts]
    if not verts:
        raise PolytopeError("empty vertex list")
    width = {len(v) for v in verts}
    if len(width) != 1:
        raise PolytopeError("mixed coordinate lengths")
    (d,) = width

    if d == 1:
        lo, hi = min(v[0] for v in verts), max(v[0] for v in verts)
        if lo == hi:
            raise PolytopeError("degenerate interval (single point)")
        m = hi - lo
        return Polytope(
            dim=1,
            vertices=((0,), (m,)),
            edges=(Edge(1, 2, (m,), (1,), m),),
            two_faces=(),
        )

    if d != 2:
        raise PolytopeError("polygon input must be 1- or 2-dimensional points")
    if len(verts) < 3:
        raise PolytopeError("a polygon needs at least 3 vertices")

    hull = _convex_hull_ccw(verts)
    if len(hull) < 3:
        raise PolytopeError(f"degenerate (collinear) input near vertex {verts[0]}")
    hull_set = set(hull)
    for v in verts:
        if v not in hull_set:
            raise PolytopeError(f"vertex {v} is not a vertex of the convex hull")
    if len(set(verts)) != len(hull):
        raise PolytopeError("duplicate vertices in input")

    start = hull.index(verts[0])
    cycle = hull[start:] + hull[:start]
    origin = cycle[0]
    cycle = [_vec_sub(v, origin) for v in cycle]

    n = len(cycle)
    edges = []
    for i in range(n):
        vec = _vec_sub(cycle[(i + 1) % n], cycle[i])
        prim, ell = _primitive(vec)
        edges.append(Edge(i + 1, (i + 1) % n + 1, vec, prim, ell))
    face = tuple((i + 1, 1) for i in range(n))
    p = Polytope(dim=2, vertices=tuple(cycle), edges=tuple(edges), two_faces=(face,))
    validate_polytope(p)
    return p


def validate_polytope(p: Polytope) -> None:
    if any(x != 0 for x in p.vertices[0]):
        raise PolytopeError("first vertex must be the origin")
    for i, e in enumerate(p.edges):
        if e.vector != _vec_sub(p.vertex(e.head), p.vertex(e.tail)):
            raise PolytopeError(f"edge {i + 1} vector does not match its endpoints")
        prim, ell = _primitive(e.vector)
        if (prim, ell) != (e.primitive, e.length):
            raise PolytopeError(f"edge {i + 1} primitive/length data inconsistent")
    for fi, face in enumerate(p.two_faces):
        total = [0] * p.dim
        for ei, sign in face:
            if sign not in (-1, 1):
                raise PolytopeError(f"2-face {fi + 1} has a sign other than +-1")
            if not 1 <= ei <= len(p.edges):
                raise PolytopeError(f"2-face {fi + 1} references unknown edge {ei}")
            vec = p.edges[ei - 1].vector
            total = [t + sign * x for t, x in zip(total, vec)]
        if any(total):
            raise PolytopeError(f"2-face {fi + 1} signed edge sum is nonzero")
    # connectivity of the 1-skeleton
    if p.vertices:
        seen = {1}
        stack = [1]
        adj: dict[int, list[int]] = {}
        for e in p.edges:
            adj.setdefault(e.tail, []).append(e.head)
            adj.setdefault(e.head, []).append(e.tail)
        while stack:
            v = stack.pop()
            for w in adj.get(v, ()):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != len(p.vertices):
            raise PolytopeError("1-skeleton is not connected")


@dataclass(frozen=True)
class PolytopeFile:
    """Parsed polytope input file: the polytope plus optional stanzas."""

    polytope: Polytope
    hilbert_gens: tuple[tuple[tuple[int, ...], int], ...] | None = None
    decompositions: tuple[tuple[tuple[int, ...], ...], ...] | None = None


def parse_polytope_file(text: str) -> PolytopeFile:
    dim = None
    vertices: list[tuple[int, ...]] = []
    edge_pairs: list[tuple[int, int]] = []
    faces: list[tuple[tuple[int, int], ...]] = []
    hilbert: list[tuple[tuple[int, ...], int]] = []
    summand_entries: dict[int, dict[int, int]] = {}
    stanza = None
    saw_hilbert = False
    saw_minkowski = False

    def err(lineno, msg):
        raise PolytopeError(f"line {lineno}: {msg}")

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        kw = tok[0]
        try:
            if kw == "dim":
                dim = int(tok[1])
            elif kw == "vertex":
                if dim is None:
                    err(lineno, "vertex before dim")
                if len(tok) != dim + 1:
                    err(lineno, f"expected {dim} coordinates")
                vertices.append(tuple(int(x) for x in tok[1:]))
            elif kw == "edge":
                edge_pairs.append((int(tok[1]), int(tok[2])))
            elif kw == "face2":
                entries = []
                for t in tok[1:]:
                    ei = int(t)
                    if ei == 0:
                        err(lineno, "edge index 0 in face2")
                    entries.append((abs(ei), 1 if ei > 0 else -1))
                faces.append(tuple(entries))
            elif kw == "hilbert":
                stanza = "hilbert"
                saw_hilbert = True
            elif kw == "minkowski":
                stanza = "minkowski"
                saw_minkowski = True
            elif kw == "gen":
                if stanza != "hilbert":
                    err(lineno, "gen line outside hilbert stanza")
                if dim is None or len(tok) != dim + 2:
                    err(lineno, "expected gen <c coordinates> <eta>")
                hilbert.append((tuple(int(x) for x in tok[1:-1]), int(tok[-1])))
            elif kw == "summand":
                if stanza != "minkowski":
                    err(lineno, "summand line outside minkowski stanza")
                if len(tok) != 6 or tok[2] != "edge" or tok[4] != "length":
                    err(lineno, "expected summand <k> edge <i> length <n>")
                summand_entries.setdefault(int(tok[1]), {})[int(tok[3])] = int(tok[5])
            else:
                err(lineno, f"unknown keyword {kw!r}")
        except (IndexError, ValueError) as exc:
            if isinstance(exc, PolytopeError):
                raise
            err(lineno, f"malformed line: {raw.strip()!r}")

    if dim is None:
        raise PolytopeError("missing dim line")
    if not vertices:
        raise PolytopeError("no vertices")

    if not edge_pairs:
        if dim > 2:
            raise PolytopeError("dim >= 3 input requires explicit edge/face2 lines")
        p = polygon_from_vertices(vertices)
    else:
        origin = vertices[0]
        shifted = [_vec_sub(v, origin) for v in vertices]
        edges = []
        for t, h in edge_pairs:
            if not (1 <= t <= len(shifted) and 1 <= h <= len(shifted)):
                raise PolytopeError(f"edge ({t},{h}) references unknown vertex")
            vec = _vec_sub(shifted[h - 1], shifted[t - 1])
            prim, ell = _primitive(vec)
            edges.append(Edge(t, h, vec, prim, ell))
        p = Polytope(dim=dim, vertices=tuple(shifted), edges=tuple(edges), two_faces=tuple(faces))
        validate_polytope(p)

    decs = None
    if saw_minkowski:
        n_summands = max(summand_entries, default=-1) + 1
        if sorted(summand_entries) != list(range(n_summands)):
            raise PolytopeError("minkowski summand indices must be 0..m")
        rows = []
        for k in range(n_summands):
            row = [0] * p.n_edges
            for ei, n_ik in summand_entries[k].items():
                if not 1 <= ei <= p.n_edges:
                    raise PolytopeError(f"summand {k} references unknown edge {ei}")
                row[ei - 1] = n_ik
            rows.append(tuple(row))
        decs = (tuple(rows),)

    return PolytopeFile(
        polytope=p,
        hilbert_gens=tuple(hilbert) if saw_hilbert else None,
        decompositions=decs,
    )


def load_polytope(text: str) -> Polytope:
    """Parse and validate a polytope file, ignoring optional stanzas."""
    return parse_polytope_file(text).polytope


# ---------------------------------------------------------------------------
# paths through the 1-skeleton


def min_vertex(p: Polytope, c) -> int:
    """Smallest 1-based index among vertices minimizing <v, c>."""
    vals = [dot(v, c) for v in p.vertices]
    m = min(vals)
    return vals.index(m) + 1


def width(p: Polytope, c) -> int:
    vals = [dot(v, c) for v in p.vertices]
    return max(vals) - min(vals)


@lru_cache(maxsize=None)
def _adjacency(p: Polytope) -> dict[int, tuple[tuple[int, int, int], ...]]:
    """vertex -> sorted strides (edge index 1-based, neighbor, mu sign)."""
    adj: dict[int, list[tuple[int, int, int]]] = {}
    for idx, e in enumerate(p.edges, start=1):
        adj.setdefault(e.tail, []).append((idx, e.head, 1))
        adj.setdefault(e.head, []).append((idx, e.tail, -1))
    return {v: tuple(sorted(strides)) for v, strides in adj.items()}


def _steps_from_strides(p: Polytope, strides, start: int, end: int) -> Path:
    steps = [0] * p.n_edges
    for ei, mu in strides:
        assert steps[ei - 1] == 0, "edge strode twice"
        steps[ei - 1] = mu
    path = Path(steps=tuple(steps), start=start, end=end)
    total = [0] * p.dim
    for ei, mu in strides:
        total = [t + mu * x for t, x in zip(total, p.edges[ei - 1].vector)]
    assert tuple(total) == _vec_sub(p.vertex(end), p.vertex(start)), "path endpoint mismatch"
    return path


def _bfs_path(p: Polytope, start: int, goal: int, allowed) -> list[tuple[int, int]]:
    """Shortest path start -> goal; ties broken by smallest edge index."""
    if start == goal:
        return []
    adj = _adjacency(p)
    prev: dict[int, tuple[int, int, int]] = {}
    frontier = [start]
    seen = {start}
    while frontier and goal not in prev:
        nxt = []
        for v in frontier:
            for ei, w, mu in adj.get(v, ()):
                if w in seen or not allowed(v, w, ei, mu):
                    continue
                seen.add(w)
                prev[w] = (v, ei, mu)
                nxt.append(w)
        frontier = nxt
    if goal not in prev:
        raise AssertionError("no path found in 1-skeleton")
    strides = []
    v = goal
    while v != start:
        u, ei, mu = prev[v]
        strides.append((ei, mu))
        v = u
    return list(reversed(strides))


@lru_cache(maxsize=None)
def path_lambda(p: Polytope, v: int) -> Path:
    """Deterministic path from vertex 1 to vertex v.

    Polygons walk the boundary cycle taking the shorter arc (ties go
    counterclockwise); other polytopes use breadth-first search with
    smallest-edge-index preference.
    """
    if v == 1:
        return Path(steps=(0,) * p.n_edges, start=1, end=1)
    if p.is_polygon_cycle() or p.dim == 1:
        n = len(p.vertices)
        fwd = v - 1
        bwd = n - v + 1
        if fwd <= bwd:
            strides = [(i, 1) for i in range(1, v)]
        else:
            strides = [(i, -1) for i in range(n, v - 1, -1)]
        return _steps_from_strides(p, strides, 1, v)
    return _steps_from_strides(p, _bfs_path(p, 1, v, lambda *_: True), 1, v)


def path_mu(p: Polytope, v: int, c) -> Path:
    """Path from v to min_vertex(p, c) whose strides never increase <., c>.

    Greedy descent: always take the smallest-index strictly decreasing edge;
    level strides (<d, c> = 0) are used only once no strict descent remains,
    via BFS inside the minimizing face.
    """
    return _path_mu_cached(p, v, tuple(c))


@lru_cache(maxsize=None)
def _path_mu_cached(p: Polytope, v: int, c: tuple) -> Path:
    goal = min_vertex(p, c)
    adj = _adjacency(p)
    strides: list[tuple[int, int]] = []
    cur = v
    while True:
        best = None
        for ei, w, mu in adj.get(cur, ()):
            if dot(p.vertex(w), c) < dot(p.vertex(cur), c):
                best = (ei, w, mu)
                break
        if best is None:
            break
        strides.append((best[0], best[2]))
        cur = best[1]
    if cur != goal:
        level = _bfs_path(
            p, cur, goal, lambda a, b, ei, mu: dot(p.vertex(b), c) == dot(p.vertex(a), c)
        )
        strides.extend(level)
    path = _steps_from_strides(p, strides, v, goal)
    for ei, mu in enumerate(path.steps, start=1):
        assert mu * dot(p.edges[ei - 1].vector, c) <= 0, "mu-path sign condition violated"
    return path
