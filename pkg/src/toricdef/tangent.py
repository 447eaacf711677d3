"""Graded tangent and obstruction dimensions.

Implements the edge-variable description of the degree -k tangent spaces,
the tangent space of the deformation base at the origin, and three routes to
the obstruction dimensions: the relation-space formula over the generator
sets E, the lattice span formula available for polygons, and the polygon
closed form driven by the width constants (n1, n2) and edge-length constants
(l1, l2).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt

from .conemonoid import HilbertBasis, dual_extreme_rays
from .linalg import (
    IntMatrix,
    lattice_intersection,
    rank_fraction_rows,
    rational_kernel_basis,
)
from .polytope import Polytope, UnsupportedDimensionError, dot, width

# the distinguished degree-one deformation variable lives on edge 1 (so the
# parameter T_{1,1} is identically zero throughout the pipeline)
U0_EDGE = 1


@dataclass(frozen=True)
class VkSpace:
    k: int
    dim: int
    basis: tuple[tuple[Fraction, ...], ...]  # coordinates (t_1k, ..., t_nk, s_k)


@dataclass(frozen=True)
class T2Profile:
    method: str
    dims: dict[int, int]
    n1: int | None = None
    n2: int | None = None
    l1: int | None = None
    l2: int | None = None


def vk_space(p: Polytope, k: int) -> VkSpace:
    """Solution space of the 2-face equations with t_i = s forced on short edges."""
    assert k >= 1
    n = p.n_edges
    ncols = n + 1  # t_1 .. t_n, s
    rows: list[list[Fraction]] = []
    for face in p.two_faces:
        for coord in range(p.dim):
            row = [Fraction(0)] * ncols
            for ei, sign in face:
                row[ei - 1] += sign * p.edges[ei - 1].vector[coord]
            rows.append(row)
    for ei, e in enumerate(p.edges):
        if e.length <= k - 1:
            row = [Fraction(0)] * ncols
            row[ei] = Fraction(1)
            row[n] = Fraction(-1)
            rows.append(row)
    if k == 1:
        row = [Fraction(0)] * ncols
        row[n] = Fraction(1)
        rows.append(row)
    basis = rational_kernel_basis(rows, ncols)
    return VkSpace(k=k, dim=len(basis), basis=tuple(basis))


def t1_dimension(p: Polytope, k: int) -> int:
    """dim of the degree -k tangent space: dim V_k minus the diagonal line."""
    return vk_space(p, k).dim - 1


def t1_profile(p: Polytope, kmax: int) -> dict[int, int]:
    return {k: t1_dimension(p, k) for k in range(1, kmax + 1)}


def t0b_basis(p: Polytope, k: int) -> VkSpace:
    """Degree-k tangent directions of the base at the origin.

    Coordinates (T_1k, ..., T_nk); variables on edges shorter than k are
    pinned to zero, and for k = 1 the distinguished variable on the u0 edge
    is zero as well.
    """
    assert k >= 1
    n = p.n_edges
    rows: list[list[Fraction]] = []
    for ei, e in enumerate(p.edges):
        if e.length < k:
            row = [Fraction(0)] * n
            row[ei] = Fraction(1)
            rows.append(row)
    if k == 1:
        row = [Fraction(0)] * n
        row[U0_EDGE - 1] = Fraction(1)
        rows.append(row)
    for face in p.two_faces:
        for coord in range(p.dim):
            row = [Fraction(0)] * n
            for ei, sign in face:
                e = p.edges[ei - 1]
                if e.length >= k:
                    row[ei - 1] += Fraction(sign * e.vector[coord], e.length)
            rows.append(row)
    basis = rational_kernel_basis(rows, n)
    return VkSpace(k=k, dim=len(basis), basis=tuple(basis))


@dataclass(frozen=True)
class Prop32Report:
    rows: tuple[tuple[int, int, int], ...]  # (k, dim T0B(k), dim T1(-k))
    ok: bool


def check_prop32(p: Polytope, kmax: int) -> Prop32Report:
    """Degreewise match of base tangent directions against T1 dimensions."""
    rows = []
    ok = True
    for k in range(1, kmax + 1):
        a = t0b_basis(p, k).dim
        b = t1_dimension(p, k)
        rows.append((k, a, b))
        ok = ok and a == b
    return Prop32Report(rows=tuple(rows), ok=ok)


# ---------------------------------------------------------------------------
# obstruction dimensions


def _relation_basis(columns: list[tuple[int, ...]]) -> list[tuple[Fraction, ...]]:
    """Basis of linear relations among the given vectors (over Q)."""
    if not columns:
        return []
    ncoords = len(columns[0])
    rows = [[Fraction(col[i]) for col in columns] for i in range(ncoords)]
    return rational_kernel_basis(rows, len(columns))


def t2_dimension_general(p: Polytope, hb: HilbertBasis, k: int) -> int:
    """Obstruction dimension in degree -k from relation spaces of E-sets.

    E_i collects the generators pairing < k against the vertex generator a^i;
    the dimension is ker(sum of relation spaces -> relations of E) modulo the
    span of edge-wise differences.
    """
    vecs = hb.as_vectors()
    averts = [v + (1,) for v in p.vertices]
    e_sets = [[j for j, e in enumerate(vecs) if dot(a, e) < k] for a in averts]
    offsets = []
    total = 0
    for es in e_sets:
        offsets.append(total)
        total += len(es)
    if total == 0:
        return 0

    ncoords = p.dim + 1
    rows: list[list[Fraction]] = []
    # each block is a relation among its E-set
    for i, es in enumerate(e_sets):
        for coord in range(ncoords):
            row = [Fraction(0)] * total
            for pos, j in enumerate(es):
                row[offsets[i] + pos] = Fraction(vecs[j][coord])
            rows.append(row)
    # the blocks sum to the zero relation on E
    for j in range(len(vecs)):
        row = [Fraction(0)] * total
        hit = False
        for i, es in enumerate(e_sets):
            if j in es:
                row[offsets[i] + es.index(j)] = Fraction(1)
                hit = True
        if hit:
            rows.append(row)
    kernel_dim = total - rank_fraction_rows(rows)

    image_rows: list[list[Fraction]] = []
    for e in p.edges:
        i1, i2 = e.tail - 1, e.head - 1
        common = [j for j in e_sets[i1] if j in e_sets[i2]]
        for rel in _relation_basis([vecs[j] for j in common]):
            row = [Fraction(0)] * total
            for pos, j in enumerate(common):
                row[offsets[i1] + e_sets[i1].index(j)] += rel[pos]
                row[offsets[i2] + e_sets[i2].index(j)] -= rel[pos]
            image_rows.append(row)
    image_dim = rank_fraction_rows(image_rows)
    return kernel_dim - image_dim


def _edge_perp_lattice(p: Polytope, e) -> tuple[tuple[int, ...], ...]:
    """Basis of {(c, m) : <a_tail, (c, m)> = <a_head, (c, m)> = 0} in Z^(d+1)."""
    from .linalg import integer_kernel_basis

    at = p.vertex(e.tail) + (1,)
    ah = p.vertex(e.head) + (1,)
    return integer_kernel_basis(IntMatrix.from_rows([at, ah]))


def t2_dimension_lattice3d(p: Polytope, hb: HilbertBasis, k: int) -> int:
    """Polygon-only lattice route to the obstruction dimension in degree -k.

    Numerator: intersection over edges of the spans generated by the edge
    perp sublattice together with (0, 1) (long edges) or the full lattice
    (short edges); for k = 1 the spans degenerate to the dual extreme rays.
    Denominator: span of {(c, eta(c)) : width(c) <= k - 1} plus (0, 1),
    enumerated inside a rigorous inradius box.
    """
    if p.dim != 2:
        raise UnsupportedDimensionError("lattice obstruction formula needs a polygon")
    rstar = (0,) * p.dim + (1,)
    full = tuple(tuple(1 if i == j else 0 for j in range(p.dim + 1)) for i in range(p.dim + 1))

    if k == 1:
        rays = [c + (h,) for c, h in dual_extreme_rays(p)]
        num: tuple = (rays[0],)
        for ray in rays[1:]:
            num = lattice_intersection(num, (ray,))
        den_rank = 0
    else:
        num = full
        for e in p.edges:
            if e.length >= k:
                span = _edge_perp_lattice(p, e) + (rstar,)
                num = lattice_intersection(num, span)
        den = [rstar]
        for c in _widths_below(p, k - 1):
            h = -min(dot(v, c) for v in p.vertices)
            den.append(c + (h,))
        den_rank = rank_fraction_rows([[Fraction(x) for x in v] for v in den])
    num_rank = rank_fraction_rows([[Fraction(x) for x in v] for v in num])
    return num_rank - den_rank


@lru_cache(maxsize=None)
def _inradius_sq(p: Polytope) -> Fraction:
    """Squared radius of a ball inside P centered at the vertex centroid."""
    nverts = len(p.vertices)
    z = [Fraction(sum(v[i] for v in p.vertices), nverts) for i in range(p.dim)]
    best = None
    for c, h in dual_extreme_rays(p):
        val = sum(zc * cc for zc, cc in zip(z, c)) + h
        d2 = Fraction(val * val, sum(x * x for x in c))
        best = d2 if best is None else min(best, d2)
    assert best is not None and best > 0, "centroid must be interior"
    return best


def _box_radius(p: Polytope, value: int) -> int:
    """Any direction c with width(c) <= value has |c|_2 <= value / (2 rho)."""
    if value <= 0:
        return 0
    bound_sq = Fraction(value * value, 4) / _inradius_sq(p)
    return isqrt(bound_sq.numerator // bound_sq.denominator) + 1


def _widths_below(p: Polytope, value: int) -> list[tuple[int, int]]:
    """All nonzero c with width(c) <= value (complete by the inradius bound)."""
    r = _box_radius(p, value)
    out = []
    for cx in range(-r, r + 1):
        for cy in range(-r, r + 1):
            if (cx, cy) == (0, 0):
                continue
            if width(p, (cx, cy)) <= value:
                out.append((cx, cy))
    return out


@lru_cache(maxsize=None)
def width_constants(p: Polytope) -> tuple[int, int]:
    """(n1, n2): smallest width, and smallest width bound over independent pairs."""
    if p.dim != 2:
        raise UnsupportedDimensionError("width constants are defined for polygons")
    seed = max(width(p, (1, 0)), width(p, (0, 1)))
    cands = sorted((width(p, c), c) for c in _widths_below(p, seed))
    n1 = cands[0][0]
    first_dir = cands[0][1]
    n2 = None
    for d, c in cands:
        if c[0] * first_dir[1] - c[1] * first_dir[0] != 0:
            n2 = d
            break
    assert n2 is not None, "independent pair must exist within the search box"
    return n1, n2


def length_constants(p: Polytope) -> tuple[int, int]:
    """(l1, l2): max edge length, max over independent pairs of the min length."""
    l1 = max(e.length for e in p.edges)
    l2 = 0
    for i, a in enumerate(p.edges):
        for b in p.edges[i + 1 :]:
            if a.primitive[0] * b.primitive[1] - a.primitive[1] * b.primitive[0] != 0:
                l2 = max(l2, min(a.length, b.length))
    return l1, l2


def t2_closed_form_value(l1: int, l2: int, n1: int, n2: int, k: int) -> int:
    if l2 < k <= l1 and k <= n1:
        return 1
    if k > l1 and n1 < k <= n2:
        return 1
    if k > l1 and k <= n1:
        return 2
    return 0


def t2_closed_form_3d(p: Polytope, kmax: int | None = None) -> T2Profile:
    """Polygon closed form for the obstruction dimensions, all degrees at once."""
    if p.dim != 2:
        raise UnsupportedDimensionError("closed form needs a polygon")
    n1, n2 = width_constants(p)
    l1, l2 = length_constants(p)
    assert n1 <= n2 and l1 >= l2
    top = kmax if kmax is not None else n2 + 1
    dims = {k: t2_closed_form_value(l1, l2, n1, n2, k) for k in range(1, top + 1)}
    return T2Profile(method="closedform3d", dims=dims, n1=n1, n2=n2, l1=l1, l2=l2)


def t2_profile(p: Polytope, hb: HilbertBasis, method: str, kmax: int) -> T2Profile:
    if method == "general":
        return T2Profile(method=method, dims={k: t2_dimension_general(p, hb, k) for k in range(1, kmax + 1)})
    if method == "lattice3d":
        return T2Profile(method=method, dims={k: t2_dimension_lattice3d(p, hb, k) for k in range(1, kmax + 1)})
    if method == "closedform3d":
        return t2_closed_form_3d(p, kmax)
    raise ValueError(f"unknown obstruction method {method!r}")


def default_kmax(p: Polytope) -> int:
    """Degree bound for reports: n2 + 2 for polygons, 6 otherwise."""
    if p.dim == 2:
        return width_constants(p)[1] + 2
    return 6
