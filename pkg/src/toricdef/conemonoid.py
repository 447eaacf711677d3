"""Monoid data of the cone over a lattice polytope.

For a polytope P at height one, the dual monoid S consists of all integer
pairs (c, h) with <v, c> + h >= 0 at every vertex v.  This module computes
the support function eta, its path-refined lift eta_tilde (a functional in
the edge variables t_i), the Hilbert basis of S, and the unique boundary +
edge-part decomposition of sums of basis elements that underlies the
flatness of the deformation family.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product

from .linalg import IntMatrix, rational_kernel_basis, rational_rank
from .polytope import (
    Polytope,
    PolytopeError,
    UnsupportedDimensionError,
    dot,
    min_vertex,
    path_lambda,
    path_mu,
)


@dataclass(frozen=True)
class TFunctional:
    """Integer coefficient vector (a_1, ..., a_n) representing sum a_i t_i.

    Coefficient vectors are path-dependent; two vectors represent the same
    functional iff they agree on the edge-relation space T(P), which is what
    `functional_equal` tests.
    """

    coeffs: tuple[int, ...]

    def __add__(self, other: "TFunctional") -> "TFunctional":
        return TFunctional(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "TFunctional") -> "TFunctional":
        return TFunctional(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def scale(self, k: int) -> "TFunctional":
        return TFunctional(tuple(k * a for a in self.coeffs))

    def is_zero_vector(self) -> bool:
        return not any(self.coeffs)


def deg(f: TFunctional) -> int:
    """Degree map sending every t_i to 1."""
    return sum(f.coeffs)


@lru_cache(maxsize=None)
def tspace_basis(p: Polytope) -> tuple[tuple[Fraction, ...], ...]:
    """Q-basis of T(P) = {t : sum_i sign * t_i * d^i = 0 over each 2-face}."""
    n = p.n_edges
    rows = []
    for face in p.two_faces:
        for coord in range(p.dim):
            row = [Fraction(0)] * n
            for ei, sign in face:
                row[ei - 1] += sign * p.edges[ei - 1].vector[coord]
            rows.append(row)
    return tuple(rational_kernel_basis(rows, n))


def functional_signature(p: Polytope, f: TFunctional) -> tuple[Fraction, ...]:
    """Values of the functional on the canonical basis of T(P)."""
    return tuple(sum(Fraction(a) * t for a, t in zip(f.coeffs, basis_vec)) for basis_vec in tspace_basis(p))


def functional_equal(p: Polytope, f: TFunctional, g: TFunctional) -> bool:
    return functional_signature(p, f) == functional_signature(p, g)


def eta(p: Polytope, c) -> int:
    """Support value -min_v <v, c>."""
    return -min(dot(v, c) for v in p.vertices)


def eta_tilde(p: Polytope, c) -> TFunctional:
    """Coefficient vector of eta(c) refined along the canonical path to v(c).

    Walking the canonical path from vertex 1 to the minimizing vertex, each
    stride of edge i with orientation mu contributes -mu * <d^i, c> to the
    coefficient of t_i; the total degree recovers eta(c).
    """
    c = tuple(c)
    lam = path_lambda(p, min_vertex(p, c))
    coeffs = tuple(-mu * dot(e.vector, c) for mu, e in zip(lam.steps, p.edges))
    return TFunctional(coeffs)


# ---------------------------------------------------------------------------
# Hilbert basis


@dataclass(frozen=True)
class HilbertBasis:
    """Generators of S: the irreducible elements plus the distinguished (0, 1).

    `elements` holds the pairs (c_i, eta(c_i)) sorted lexicographically; the
    height-one element rstar = (0, 1) is kept separately.  It is a generator
    in its own right only when irreducible (it is reducible exactly for the
    smooth fixtures), but it is always carried along as a distinguished
    member of the generating set.
    """

    elements: tuple[tuple[tuple[int, ...], int], ...]
    dim: int

    @property
    def r(self) -> int:
        return len(self.elements)

    @property
    def rstar(self) -> tuple[tuple[int, ...], int]:
        return ((0,) * self.dim, 1)

    def with_rstar(self) -> tuple[tuple[tuple[int, ...], int], ...]:
        return self.elements + (self.rstar,)

    def as_vectors(self) -> list[tuple[int, ...]]:
        """All generators flattened to (c..., h) vectors, rstar last."""
        return [c + (h,) for c, h in self.with_rstar()]


def cone_pairings(p: Polytope, elem) -> list[int]:
    """<a^i, (c, h)> = <v^i, c> + h over all vertices."""
    c, h = elem
    return [dot(v, c) + h for v in p.vertices]


def in_dual_cone(p: Polytope, elem) -> bool:
    return all(x >= 0 for x in cone_pairings(p, elem))


def dual_extreme_rays(p: Polytope) -> list[tuple[tuple[int, ...], int]]:
    """Primitive generators of the extreme rays of the dual cone.

    One ray per facet of the cone over P: per edge of a polygon, per vertex
    of an interval.  Rays come back in the boundary order of P, which is also
    their cyclic order around the dual cone.
    """
    if p.dim == 1:
        m = p.vertices[1][0]
        return [((1,), 0), ((-1,), m)]
    if p.dim != 2:
        raise UnsupportedDimensionError("extreme rays are built in for dim <= 2 only")
    rays = []
    for e in p.edges:
        px, py = e.primitive
        c = (-py, px)
        tail = p.vertex(e.tail)
        if any(dot(v, c) < dot(tail, c) for v in p.vertices):
            c = (py, -px)
        rays.append((c, -min(dot(v, c) for v in p.vertices)))
    return rays


def _parallelepiped_points(gens: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    """Lattice points of {sum l_i g_i : 0 <= l_i < 1} via exact box scan."""
    k = len(gens)
    dim = len(gens[0])
    corners = []
    for mask in product((0, 1), repeat=k):
        corners.append(tuple(sum(m * g[i] for m, g in zip(mask, gens)) for i in range(dim)))
    los = [min(c[i] for c in corners) for i in range(dim)]
    his = [max(c[i] for c in corners) for i in range(dim)]
    # solve x = sum l_i g_i exactly: columns of G are the generators
    cols = [list(g) for g in gens]
    out = []
    for x in product(*[range(lo, hi + 1) for lo, hi in zip(los, his)]):
        coeffs = _solve_fraction(cols, x)
        if coeffs is not None and all(0 <= l < 1 for l in coeffs):
            out.append(tuple(x))
    return out


def _solve_fraction(cols, target):
    """Solve sum_i l_i * cols[i] = target over Q; None when inconsistent."""
    k = len(cols)
    rows = [[Fraction(cols[j][i]) for j in range(k)] + [Fraction(target[i])] for i in range(len(target))]
    pivots = []
    rank = 0
    for col in range(k):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = 1 / rows[rank][col]
        rows[rank] = [x * inv for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        pivots.append(col)
        rank += 1
    for i in range(rank, len(rows)):
        if rows[i][k] != 0:
            return None
    if rank < k:
        return None  # generators dependent; caller guarantees independence
    sol = [Fraction(0)] * k
    for r, c in enumerate(pivots):
        sol[c] = rows[r][k]
    return sol


def _is_reducible(p: Polytope, elem, pool) -> bool:
    c, h = elem
    vec = c + (h,)
    for g in pool:
        gv = g[0] + (g[1],)
        if gv == vec or not any(gv):
            continue
        rest = tuple(a - b for a, b in zip(vec, gv))
        if any(rest) and in_dual_cone(p, (rest[:-1], rest[-1])):
            return True
    return False


def hilbert_basis(p: Polytope, candidates=None) -> HilbertBasis:
    """Minimal generators of S, with (0, 1) adjoined as distinguished element.

    Built in: dimension <= 2, by collecting the dual extreme rays and all
    lattice points of the fundamental parallelepipeds of a fan triangulation
    (every point of S splits as a nonnegative ray combination plus one such
    parallelepiped point, so the collection generates), then discarding the
    reducible ones.  In higher dimension a candidate list must be supplied;
    it is validated for irreducibility and degree-bounded generation.
    """
    if candidates is not None:
        return _validated_basis(p, tuple((tuple(c), int(h)) for c, h in candidates))
    return _builtin_hilbert_basis(p)


@lru_cache(maxsize=None)
def _builtin_hilbert_basis(p: Polytope) -> HilbertBasis:
    if p.dim > 2:
        raise UnsupportedDimensionError(
            "Hilbert basis is built in for dim <= 2; supply a hilbert stanza in the input"
        )
    rays = dual_extreme_rays(p)
    ray_vecs = [c + (h,) for c, h in rays]
    pool = {tuple(v) for v in ray_vecs}
    if p.dim == 1:
        pieces = [ray_vecs]
    else:
        pieces = [[ray_vecs[0], ray_vecs[i], ray_vecs[i + 1]] for i in range(1, len(ray_vecs) - 1)]
    for gens in pieces:
        for pt in _parallelepiped_points(gens):
            if any(pt) and in_dual_cone(p, (pt[:-1], pt[-1])):
                pool.add(pt)
    elems = [(v[:-1], v[-1]) for v in pool]
    rstar = ((0,) * p.dim, 1)
    irreducible = [e for e in elems if e != rstar and not _is_reducible(p, e, elems)]
    for c, h in irreducible:
        assert h == eta(p, c), "non-distinguished generator off the support height"
    return HilbertBasis(
        elements=tuple(sorted(irreducible, key=lambda e: e[0] + (e[1],))), dim=p.dim
    )


def _validated_basis(p: Polytope, candidates) -> HilbertBasis:
    rstar = ((0,) * p.dim, 1)
    elems = []
    for c, h in candidates:
        c = tuple(int(x) for x in c)
        elem = (c, int(h))
        if elem == rstar:
            continue
        if not in_dual_cone(p, elem):
            raise PolytopeError(f"supplied generator {elem} lies outside the dual cone")
        if h != eta(p, c):
            raise PolytopeError(f"supplied generator {elem} has wrong height (expected {eta(p, c)})")
        elems.append(elem)
    pool = elems + [rstar]
    for e in elems:
        if _is_reducible(p, e, pool):
            raise PolytopeError(f"supplied generator {e} is reducible")
    hb = HilbertBasis(elements=tuple(sorted(elems, key=lambda e: e[0] + (e[1],))), dim=p.dim)
    bound = 3
    for pt in enumerate_dual_points(p, bound):
        if decompose_over(p, hb, pt) is None:
            raise PolytopeError(f"supplied generators do not generate {pt}")
    return hb


def enumerate_dual_points(p: Polytope, bound: int) -> list[tuple[int, ...]]:
    """All nonzero (c, h) with 0 <= <a^i, (c, h)> <= bound at every vertex.

    This is the brute-force box used as the generation oracle: c is pinned
    by its pairings with a spanning set of vertices, each in [-bound, bound].
    """
    span: list[tuple[int, ...]] = []
    for v in p.vertices:
        if rational_rank(IntMatrix.from_rows(list(span) + [list(v)])) > len(span):
            span.append(tuple(v))
        if len(span) == p.dim:
            break
    assert len(span) == p.dim, "vertices do not span the ambient space"
    out = []
    for ys in product(range(-bound, bound + 1), repeat=p.dim):
        c = _solve_pairings(span, ys)
        if c is None:
            continue
        for h in range(0, bound + 1):
            elem = (c, h)
            pair = cone_pairings(p, elem)
            if all(0 <= x <= bound for x in pair) and (any(c) or h):
                out.append(c + (h,))
    return sorted(set(out))


def _solve_pairings(span, ys):
    """Integer c with <span[j], c> = ys[j]; None when non-integral/singular."""
    dim = len(span)
    rows = [[Fraction(span[j][i]) for i in range(dim)] + [Fraction(ys[j])] for j in range(dim)]
    rank = 0
    pivots = []
    for col in range(dim):
        piv = next((i for i in range(rank, dim) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = 1 / rows[rank][col]
        rows[rank] = [x * inv for x in rows[rank]]
        for i in range(dim):
            if i != rank and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        pivots.append(col)
        rank += 1
    if rank < dim:
        return None
    sol = [Fraction(0)] * dim
    for r, c in enumerate(pivots):
        sol[c] = rows[r][dim]
    if any(s.denominator != 1 for s in sol):
        return None
    return tuple(int(s) for s in sol)


def decompose_over(p: Polytope, hb: HilbertBasis, vec) -> dict | None:
    """Express vec = (c..., h) as an N-combination of the generators, or None.

    Depth-first with memoization; the pairing degree strictly decreases on
    every subtraction, so the search is finite.
    """
    gens = hb.as_vectors()
    memo: dict[tuple[int, ...], dict | None] = {}

    def rec(v):
        if not any(v):
            return {}
        if v in memo:
            return memo[v]
        memo[v] = None
        for gi, g in enumerate(gens):
            rest = tuple(a - b for a, b in zip(v, g))
            if in_dual_cone(p, (rest[:-1], rest[-1])):
                sub = rec(rest)
                if sub is not None:
                    out = dict(sub)
                    out[gi] = out.get(gi, 0) + 1
                    memo[v] = out
                    break
        return memo[v]

    return rec(tuple(vec))


# ---------------------------------------------------------------------------
# free-pair decomposition


@dataclass(frozen=True)
class FreePairDecomposition:
    """Unique splitting of sum_j k_j * s~_j into edge part plus boundary part."""

    k: tuple[int, ...]
    boundary_c: tuple[int, ...]
    boundary_eta_tilde: TFunctional
    lam_tilde: TFunctional
    lam: int


def free_pair_decompose(p: Polytope, hb: HilbertBasis, k) -> FreePairDecomposition:
    """Decompose sum k_j s~_j as (0, lam_tilde) + (c, eta_tilde(c)).

    The edge part is computed stride by stride from the canonical descent
    paths out of the minimizing vertex of c, so every coefficient is a
    nonnegative multiple of the corresponding edge length.
    """
    k = tuple(int(x) for x in k)
    assert len(k) == hb.r, "exponent tuple must match the non-distinguished generators"
    cs = [c for c, _ in hb.elements]
    c_total = tuple(sum(kj * cj[i] for kj, cj in zip(k, cs)) for i in range(p.dim))
    vc = min_vertex(p, c_total)
    coeffs = [0] * p.n_edges
    for kj, cj in zip(k, cs):
        if kj == 0:
            continue
        mu = path_mu(p, vc, cj)
        for ei, step in enumerate(mu.steps):
            if step:
                coeffs[ei] += -kj * step * dot(p.edges[ei].vector, cj)
    lam_tilde = TFunctional(tuple(coeffs))
    for ei, a in enumerate(coeffs):
        assert a >= 0 and a % p.edges[ei].length == 0, "edge part must be a multiple of the length"
    lam = sum(coeffs)
    eta_k = sum(kj * eta(p, cj) for kj, cj in zip(k, cs)) - eta(p, c_total)
    assert lam == eta_k, "edge-part degree must equal the support defect"
    return FreePairDecomposition(
        k=k,
        boundary_c=c_total,
        boundary_eta_tilde=eta_tilde(p, c_total),
        lam_tilde=lam_tilde,
        lam=lam,
    )


def boundary_representation(p: Polytope, hb: HilbertBasis, c) -> tuple[int, ...]:
    """Deterministic exponents b with sum b_j (c_j, eta(c_j)) = (c, eta(c)).

    Greedy over the lexicographically sorted generators, subtracting the
    largest multiple that stays in the dual cone; a depth-first fallback
    covers the rare greedy dead ends.  The distinguished element (0, 1) is
    never used (the target height always balances without it).
    """
    c = tuple(c)
    target = c + (eta(p, c),)
    assert in_dual_cone(p, (c, eta(p, c))), "boundary representation needs (c, eta(c)) in S"
    gens = [cj + (hj,) for cj, hj in hb.elements]
    b = [0] * len(gens)
    rem = target
    progressed = True
    while any(rem) and progressed:
        progressed = False
        for gi, g in enumerate(gens):
            q = _max_multiple(p, rem, g)
            if q > 0:
                b[gi] += q
                rem = tuple(a - q * x for a, x in zip(rem, g))
                progressed = True
    if any(rem):
        sub = _dfs_boundary(p, gens, target)
        assert sub is not None, "Hilbert basis failed to represent a boundary element"
        return tuple(sub)
    return tuple(b)


def _max_multiple(p: Polytope, rem, g) -> int:
    pair_rem = cone_pairings(p, (rem[:-1], rem[-1]))
    pair_g = cone_pairings(p, (g[:-1], g[-1]))
    q = None
    for a, x in zip(pair_rem, pair_g):
        if x > 0:
            q = a // x if q is None else min(q, a // x)
    return 0 if q is None else max(q, 0)


def _dfs_boundary(p: Polytope, gens, target):
    memo: dict[tuple[int, ...], tuple[int, ...] | None] = {}

    def rec(v):
        if not any(v):
            return (0,) * len(gens)
        if v in memo:
            return memo[v]
        memo[v] = None
        for gi, g in enumerate(gens):
            rest = tuple(a - b for a, b in zip(v, g))
            if in_dual_cone(p, (rest[:-1], rest[-1])):
                sub = rec(rest)
                if sub is not None:
                    out = list(sub)
                    out[gi] += 1
                    memo[v] = tuple(out)
                    break
        return memo[v]

    return rec(tuple(target))
