"""Monoid data: support functionals, Hilbert bases, free-pair decompositions.

The Hilbert basis oracle here is deliberately independent of the library
code: dual-cone membership is re-derived from vertex pairings, enumeration
runs over a pairing box, and generation is decided by memoized subtraction.
"""

from itertools import product

import pytest

from toricdef import fixtures as fx
from toricdef.conemonoid import (
    TFunctional,
    boundary_representation,
    deg,
    enumerate_dual_points,
    eta,
    eta_tilde,
    free_pair_decompose,
    functional_equal,
    functional_signature,
    hilbert_basis,
)
from toricdef.polytope import PolytopeError, UnsupportedDimensionError, polygon_from_vertices
from toricdef.basespace import _exponent_tuples

ORIGIN_HOUSE = polygon_from_vertices([(0, 0), (2, 0), (2, 2), (1, 3), (0, 2)])


# -- independent oracle -------------------------------------------------------


def oracle_pairings(p, vec):
    return [sum(v[i] * vec[i] for i in range(p.dim)) + vec[-1] for v in p.vertices]


def oracle_in_cone(p, vec):
    return all(x >= 0 for x in oracle_pairings(p, vec))


def oracle_box_points(p, bound=3):
    """All nonzero lattice points with every vertex pairing in [0, bound]."""
    pts = []
    coord_bound = bound * 4 + 4  # generous box; pairing filter does the work
    for c in product(range(-coord_bound, coord_bound + 1), repeat=p.dim):
        for h in range(0, bound + 1):
            vec = tuple(c) + (h,)
            if not any(vec):
                continue
            if all(0 <= x <= bound for x in oracle_pairings(p, vec)):
                pts.append(vec)
    return pts


def oracle_generates(p, gens, target, memo):
    if not any(target):
        return True
    if target in memo:
        return memo[target]
    memo[target] = False
    for g in gens:
        rest = tuple(a - b for a, b in zip(target, g))
        if oracle_in_cone(p, rest) and oracle_generates(p, gens, rest, memo):
            memo[target] = True
            break
    return memo[target]


def oracle_reducible(p, vec, box):
    for g in box:
        rest = tuple(a - b for a, b in zip(vec, g))
        if any(rest) and oracle_in_cone(p, rest) and rest in set(box):
            return True
    return False


# -- eta / eta_tilde -----------------------------------------------------------


def test_eta_examples():
    p = ORIGIN_HOUSE
    assert eta(p, (1, 0)) == 0
    assert eta(p, (0, 0)) == 0
    assert eta(p, (-1, -1)) == 4


def test_eta_tilde_interval():
    p = fx.interval(3)
    assert eta_tilde(p, (-1,)).coeffs == (3,)
    assert eta_tilde(p, (1,)).coeffs == (0,)


def test_eta_tilde_empty_path():
    p = ORIGIN_HOUSE
    # v((1,1)) is vertex 1 itself, so the canonical path is empty
    assert eta_tilde(p, (1, 1)).coeffs == (0, 0, 0, 0, 0)


def test_degree_identity_small_box():
    for p in [fx.house(), fx.unit_triangle(), fx.square(), ORIGIN_HOUSE]:
        for c in product(range(-4, 5), repeat=2):
            assert deg(eta_tilde(p, c)) == eta(p, c)
    for m in range(2, 7):
        p = fx.interval(m)
        for c in range(-4, 5):
            assert deg(eta_tilde(p, (c,))) == eta(p, (c,))


def test_functional_equality_mod_face_relations():
    p = fx.house()
    f = TFunctional((1, 0, 0, 0, 0))
    face_x = TFunctional(tuple(e.vector[0] for e in p.edges))
    assert functional_equal(p, f, f + face_x)
    assert not functional_equal(p, f, f + TFunctional((1, 0, 0, 0, 0)))


# -- Hilbert bases -------------------------------------------------------------


def test_hilbert_interval():
    for m in (2, 3, 5):
        hb = hilbert_basis(fx.interval(m))
        assert hb.elements == (((-1,), m), ((1,), 0))
        assert hb.rstar == ((0,), 1)


def test_hilbert_unit_triangle():
    hb = hilbert_basis(fx.unit_triangle())
    assert {c for c, _ in hb.elements} == {(1, 0), (0, 1), (-1, -1)}
    for c, h in hb.elements:
        assert h == eta(fx.unit_triangle(), c)
    # the distinguished element is reducible here: (0,0,1) is the ray sum
    vecs = [c + (h,) for c, h in hb.elements]
    assert tuple(sum(col) for col in zip(*vecs)) == (0, 0, 1)


def test_hilbert_origin_house_contains_expected():
    hb = hilbert_basis(ORIGIN_HOUSE)
    assert ((1, 0), 0) in hb.elements
    assert ((0, 1), 0) in hb.elements


@pytest.mark.parametrize(
    "poly",
    [fx.house(), fx.unit_triangle(), fx.square(), ORIGIN_HOUSE, fx.interval(4)],
    ids=["house", "triangle", "square", "origin-house", "interval4"],
)
def test_hilbert_oracle(poly):
    hb = hilbert_basis(poly)
    gens = hb.as_vectors()
    box = oracle_box_points(poly, bound=3)
    memo = {}
    # generation: every box point is a nonnegative combination of the basis
    for pt in box:
        assert oracle_generates(poly, gens, pt, memo)
    # minimality: no generator splits as a sum of two nonzero cone points
    boxset = box
    for c, h in hb.elements:
        vec = c + (h,)
        if all(0 <= x <= 3 for x in oracle_pairings(poly, vec)):
            assert not oracle_reducible(poly, vec, boxset)


def test_hilbert_minimality_direct():
    # irreducibility over the full monoid: a generator g with vec - g a
    # nonzero cone point would witness a nontrivial splitting of vec
    for poly in [fx.house(), fx.square()]:
        hb = hilbert_basis(poly)
        gens = hb.as_vectors()
        for c, h in hb.elements:
            vec = c + (h,)
            witnesses = [
                g
                for g in gens
                if g != vec
                and oracle_in_cone(poly, tuple(a - b for a, b in zip(vec, g)))
                and any(a - b for a, b in zip(vec, g))
            ]
            assert not witnesses


def test_hilbert_dim3_requires_candidates():
    from toricdef.polytope import load_polytope

    cube = load_polytope(fx.cube_file_text())
    with pytest.raises(UnsupportedDimensionError):
        hilbert_basis(cube)


def test_hilbert_candidate_validation():
    tri = fx.unit_triangle()
    good = (((1, 0), 0), ((0, 1), 0), ((-1, -1), 1))
    hb = hilbert_basis(tri, candidates=good)
    assert hb.elements == hilbert_basis(tri).elements
    with pytest.raises(PolytopeError, match="wrong height"):
        hilbert_basis(tri, candidates=(((1, 0), 2), ((0, 1), 0), ((-1, -1), 1)))
    with pytest.raises(PolytopeError, match="generate"):
        hilbert_basis(tri, candidates=(((1, 0), 0), ((0, 1), 0)))
    with pytest.raises(PolytopeError, match="reducible"):
        hilbert_basis(
            tri, candidates=good + (((1, 1), 0),)
        )


def test_enumerate_dual_points_matches_oracle():
    p = fx.unit_triangle()
    assert sorted(enumerate_dual_points(p, 3)) == sorted(oracle_box_points(p, 3))


# -- free pairs ----------------------------------------------------------------


def test_free_pair_unit_tuples():
    p = fx.house()
    hb = hilbert_basis(p)
    for j in range(hb.r):
        k = tuple(1 if i == j else 0 for i in range(hb.r))
        dec = free_pair_decompose(p, hb, k)
        assert dec.boundary_c == hb.elements[j][0]
        assert dec.lam == 0
        assert dec.lam_tilde.coeffs == (0,) * p.n_edges


def test_free_pair_interval():
    p = fx.interval(3)
    hb = hilbert_basis(p)
    assert [c for c, _ in hb.elements] == [(-1,), (1,)]
    dec = free_pair_decompose(p, hb, (1, 1))
    assert dec.boundary_c == (0,)
    assert dec.lam_tilde.coeffs == (3,)
    assert dec.lam == 3


def test_free_pair_doubled_generator():
    p = fx.house()
    hb = hilbert_basis(p)
    k = (2,) + (0,) * (hb.r - 1)
    dec = free_pair_decompose(p, hb, k)
    assert dec.lam_tilde.coeffs == (0,) * p.n_edges  # v(2c) = v(c)


def test_free_pair_uniqueness_and_reconstruction():
    for p in [fx.house(), fx.unit_triangle()]:
        hb = hilbert_basis(p)
        groups = {}
        for k in _exponent_tuples(hb.r, 3):
            dec = free_pair_decompose(p, hb, k)
            total = TFunctional((0,) * p.n_edges)
            for kj, (cj, _) in zip(k, hb.elements):
                if kj:
                    total = total + eta_tilde(p, cj).scale(kj)
            # reconstruction: boundary + edge part equals the sum of generators
            recon = dec.lam_tilde + dec.boundary_eta_tilde
            assert functional_equal(p, recon, total)
            # divisibility and the degree identity
            for a, e in zip(dec.lam_tilde.coeffs, p.edges):
                assert a >= 0 and a % e.length == 0
            assert dec.lam == sum(dec.lam_tilde.coeffs)
            key = (dec.boundary_c, functional_signature(p, total))
            groups.setdefault(key, []).append(dec)
        # uniqueness: equal sums decompose identically
        for members in groups.values():
            first = members[0]
            for other in members[1:]:
                assert other.boundary_c == first.boundary_c
                assert functional_equal(p, other.lam_tilde, first.lam_tilde)


def test_eta_zero_forces_zero_edge_part():
    for p in [fx.house(), fx.unit_triangle(), fx.interval(4)]:
        hb = hilbert_basis(p)
        for k in _exponent_tuples(hb.r, 3):
            dec = free_pair_decompose(p, hb, k)
            if dec.lam == 0:
                assert dec.lam_tilde.coeffs == (0,) * p.n_edges
                total = TFunctional((0,) * p.n_edges)
                for kj, (cj, _) in zip(k, hb.elements):
                    if kj:
                        total = total + eta_tilde(p, cj).scale(kj)
                assert functional_equal(p, total, dec.boundary_eta_tilde)


# -- boundary representation ----------------------------------------------------


def test_boundary_representation_examples():
    p = fx.interval(3)
    hb = hilbert_basis(p)
    assert boundary_representation(p, hb, (-2,)) == (2, 0)
    assert boundary_representation(p, hb, (0,)) == (0, 0)
    assert boundary_representation(p, hb, (1,)) == (0, 1)


def test_boundary_representation_reconstructs():
    for p in [fx.house(), fx.square()]:
        hb = hilbert_basis(p)
        for c, h in hb.elements:
            b = boundary_representation(p, hb, c)
            assert sum(b) == 1 or b[[cc for cc, _ in hb.elements].index(c)] >= 1
        for cx in range(-3, 4):
            for cy in range(-3, 4):
                c = (cx, cy)
                b = boundary_representation(p, hb, c)
                total_c = tuple(
                    sum(bj * cj[i] for bj, (cj, _) in zip(b, hb.elements)) for i in range(2)
                )
                total_h = sum(bj * hj for bj, (_, hj) in zip(b, hb.elements))
                assert total_c == c
                assert total_h == eta(p, c)
