"""Tangent/obstruction dimensions: golden values and three-way agreement."""

from fractions import Fraction

import pytest

from toricdef import fixtures as fx
from toricdef.conemonoid import hilbert_basis
from toricdef.polytope import UnsupportedDimensionError, dot, load_polytope, polygon_from_vertices
from toricdef.tangent import (
    check_prop32,
    default_kmax,
    length_constants,
    t0b_basis,
    t1_dimension,
    t2_closed_form_3d,
    t2_closed_form_value,
    t2_dimension_general,
    t2_dimension_lattice3d,
    vk_space,
    width_constants,
)

HOUSE = fx.house()
TRIANGLE = fx.unit_triangle()


def test_vk_dimensions():
    assert vk_space(HOUSE, 1).dim == 3
    assert vk_space(HOUSE, 2).dim == 2
    assert vk_space(TRIANGLE, 1).dim == 1


def test_vk_basis_satisfies_equations():
    for p in [HOUSE, TRIANGLE, fx.square()]:
        for k in (1, 2, 3):
            space = vk_space(p, k)
            for vec in space.basis:
                for face in p.two_faces:
                    for coord in range(p.dim):
                        total = Fraction(0)
                        for ei, sign in face:
                            total += sign * p.edges[ei - 1].vector[coord] * vec[ei - 1]
                        assert total == 0
                for ei, e in enumerate(p.edges):
                    if e.length <= k - 1:
                        assert vec[ei] == vec[-1]
                if k == 1:
                    assert vec[-1] == 0


def test_t1_house():
    assert [t1_dimension(HOUSE, k) for k in (1, 2, 3, 4)] == [2, 1, 0, 0]


def test_t1_interval():
    for m in (2, 4, 6):
        p = fx.interval(m)
        dims = [t1_dimension(p, k) for k in range(1, m + 3)]
        assert dims == [0] + [1] * (m - 1) + [0, 0, 0][: m + 2 - m]


def test_t1_triangle_zero():
    assert all(t1_dimension(TRIANGLE, k) == 0 for k in range(1, 5))


def test_t1_vanishes_beyond_longest_edge():
    for p in fx.random_polygons(8):
        top = max(e.length for e in p.edges)
        assert t1_dimension(p, top + 1) == 0
        assert t1_dimension(p, top + 3) == 0


def test_t0b_house():
    assert t0b_basis(HOUSE, 1).dim == 2
    k2 = t0b_basis(HOUSE, 2)
    assert k2.dim == 1
    (vec,) = k2.basis
    # T42 = 0 and T52 = T32 on the degree-2 tangent space (edges 3,4,5 long)
    assert vec[0] == vec[1] == 0  # short edges pinned
    assert vec[3] == 0
    assert vec[4] == vec[2]
    assert t0b_basis(HOUSE, 3).dim == 0


def test_prop32_fixtures():
    for p in [HOUSE, TRIANGLE, fx.square(), fx.interval(4), fx.interval(6)]:
        rep = check_prop32(p, 7)
        assert rep.ok, rep.rows


def test_prop32_random_polygons():
    for p in fx.random_polygons(12):
        assert check_prop32(p, max(e.length for e in p.edges) + 2).ok


def test_prop32_dim3():
    cube = load_polytope(fx.cube_file_text())
    assert check_prop32(cube, 3).ok
    tet = load_polytope(fx.tetrahedron_file_text())
    assert check_prop32(tet, 3).ok


# -- obstruction dimensions -----------------------------------------------------


def test_t2_general_house():
    hb = hilbert_basis(HOUSE)
    assert [t2_dimension_general(HOUSE, hb, k) for k in (1, 2, 3, 4, 5)] == [0, 0, 1, 0, 0]


def test_t2_general_triangle_zero():
    hb = hilbert_basis(TRIANGLE)
    assert all(t2_dimension_general(TRIANGLE, hb, k) == 0 for k in range(1, 5))


def test_t2_general_interval_zero():
    # hypersurface: no obstructions in any degree
    for m in (2, 3, 5):
        p = fx.interval(m)
        hb = hilbert_basis(p)
        assert all(t2_dimension_general(p, hb, k) == 0 for k in range(1, m + 2))


def test_t2_lattice_house():
    hb = hilbert_basis(HOUSE)
    assert [t2_dimension_lattice3d(HOUSE, hb, k) for k in (1, 2, 3, 4, 5)] == [0, 0, 1, 0, 0]


def test_t2_lattice_rejects_interval():
    p = fx.interval(3)
    with pytest.raises(UnsupportedDimensionError):
        t2_dimension_lattice3d(p, hilbert_basis(p), 2)


def test_closed_form_house():
    prof = t2_closed_form_3d(HOUSE, 5)
    assert (prof.l1, prof.l2, prof.n1, prof.n2) == (2, 2, 2, 3)
    assert prof.dims == {1: 0, 2: 0, 3: 1, 4: 0, 5: 0}


def test_closed_form_triangle():
    prof = t2_closed_form_3d(TRIANGLE, 4)
    assert (prof.l1, prof.l2, prof.n1, prof.n2) == (1, 1, 1, 1)
    assert all(d == 0 for d in prof.dims.values())


def test_closed_form_rejects_interval():
    with pytest.raises(UnsupportedDimensionError):
        t2_closed_form_3d(fx.interval(3))


def test_width_constants_house():
    assert width_constants(HOUSE) == (2, 3)
    assert length_constants(HOUSE) == (2, 2)


def test_width_constants_bounds():
    for p in fx.random_polygons(12):
        n1, n2 = width_constants(p)
        l1, l2 = length_constants(p)
        assert n1 <= n2
        assert l1 >= l2
        # widths really are attained: no direction beats n1 inside the box
        from toricdef.polytope import width

        assert width(p, (1, 0)) >= n1 and width(p, (0, 1)) >= n1


def test_three_way_agreement():
    polys = [HOUSE, TRIANGLE, fx.square()] + fx.random_polygons(20)
    for p in polys:
        hb = hilbert_basis(p)
        n1, n2 = width_constants(p)
        l1, l2 = length_constants(p)
        for k in range(1, n2 + 3):
            a = t2_dimension_general(p, hb, k)
            b = t2_dimension_lattice3d(p, hb, k)
            c = t2_closed_form_value(l1, l2, n1, n2, k)
            assert a == b == c, (p.vertices, k, a, b, c)


def test_default_kmax():
    assert default_kmax(HOUSE) == 5  # n2 + 2
    assert default_kmax(fx.interval(3)) == 6
