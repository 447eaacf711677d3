"""Base ideal, elimination, graded pieces, family equations."""

import random
from fractions import Fraction

import pytest

from toricdef import fixtures as fx
from toricdef.basespace import (
    CorrectnessError,
    base_ideal,
    build_base_space,
    choose_basis,
    coefficient_extraction,
    eliminate,
    export_cas,
    family_binomials,
    first_order_family,
    ideal_contains,
    random_perp_vector,
    reduces_to_zero_in_w,
    tt_variables,
    ttilde_generators,
    u_substitution,
    w_graded_dims,
)
from toricdef.conemonoid import free_pair_decompose, hilbert_basis
from toricdef.linalg import IntMatrix, rational_rank
from toricdef.polyring import Polynomial, ttvar, tvar, u0var, uvar, xvar
from toricdef.tangent import t0b_basis, t2_dimension_general

HOUSE = fx.house()
TRIANGLE = fx.unit_triangle()
SQUARE = fx.square()


def T(i, j):
    return Polynomial.var(ttvar(i, j))


# -- edge-ideal generators -------------------------------------------------------


def test_ttilde_house():
    gens = ttilde_generators(HOUSE)
    rendered = {g.binomial.sign_normalized().render() for g in gens.generators}
    u = {i: Polynomial.var(uvar(i)) for i in range(1, 6)}
    expected = {
        (u[4] - u[1] * u[2]).sign_normalized().render(),
        (u[1] * u[5] - u[2] * u[3]).sign_normalized().render(),
    }
    assert rendered == expected
    assert [g.d for g in gens.generators] == [(-1, -1, 0, 2, 0), (1, -1, -2, 0, 2)]


def test_ttilde_interval_empty():
    assert ttilde_generators(fx.interval(4)).generators == ()


def test_ttilde_triangle_membership():
    gens = ttilde_generators(TRIANGLE)
    assert len(gens.generators) == 2
    # each exponent vector lies in the rational span of the face relation rows
    face_rows = []
    for face in TRIANGLE.two_faces:
        for coord in range(2):
            row = [0] * 3
            for ei, sign in face:
                row[ei - 1] += sign * TRIANGLE.edges[ei - 1].vector[coord]
            face_rows.append(row)
    base_rank = rational_rank(IntMatrix.from_rows(face_rows))
    for g in gens.generators:
        assert rational_rank(IntMatrix.from_rows(face_rows + [list(g.d)])) == base_rank
        for di, e in zip(g.d, TRIANGLE.edges):
            assert di % e.length == 0


def test_ttilde_minimal_width_matches_faces_basis_on_house():
    a = build_base_space(HOUSE, "faces-basis")
    b = build_base_space(HOUSE, "minimal-width")
    assert all(ideal_contains(b, g) for g in a.ib_reduced)
    assert all(ideal_contains(a, g) for g in b.ib_reduced)


# -- base ideal -------------------------------------------------------------------


def test_base_ideal_house_equations():
    bs = base_ideal(HOUSE, ttilde_generators(HOUSE))
    expected = [
        T(4, 1) - T(2, 1),
        T(4, 2),
        T(5, 1) - T(2, 1) - T(3, 1),
        T(5, 2) - T(3, 2) - T(2, 1) * T(3, 1),
        T(2, 1) * T(3, 2),
    ]
    assert len(bs.ib_full) == 5
    for got, want in zip(bs.ib_full, expected):
        assert got == want.sign_normalized() or got == (-want).sign_normalized()
        assert got.sign_normalized() == want.sign_normalized()


def test_base_ideal_interval_empty():
    bs = base_ideal(fx.interval(5), ttilde_generators(fx.interval(5)))
    assert bs.ib_full == ()


def test_base_ideal_homogeneous():
    for p in [HOUSE, SQUARE] + fx.random_polygons(6):
        bs = base_ideal(p, ttilde_generators(p))
        for g in bs.ib_full:
            assert g.is_weighted_homogeneous()
            assert g.constant_term() == 0


def test_linearization_matches_tangent_space():
    # the kernel of the linear parts of I_B equals the product of the
    # degreewise tangent spaces of the base
    for p in [HOUSE, SQUARE, TRIANGLE] + fx.random_polygons(6):
        bs = base_ideal(p, ttilde_generators(p))
        variables = tt_variables(p)
        index = {v: i for i, v in enumerate(variables)}
        rows = []
        for g in bs.ib_full:
            row = [Fraction(0)] * len(variables)
            for mono, coeff in g.terms.items():
                if sum(e for _, e in mono) == 1:
                    ((v, _),) = mono
                    row[index[v]] = coeff
            rows.append(row)
        from toricdef.linalg import rational_kernel_basis

        kernel_dim = len(rational_kernel_basis(rows, len(variables)))
        expected = sum(
            t0b_basis(p, k).dim for k in range(1, max(e.length for e in p.edges) + 1)
        )
        assert kernel_dim == expected


# -- basis choice and elimination -------------------------------------------------


def test_choose_basis_house():
    basis, excluded = choose_basis(HOUSE)
    assert [v.name() for v in basis] == ["T21", "T31", "T32"]
    assert sorted(v.name() for v in excluded) == ["T41", "T42", "T51", "T52"]


def test_choose_basis_interval():
    basis, excluded = choose_basis(fx.interval(4))
    assert [v.name() for v in basis] == ["T12", "T13", "T14"]
    assert excluded == ()


def test_choose_basis_triangle():
    basis, excluded = choose_basis(TRIANGLE)
    assert basis == ()
    assert sorted(v.name() for v in excluded) == ["T21", "T31"]


def test_eliminate_house():
    bs = build_base_space(HOUSE)
    elim = {v.name(): poly.render() for v, poly in bs.elimination_map.items()}
    assert elim == {
        "T41": "T21",
        "T42": "0",
        "T51": "T31 + T21",
        "T52": "T21*T31 + T32",
    }
    assert [g.render() for g in bs.ib_reduced] == ["T21*T32"]


def test_eliminate_triangle_point():
    bs = build_base_space(TRIANGLE)
    assert bs.basis == ()
    assert bs.ib_reduced == ()
    assert {v.name() for v in bs.elimination_map} == {"T21", "T31"}
    assert all(poly.is_zero() for poly in bs.elimination_map.values())


def test_eliminate_square_smooth():
    bs = build_base_space(SQUARE)
    assert bs.ib_reduced == ()
    assert len(bs.basis) == 3


def test_eliminate_random_polygons():
    for p in fx.random_polygons(10):
        bs = build_base_space(p)
        # every excluded variable got exactly one assignment in basis terms
        assert set(bs.elimination_map) == set(bs.excluded)
        for poly in bs.elimination_map.values():
            assert poly.variables() <= set(bs.basis)
        for g in bs.ib_reduced:
            assert g.variables() <= set(bs.basis)
            assert g.is_weighted_homogeneous()


def test_w_graded_dims():
    assert w_graded_dims(build_base_space(HOUSE), 5) == {1: 0, 2: 0, 3: 1, 4: 0, 5: 0}
    assert all(v == 0 for v in w_graded_dims(build_base_space(fx.interval(4)), 6).values())
    assert all(v == 0 for v in w_graded_dims(build_base_space(TRIANGLE), 4).values())


def test_w_bounded_by_obstruction_dimension():
    for p in [HOUSE, TRIANGLE, SQUARE] + fx.random_polygons(10):
        hb = hilbert_basis(p)
        bs = build_base_space(p)
        from toricdef.tangent import width_constants

        kmax = width_constants(p)[1] + 2
        wd = w_graded_dims(bs, kmax)
        for k in range(1, kmax + 1):
            assert wd[k] <= t2_dimension_general(p, hb, k)


def test_graded_additivity_random_pairs():
    rng = random.Random(99)
    for p in [HOUSE, SQUARE, TRIANGLE]:
        bs = build_base_space(p)
        for _ in range(10):
            d = random_perp_vector(p, rng)
            e = random_perp_vector(p, rng)
            de = tuple(a + b for a, b in zip(d, e))
            pd = coefficient_extraction(p, d)
            pe = coefficient_extraction(p, e)
            pde = coefficient_extraction(p, de)
            for k in set(pd) | set(pe) | set(pde):
                diff = (
                    pde.get(k, Polynomial.zero())
                    - pd.get(k, Polynomial.zero())
                    - pe.get(k, Polynomial.zero())
                )
                assert reduces_to_zero_in_w(bs, diff)


# -- family ------------------------------------------------------------------------


def test_family_interval():
    p = fx.interval(3)
    fam = family_binomials(p, hilbert_basis(p), 3)
    t = Polynomial.var(tvar())
    x1, x2 = Polynomial.var(xvar(1)), Polynomial.var(xvar(2))
    expected = x1 * x2 - (t**3 + T(1, 2) * t + T(1, 3))
    assert any(m.F_T == expected for m in fam.members)
    # the lowest-degree member is the hypersurface equation itself
    (main,) = [m for m in fam.members if sum(m.k) == 2]
    assert main.F_T == expected


def test_family_trivial_tuples_skipped():
    p = fx.interval(3)
    hb = hilbert_basis(p)
    fam = family_binomials(p, hb, 3)
    for m in fam.members:
        assert not m.f.is_zero()
    # pure powers of a single generator are boundary-trivial and skipped
    assert all(sum(1 for kj in m.k if kj) > 1 for m in fam.members)


def test_family_projections_house():
    hb = hilbert_basis(HOUSE)
    fam = family_binomials(HOUSE, hb, 3)
    assert fam.members
    t = Polynomial.var(tvar())
    zero_t = {ttvar(i + 1, j + 1): Polynomial.zero() for i in range(5) for j in range(2)}
    for m in fam.members:
        # setting the deformation parameters to zero recovers the fiber equation
        assert m.F_T.substitute(zero_t) == m.f
        # collapsing each u_i to t^(l_i) does the same on the u-level lifting
        collapse = {uvar(i): t ** HOUSE.edges[i - 1].length for i in range(1, 6)}
        assert m.F.substitute(collapse) == m.f


def test_family_members_vanish_on_monoid_algebra():
    # each f_k encodes a genuine monoid relation: check by evaluating the
    # characters at a random dual argument
    for p in [HOUSE, fx.interval(4)]:
        hb = hilbert_basis(p)
        fam = family_binomials(p, hb, 3)
        # character evaluation: x_j -> s^(pairing with w) for a fixed vertex w
        import random as _r

        rng = _r.Random(5)
        for _ in range(3):
            w = tuple(rng.randint(-2, 2) for _ in range(p.dim)) + (rng.randint(0, 2),)
            base = Fraction(2)
            point = {}
            for j, (c, h) in enumerate(hb.elements, start=1):
                val = sum(a * b for a, b in zip(c + (h,), w))
                point[xvar(j)] = base**val
            point[tvar()] = base ** w[-1]
            for m in fam.members:
                assert m.f.evaluate(point) == 0


def test_first_order_matches_formal_derivative():
    p = fx.interval(3)
    hb = hilbert_basis(p)
    tvec = {(1, 2): Fraction(1)}
    pert = first_order_family(p, hb, 3, tvec)
    zero_all = {v: Polynomial.zero() for v in tt_variables(p)}
    for member, delta in pert:
        expected = Polynomial.zero()
        for (i, j), val in tvec.items():
            dpart = member.F_T.derivative(ttvar(i, j)).substitute(zero_all)
            expected = expected + Polynomial.constant(val) * dpart
        assert delta == expected


def test_first_order_zero_vector():
    p = fx.interval(3)
    pert = first_order_family(p, hilbert_basis(p), 2, {})
    for _, delta in pert:
        assert delta.is_zero()


def test_first_order_house_degree_bookkeeping():
    hb = hilbert_basis(HOUSE)
    (vec,) = t0b_basis(HOUSE, 2).basis
    tvec = {(i + 1, 2): vec[i] for i in range(5) if vec[i] != 0}
    pert = first_order_family(HOUSE, hb, 3, tvec)
    seen_any = False
    for member, delta in pert:
        if delta.is_zero():
            continue
        seen_any = True
        dec = free_pair_decompose(HOUSE, hb, member.k)
        for mono, _ in delta.terms.items():
            texp = dict(mono).get(tvar(), 0)
            assert texp == dec.lam - 2
    assert seen_any


def test_first_order_rejects_non_tangent():
    with pytest.raises(ValueError):
        first_order_family(HOUSE, hilbert_basis(HOUSE), 2, {(4, 2): Fraction(1)})


def test_first_order_validates_full_derivative_on_house():
    hb = hilbert_basis(HOUSE)
    (vec,) = t0b_basis(HOUSE, 2).basis
    tvec = {(i + 1, 2): vec[i] for i in range(5) if vec[i] != 0}
    pert = first_order_family(HOUSE, hb, 2, tvec)
    zero_all = {v: Polynomial.zero() for v in tt_variables(HOUSE)}
    for member, delta in pert:
        expected = Polynomial.zero()
        for (i, j), val in tvec.items():
            dpart = member.F_T.derivative(ttvar(i, j)).substitute(zero_all)
            expected = expected + Polynomial.constant(val) * dpart
        assert delta == expected


# -- export ------------------------------------------------------------------------


def test_export_cas_house():
    bs = build_base_space(HOUSE)
    fam = family_binomials(HOUSE, hilbert_basis(HOUSE), 2)
    text = export_cas(bs, fam)
    lines = text.splitlines()
    assert lines[0].startswith("ring = QQ[")
    assert "base[1] = T41 - T21" in text
    assert "base[2] = T42" in text
    assert "base[5] = T21*T32" in text
    assert "reduced[1] = T21*T32" in text
    assert any(line.startswith("family[1] = ") for line in lines)


def test_export_cas_empty_family():
    p = fx.interval(2)
    bs = build_base_space(p)
    fam = family_binomials(p, hilbert_basis(p), 0)
    text = export_cas(bs, fam)
    assert "family[1] = 0" in text
    assert "base[1] = 0" in text
