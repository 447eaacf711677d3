"""Lattice Minkowski decompositions and the component correspondence.

A decomposition of a polygon is stored as the matrix of edge splits: row k
gives how much of each edge lies in summand k.  Each summand must close up
(its split lengths against the primitive edge directions sum to zero) and
the splits of every edge must add up to its lattice length.  Maximal
decompositions have indecomposable summands only.

Each decomposition induces a monomial specialization u_i -> prod_k K_k^n_ik
killing the edge-monoid ideal, and a polynomial specialization of the T
variables under which the base ideal vanishes; the images parametrize the
components of the reduced base space.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .basespace import BaseSpace, tt_variables
from .linalg import IntMatrix, rational_rank
from .polyring import Polynomial, Variable, kvar, ttvar, uvar
from .polytope import Polytope, PolytopeError, UnsupportedDimensionError
from .tangent import U0_EDGE


@dataclass(frozen=True)
class MinkowskiDecomposition:
    splits: tuple[tuple[int, ...], ...]  # one row per summand, one column per edge
    summands: tuple[tuple[tuple[int, ...], ...], ...] | None  # vertex cycles, dim <= 2

    @property
    def n_summands(self) -> int:
        return len(self.splits)


def _summand_vectors(p: Polytope) -> list[tuple[int, ...]]:
    """All nonzero split vectors n <= lengths with sum n_i * prim_i = 0."""
    lengths = p.edge_lengths()
    out = []

    def rec(i, acc, total):
        if i == p.n_edges:
            if any(acc) and not any(total):
                out.append(tuple(acc))
            return
        prim = p.edges[i].primitive
        for n in range(lengths[i] + 1):
            rec(i + 1, acc + [n], tuple(t + n * c for t, c in zip(total, prim)))

    rec(0, [], (0,) * p.dim)
    return out


def _summand_cycle(p: Polytope, z: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    """Vertex cycle of the summand with edge splits z, translated to lex-min 0."""
    pos = (0,) * p.dim
    pts = []
    for n, e in zip(z, p.edges):
        if n:
            pts.append(pos)
            pos = tuple(a + n * b for a, b in zip(pos, e.primitive))
    assert pos == (0,) * p.dim, "summand does not close up"
    base = min(pts)
    shifted = [tuple(a - b for a, b in zip(q, base)) for q in pts]
    start = shifted.index(min(shifted))
    return tuple(shifted[start:] + shifted[:start])


def _indecomposable(p: Polytope, z: tuple[int, ...], pool: list[tuple[int, ...]], memo: dict) -> bool:
    if z in memo:
        return memo[z]
    ans = True
    for a in pool:
        if a != z and all(x <= y for x, y in zip(a, z)):
            ans = False
            break
    memo[z] = ans
    return ans


def enumerate_decompositions(p: Polytope, maximal_only: bool = False) -> list[MinkowskiDecomposition]:
    """All unordered decompositions up to translation and summand permutation.

    Summands inside a decomposition are listed by descending split vector;
    with maximal_only every summand must be indecomposable (this drops the
    trivial one-summand decomposition exactly when P itself decomposes).
    """
    if p.dim == 1:
        m = p.edges[0].length
        parts_list: list[list[int]] = []

        def part(rest, mx, acc):
            if rest == 0:
                parts_list.append(acc)
                return
            for q in range(min(rest, mx), 0, -1):
                part(rest - q, q, acc + [q])

        part(m, m, [])
        out = []
        for parts in parts_list:
            if maximal_only and any(q > 1 for q in parts):
                continue
            splits = tuple((q,) for q in parts)
            summands = tuple(((0,), (q,)) for q in parts)
            out.append(MinkowskiDecomposition(splits=splits, summands=summands))
        return out

    if p.dim != 2 or not p.is_polygon_cycle():
        raise UnsupportedDimensionError(
            "decomposition enumeration needs a polygon boundary cycle; "
            "supply a minkowski stanza in the input for other polytopes"
        )

    lengths = p.edge_lengths()
    pool = sorted(_summand_vectors(p), reverse=True)
    memo: dict = {}
    results: list[tuple[tuple[int, ...], ...]] = []

    def rec(remaining, start, acc):
        if not any(remaining):
            results.append(tuple(acc))
            return
        for idx in range(start, len(pool)):
            z = pool[idx]
            if all(a <= b for a, b in zip(z, remaining)):
                rec(tuple(b - a for a, b in zip(z, remaining)), idx, acc + [z])

    rec(tuple(lengths), 0, [])
    out = []
    for splits in results:
        if maximal_only and not all(_indecomposable(p, z, pool, memo) for z in splits):
            continue
        out.append(
            MinkowskiDecomposition(
                splits=splits,
                summands=tuple(_summand_cycle(p, z) for z in splits),
            )
        )
    return out


def validate_decomposition(p: Polytope, splits) -> MinkowskiDecomposition:
    """Check closure and split totals for an externally supplied decomposition."""
    splits = tuple(tuple(int(x) for x in row) for row in splits)
    for row in splits:
        if len(row) != p.n_edges or any(x < 0 for x in row):
            raise PolytopeError("summand split row malformed")
        if not any(row):
            raise PolytopeError("empty summand in supplied decomposition")
        for fi, face in enumerate(p.two_faces):
            total = [0] * p.dim
            for ei, sign in face:
                e = p.edges[ei - 1]
                total = [t + sign * row[ei - 1] * c for t, c in zip(total, e.primitive)]
            if any(total):
                raise PolytopeError(f"summand fails to close over 2-face {fi + 1}")
    for ei, e in enumerate(p.edges):
        if sum(row[ei] for row in splits) != e.length:
            raise PolytopeError(f"splits of edge {ei + 1} do not add up to its length")
    cycles = None
    if p.dim <= 2 and (p.dim == 1 or p.is_polygon_cycle()):
        cycles = tuple(_summand_cycle(p, z) for z in splits)
    return MinkowskiDecomposition(splits=splits, summands=cycles)


# ---------------------------------------------------------------------------
# the maps f and g


@dataclass(frozen=True)
class FMapResult:
    assignment: dict[Variable, Polynomial]  # u_i -> monomial in K
    ok: bool
    failures: tuple[int, ...]  # indices of edge-ideal generators not killed


def map_f(p: Polytope, dec: MinkowskiDecomposition, ttilde) -> FMapResult:
    """u_i -> prod_k K_k^n_ik, with the exact check that it kills the ideal."""
    assignment = {}
    for ei in range(p.n_edges):
        assignment[uvar(ei + 1)] = Polynomial.monomial(
            [(kvar(k), row[ei]) for k, row in enumerate(dec.splits)]
        )
    failures = []
    for gi, gen in enumerate(ttilde.generators):
        if not gen.binomial.substitute(assignment).is_zero():
            failures.append(gi)
    return FMapResult(assignment=assignment, ok=not failures, failures=tuple(failures))


def f_u0_value(p: Polytope, dec: MinkowskiDecomposition) -> Polynomial:
    """Image of the distinguished degree-one variable: (sum_k n_1k K_k) / l_1.

    When the u0 edge is unsplit this is the single K of its summand; the
    rational form is forced by sending T_11 to zero in the split case.
    """
    l1 = p.edges[U0_EDGE - 1].length
    total = Polynomial.zero()
    for k, row in enumerate(dec.splits):
        if row[U0_EDGE - 1]:
            total = total + Polynomial.constant(Fraction(row[U0_EDGE - 1], l1)) * Polynomial.var(kvar(k))
    return total


def u0_edge_split(p: Polytope, dec: MinkowskiDecomposition) -> bool:
    l1 = p.edges[U0_EDGE - 1].length
    return not any(row[U0_EDGE - 1] == l1 for row in dec.splits)


@dataclass(frozen=True)
class GMapResult:
    assignment: dict[Variable, Polynomial]  # T_ij -> polynomial in K
    fui_ok: bool
    base_ok: bool
    fui_failures: tuple[int, ...]  # edges where the product identity fails
    base_failures: tuple[int, ...]  # base-ideal generators not killed


def _compositions(target: int, caps: tuple[int, ...]):
    def rec(i, rest, acc):
        if i == len(caps):
            if rest == 0:
                yield tuple(acc)
            return
        for q in range(min(rest, caps[i]), -1, -1):
            yield from rec(i + 1, rest - q, acc + [q])

    yield from rec(0, target, [])


def map_g(p: Polytope, dec: MinkowskiDecomposition, bs: BaseSpace) -> GMapResult:
    """T_ij -> degree-j part of prod_k ((K_k - f(u0)) + f(u0))^n_ik.

    Verified exactly: the expansion identity f(u_i) = sum_j f(u0)^(l_i - j)
    g(T_ij) for every edge, and the vanishing of every base-ideal generator.
    """
    fu0 = f_u0_value(p, dec)
    shifted = [Polynomial.var(kvar(k)) - fu0 for k in range(dec.n_summands)]
    assignment: dict[Variable, Polynomial] = {}
    for ei, e in enumerate(p.edges, start=1):
        caps = tuple(row[ei - 1] for row in dec.splits)
        for j in range(1, e.length + 1):
            total = Polynomial.zero()
            for compo in _compositions(j, caps):
                coeff = 1
                term = Polynomial.constant(1)
                for q, cap, base in zip(compo, caps, shifted):
                    coeff *= comb(cap, q)
                    if q:
                        term = term * base**q
                total = total + Polynomial.constant(coeff) * term
            assignment[ttvar(ei, j)] = total
    zero_entry = assignment.pop(ttvar(U0_EDGE, 1))
    assert zero_entry.is_zero(), "distinguished T entry must map to zero"

    fui_failures = []
    f_res = map_f(p, dec, bs.ttilde)
    for ei, e in enumerate(p.edges, start=1):
        rhs = fu0**e.length
        for j in range(1, e.length + 1):
            gij = assignment.get(ttvar(ei, j), Polynomial.zero())
            rhs = rhs + fu0 ** (e.length - j) * gij
        if rhs != f_res.assignment[uvar(ei)]:
            fui_failures.append(ei)

    base_failures = []
    for gi, g in enumerate(bs.ib_full):
        if not g.substitute(assignment).is_zero():
            base_failures.append(gi)
    return GMapResult(
        assignment=assignment,
        fui_ok=not fui_failures,
        base_ok=not base_failures,
        fui_failures=tuple(fui_failures),
        base_failures=tuple(base_failures),
    )


def component_dimension(p: Polytope, dec: MinkowskiDecomposition, bs: BaseSpace, rng) -> tuple[int, int]:
    """Generic rank of the parametrization of the basis variables.

    The g-images are rewritten in the difference variables (K_0 set to zero)
    and the Jacobian is evaluated at random rational points; the maximum rank
    over the draws is returned together with the number of draws used.
    """
    m = dec.n_summands - 1
    if m == 0 or not bs.basis:
        return 0, 0
    g_res = map_g(p, dec, bs)
    diff_vars = [kvar(k) for k in range(1, dec.n_summands)]
    at_k0_zero = {kvar(0): Polynomial.zero()}
    images = [g_res.assignment[v].substitute(at_k0_zero) for v in bs.basis]
    jac = [[img.derivative(v) for v in diff_vars] for img in images]
    best = 0
    draws = 0
    cap = min(len(images), m)
    while draws < 4 and best < cap:
        point = {v: Fraction(rng.randint(-19, 19), rng.randint(1, 7)) for v in diff_vars}
        draws += 1
        rows = [[entry.evaluate(point) for entry in row] for row in jac]
        int_rows = []
        for row in rows:
            lcm = 1
            for x in row:
                lcm = lcm * x.denominator // _gcd(lcm, x.denominator)
            int_rows.append([int(x * lcm) for x in row])
        best = max(best, rational_rank(IntMatrix.from_rows(int_rows)) if int_rows else 0)
    return best, draws


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


# ---------------------------------------------------------------------------
# component extraction and the correspondence report


@dataclass(frozen=True)
class Component:
    forms: tuple[Polynomial, ...]  # linear forms cutting the component
    dim: int
    key: tuple  # canonical row-reduced form of the linear span


@dataclass(frozen=True)
class CorrespondenceRow:
    dec: MinkowskiDecomposition
    f_ok: bool
    fui_ok: bool
    base_ok: bool
    u0_split: bool
    image_dim: int
    draws: int
    component_index: int | None


@dataclass(frozen=True)
class CorrespondenceReport:
    rows: tuple[CorrespondenceRow, ...]
    components: tuple[Component, ...]
    complete: bool  # linear-factor extraction covered every reduced generator
    bijective: bool | None


def linear_factor_list(poly: Polynomial) -> list[Polynomial] | None:
    """Factor into linear forms: variable content first, linear remainder.

    Returns None when a nonlinear remainder is left (no full factorization).
    """
    if poly.is_zero():
        return None
    factors: list[Polynomial] = []
    terms = dict(poly.terms)
    common: dict = {}
    first = True
    for mono in terms:
        expo = dict(mono)
        if first:
            common = dict(expo)
            first = False
        else:
            common = {v: min(e, expo.get(v, 0)) for v, e in common.items() if expo.get(v, 0)}
    for v, e in sorted(common.items()):
        factors.extend([Polynomial.var(v)] * e)
    stripped = {}
    for mono, c in terms.items():
        expo = dict(mono)
        for v, e in common.items():
            expo[v] -= e
        stripped[tuple(sorted((v, e) for v, e in expo.items() if e))] = c
    rest = Polynomial(stripped)
    if rest.total_degree() == 0:
        return factors
    if rest.total_degree() == 1:
        factors.append(rest)
        return factors
    return None


def extract_components(bs: BaseSpace) -> tuple[tuple[Component, ...], bool]:
    """Irreducible components of the reduced base when generators split linearly."""
    nvars = len(bs.basis)
    var_index = {v: i for i, v in enumerate(bs.basis)}
    if not bs.ib_reduced:
        return (Component(forms=(), dim=nvars, key=()),), True

    factor_lists = []
    for g in bs.ib_reduced:
        fl = linear_factor_list(g)
        if fl is None:
            return (), False
        factor_lists.append(fl)

    def form_vector(form: Polynomial):
        vec = [Fraction(0)] * nvars
        for mono, c in form.terms.items():
            (v, e), = mono
            assert e == 1
            vec[var_index[v]] = c
        return vec

    def rref(rows):
        rows = [list(r) for r in rows if any(r)]
        rank = 0
        for col in range(nvars):
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
            rank += 1
        return tuple(tuple(r) for r in rows[:rank])

    candidates: dict[tuple, tuple[Polynomial, ...]] = {}
    def rec(i, chosen):
        if i == len(factor_lists):
            key = rref([form_vector(f) for f in chosen])
            if key not in candidates:
                candidates[key] = tuple(chosen)
            return
        for f in factor_lists[i]:
            rec(i + 1, chosen + [f])

    rec(0, [])
    # keep components whose linear span is minimal (maximal varieties)
    keys = list(candidates)
    keep = []
    for a in keys:
        redundant = False
        for b in keys:
            if a == b or len(b) >= len(a):
                continue
            # variety(a) inside variety(b) iff rowspace(b) subset rowspace(a)
            if rref(list(a) + list(b)) == a:
                redundant = True
                break
        if not redundant:
            keep.append(a)
    comps = [
        Component(forms=candidates[key], dim=nvars - len(key), key=key)
        for key in sorted(keep)
    ]
    return tuple(comps), True


def correspondence_report(p: Polytope, bs: BaseSpace, decs, rng) -> CorrespondenceReport:
    """Match each maximal decomposition to a component of the reduced base.

    A decomposition matches a component when every cutting form vanishes on
    its parametrization and the generic parametrization rank equals the
    component dimension; with linearly-split generators this pins the image
    closure to the component exactly.
    """
    components, complete = extract_components(bs)
    rows = []
    used = set()
    bijective: bool | None = True
    for dec in decs:
        f_res = map_f(p, dec, bs.ttilde)
        g_res = map_g(p, dec, bs)
        dim, draws = component_dimension(p, dec, bs, rng)
        match = None
        if complete:
            for ci, comp in enumerate(components):
                if comp.dim != dim:
                    continue
                ok = True
                for form in comp.forms:
                    total = Polynomial.zero()
                    for mono, c in form.terms.items():
                        (v, _), = mono
                        total = total + Polynomial.constant(c) * g_res.assignment[v]
                    if not total.is_zero():
                        ok = False
                        break
                if ok:
                    match = ci
                    break
        if match is None:
            bijective = False if complete else None
        else:
            if match in used:
                bijective = False
            used.add(match)
        rows.append(
            CorrespondenceRow(
                dec=dec,
                f_ok=f_res.ok,
                fui_ok=g_res.fui_ok,
                base_ok=g_res.base_ok,
                u0_split=u0_edge_split(p, dec),
                image_dim=dim,
                draws=draws,
                component_index=match,
            )
        )
    if complete and bijective and len(used) != len(components):
        bijective = False
    if not complete:
        bijective = None
    return CorrespondenceReport(
        rows=tuple(rows), components=components, complete=complete, bijective=bijective
    )
