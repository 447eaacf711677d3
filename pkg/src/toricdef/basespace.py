"""Base-space ideal, its minimal presentation, and the deformation family.

The pipeline: binomial generators of the edge-monoid ideal are rewritten via
u_i = u0^{l_i} + sum_j T_ij u0^{l_i - j} (with the distinguished T_11 set to
zero), their u0-coefficients generate the base ideal I_B in the T variables;
a basis T_b of the tangent directions is chosen, the complementary variables
are eliminated degree by degree, and the graded pieces of I_b modulo
I_b * (T_b) give the minimal-generator counts.  The same monoid data yields
the family binomials and their first-order perturbations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .conemonoid import (
    HilbertBasis,
    TFunctional,
    boundary_representation,
    free_pair_decompose,
    functional_signature,
    tspace_basis,
)
from .linalg import in_q_row_span, int_row_echelon, rank_fraction_rows
from .polyring import (
    Monomial,
    Polynomial,
    Variable,
    monomials_of_weighted_degree,
    ttvar,
    tvar,
    u0var,
    uvar,
    xvar,
)
from .polytope import Polytope, UnsupportedDimensionError, dot
from .tangent import U0_EDGE, t0b_basis, width_constants


class CorrectnessError(RuntimeError):
    """An internal consistency gate failed (not a user input error)."""


@dataclass(frozen=True)
class TTGen:
    d: tuple[int, ...]
    binomial: Polynomial


@dataclass(frozen=True)
class TTildeIdeal:
    generators: tuple[TTGen, ...]
    strategy: str


@dataclass(frozen=True)
class FamilyMember:
    k: tuple[int, ...]
    f: Polynomial  # in x, t
    F: Polynomial  # in x, u
    F_T: Polynomial  # in x, t, T


@dataclass(frozen=True)
class FamilyEquations:
    members: tuple[FamilyMember, ...]
    degree_bound: int


@dataclass
class BaseSpace:
    polytope: Polytope
    ttilde: TTildeIdeal
    ib_full: tuple[Polynomial, ...]
    basis: tuple[Variable, ...] = ()
    excluded: tuple[Variable, ...] = ()
    ib_reduced: tuple[Polynomial, ...] = ()
    elimination_map: dict[Variable, Polynomial] = field(default_factory=dict)


def tt_variables(p: Polytope) -> list[Variable]:
    """All deformation variables T_ij except the identically-zero T on edge 1."""
    out = []
    for idx, e in enumerate(p.edges, start=1):
        for j in range(1, e.length + 1):
            if idx == U0_EDGE and j == 1:
                continue
            out.append(ttvar(idx, j))
    return out


def u_substitution(p: Polytope, base: Polynomial) -> dict[Variable, Polynomial]:
    """Bindings u_i -> base^l_i + sum_j T_ij base^(l_i - j), T_11 = 0."""
    out = {}
    for idx, e in enumerate(p.edges, start=1):
        val = base ** e.length
        for j in range(1, e.length + 1):
            if idx == U0_EDGE and j == 1:
                continue
            val = val + Polynomial.var(ttvar(idx, j)) * base ** (e.length - j)
        out[uvar(idx)] = val
    return out


def binomial_for(p: Polytope, d) -> Polynomial:
    """Monomial difference prod u_i^(d_i+/l_i) - prod u_i^(d_i-/l_i)."""
    pos = Polynomial.constant(1)
    neg = Polynomial.constant(1)
    for idx, (di, e) in enumerate(zip(d, p.edges), start=1):
        assert di % e.length == 0, "edge exponent must be divisible by the length"
        if di > 0:
            pos = pos * Polynomial.var(uvar(idx), di // e.length)
        elif di < 0:
            neg = neg * Polynomial.var(uvar(idx), -di // e.length)
    return pos - neg


def _check_perp(p: Polytope, d) -> None:
    sig = functional_signature(p, TFunctional(tuple(d)))
    if any(sig):
        raise CorrectnessError(f"exponent vector {d} is not orthogonal to the edge-relation space")


def ttilde_generators(p: Polytope, strategy: str = "faces-basis") -> TTildeIdeal:
    """Generators of the edge-monoid ideal from signed-face pairing vectors.

    "faces-basis": one vector per (2-face, dual basis direction), dropping
    zeros and repeats up to sign.  "minimal-width" (polygons): the two
    boundary-cycle vectors of the width-minimizing independent directions.
    """
    vectors: list[tuple[int, ...]] = []

    def push(d):
        d = tuple(d)
        if not any(d):
            return
        neg = tuple(-x for x in d)
        if d in vectors or neg in vectors:
            return
        _check_perp(p, d)
        vectors.append(d)

    if strategy == "faces-basis":
        for face in p.two_faces:
            for coord in range(p.dim):
                d = [0] * p.n_edges
                for ei, sign in face:
                    d[ei - 1] = sign * p.edges[ei - 1].vector[coord]
                push(d)
    elif strategy == "minimal-width":
        if p.dim != 2 or not p.two_faces:
            raise UnsupportedDimensionError("minimal-width generators need a polygon")
        face = p.two_faces[0]
        for c in width_attainers(p):
            d = [0] * p.n_edges
            for ei, sign in face:
                d[ei - 1] = sign * dot(p.edges[ei - 1].vector, c)
            push(d)
    else:
        raise ValueError(f"unknown generator strategy {strategy!r}")
    gens = tuple(TTGen(d=d, binomial=binomial_for(p, d)) for d in vectors)
    return TTildeIdeal(generators=gens, strategy=strategy)


def width_attainers(p: Polytope) -> tuple[tuple[int, int], tuple[int, int]]:
    """Directions (b1, b2) realizing the width constants (n1, n2)."""
    from .polytope import width
    from .tangent import _widths_below

    seed = max(width(p, (1, 0)), width(p, (0, 1)))
    cands = sorted((width(p, c), c) for c in _widths_below(p, seed))
    b1 = cands[0][1]
    for _, c in cands:
        if c[0] * b1[1] - c[1] * b1[0] != 0:
            return b1, c
    raise CorrectnessError("no independent width pair found")


def base_ideal(p: Polytope, gens: TTildeIdeal) -> BaseSpace:
    """Substitute the u0 expansion into each generator and collect coefficients.

    Every u0-coefficient is weighted-homogeneous; the top coefficient cancels
    identically (both monomials contribute the same pure u0 power).
    """
    bindings = u_substitution(p, Polynomial.var(u0var()))
    collected: list[Polynomial] = []
    seen = set()
    for gen in gens.generators:
        g_deg = sum(x for x in gen.d if x > 0)
        q = gen.binomial.substitute(bindings)
        for power, coeff in q.coefficients_in_u0():
            i = g_deg - power
            if i < 1:
                raise CorrectnessError("top u0 coefficient failed to cancel")
            if not coeff.is_weighted_homogeneous() or coeff.weighted_degree() != i:
                raise CorrectnessError("u0 coefficient is not homogeneous of the expected degree")
            norm = coeff.sign_normalized()
            if norm.key() not in seen:
                seen.add(norm.key())
                collected.append(norm)
    return BaseSpace(polytope=p, ttilde=gens, ib_full=tuple(collected))


def choose_basis(p: Polytope) -> tuple[tuple[Variable, ...], tuple[Variable, ...]]:
    """(basis, excluded): per degree, excluded variables are a pivot-column set
    of the exact tangent constraints, so each is determined by the basis ones.

    Columns are tried by descending edge length, then descending edge index
    (so longest and latest edges are eliminated first); at degree one the
    distinguished u0-edge variable is forced out first.
    """
    basis: list[Variable] = []
    excluded: list[Variable] = []
    max_len = max(e.length for e in p.edges)
    for k in range(1, max_len + 1):
        cols = [idx for idx, e in enumerate(p.edges, start=1) if e.length >= k]
        rows: list[dict[int, Fraction]] = []
        for face in p.two_faces:
            for coord in range(p.dim):
                row = {}
                for ei, sign in face:
                    e = p.edges[ei - 1]
                    if e.length >= k:
                        row[ei] = row.get(ei, Fraction(0)) + Fraction(sign * e.vector[coord], e.length)
                rows.append(row)
        if k == 1:
            rows.append({U0_EDGE: Fraction(1)})
        full_rank = rank_fraction_rows([[r.get(c, Fraction(0)) for c in cols] for r in rows])
        order = [U0_EDGE] if k == 1 else []
        order += [
            idx
            for idx in sorted(cols, key=lambda i: (-p.edges[i - 1].length, -i))
            if idx not in order
        ]
        chosen: list[int] = []
        rank = 0
        for idx in order:
            trial = chosen + [idx]
            r = rank_fraction_rows([[row.get(c, Fraction(0)) for c in trial] for row in rows])
            if r > rank:
                chosen.append(idx)
                rank = r
            if rank == full_rank:
                break
        if rank != full_rank:
            raise CorrectnessError(f"could not pick pivot columns at degree {k}")
        for idx in cols:
            v = ttvar(idx, k)
            if idx == U0_EDGE and k == 1:
                continue  # identically zero, not a polynomial variable
            if idx in chosen:
                excluded.append(v)
            else:
                basis.append(v)
        included_dim = len([i for i in cols if i not in chosen and not (i == U0_EDGE and k == 1)])
        if included_dim != t0b_basis(p, k).dim:
            raise CorrectnessError(f"basis count mismatch against tangent space at degree {k}")
    return tuple(basis), tuple(excluded)


def eliminate(bs: BaseSpace) -> BaseSpace:
    """Rewrite generators isolating excluded variables until fixpoint.

    Candidates are generators in which an excluded variable occurs exactly
    once, linearly with a constant coefficient; they are processed by
    ascending weighted degree, then variable order.  Remaining generators
    must live in the basis variables only.
    """
    basis, excluded = choose_basis(bs.polytope)
    working = [g for g in bs.ib_full]
    assignments: dict[Variable, Polynomial] = {}
    excluded_set = set(excluded)

    def isolations(g: Polynomial):
        for v in sorted(g.variables()):
            if v not in excluded_set or v in assignments:
                continue
            terms_with_v = [(m, c) for m, c in g.terms.items() if any(w == v for w, _ in m)]
            if len(terms_with_v) == 1 and terms_with_v[0][0] == ((v, 1),):
                yield v, terms_with_v[0][1]

    while True:
        candidates = []
        for gi, g in enumerate(working):
            if g.is_zero():
                continue
            for v, coeff in isolations(g):
                candidates.append((g.weighted_degree(), v, gi, coeff))
        if not candidates:
            break
        _, v, gi, coeff = min(candidates)
        g = working[gi]
        rest = g - Polynomial.var(v) * coeff
        assignments[v] = rest * Fraction(-1, 1) * (1 / coeff)
        working = [w.substitute({v: assignments[v]}) for w in working]

    missing = [v for v in excluded if v not in assignments and _occurs_anywhere(bs.ib_full, v)]
    leftovers = [v for v in excluded if v not in assignments]
    if leftovers:
        raise CorrectnessError(
            "excluded variables never isolated: " + ", ".join(v.name() for v in sorted(leftovers))
        )
    assert not missing
    # close the map so no excluded variable remains on any right-hand side
    for _ in range(len(assignments) + 1):
        dirty = False
        for v, h in list(assignments.items()):
            if h.variables() & excluded_set:
                assignments[v] = h.substitute(assignments)
                dirty = True
        if not dirty:
            break
    else:
        raise CorrectnessError("elimination map failed to close")

    reduced = []
    seen = set()
    for g in working:
        if g.is_zero():
            continue
        bad = g.variables() - set(basis)
        if bad:
            raise CorrectnessError(
                "reduced generator still involves " + ", ".join(v.name() for v in sorted(bad))
            )
        monic = g * (1 / g.leading()[1])  # scalar normalization, dedupes multiples
        if monic.key() not in seen:
            seen.add(monic.key())
            reduced.append(monic)
    reduced.sort(key=lambda g: (g.weighted_degree(), g.key()))

    out = BaseSpace(
        polytope=bs.polytope,
        ttilde=bs.ttilde,
        ib_full=bs.ib_full,
        basis=basis,
        excluded=excluded,
        ib_reduced=tuple(reduced),
        elimination_map=assignments,
    )
    _verify_elimination(out)
    return out


def _occurs_anywhere(polys, v: Variable) -> bool:
    return any(v in g.variables() for g in polys)


def _verify_elimination(bs: BaseSpace) -> None:
    """Substituting the closed map into the raw generators must land in I_b."""
    for g in bs.ib_full:
        h = g.substitute(bs.elimination_map)
        if h.is_zero():
            continue
        if not ideal_contains(bs, h):
            raise CorrectnessError("eliminated generator left the reduced ideal")


def apply_elimination(bs: BaseSpace, poly: Polynomial) -> Polynomial:
    """Rewrite a T-polynomial in the basis variables via the elimination map."""
    return poly.substitute(bs.elimination_map)


# ---------------------------------------------------------------------------
# graded pieces of I_b


def _graded_span_rows(bs: BaseSpace, k: int, min_cofactor_degree: int):
    """Span of {m * g} at weighted degree k as integer coefficient rows."""
    cols: dict[Monomial, int] = {}
    for m in monomials_of_weighted_degree(list(bs.basis), k):
        cols[m] = len(cols)
    rows = []
    for g in bs.ib_reduced:
        dg = g.weighted_degree()
        if g.is_zero() or dg > k:
            continue
        for m in monomials_of_weighted_degree(list(bs.basis), k - dg):
            if sum(e for _, e in m) < 1 and min_cofactor_degree > 0:
                continue
            prod = g * Polynomial({m: Fraction(1)})
            row = [Fraction(0)] * len(cols)
            for mono, c in prod.terms.items():
                row[cols[mono]] = c
            lcm = 1
            for c in row:
                lcm = lcm * c.denominator // _int_gcd(lcm, c.denominator)
            rows.append([int(c * lcm) for c in row])
    return rows, cols


def _int_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _graded_span_echelon(bs: BaseSpace, k: int, min_cofactor_degree: int):
    key = (k, min_cofactor_degree)
    cache = getattr(bs, "_span_cache", None)
    if cache is None:
        cache = {}
        bs._span_cache = cache
    if key not in cache:
        rows, cols = _graded_span_rows(bs, k, min_cofactor_degree)
        cache[key] = (int_row_echelon(rows), cols)
    return cache[key]


def w_graded_dims(bs: BaseSpace, kmax: int) -> dict[int, int]:
    """Number of degree-k minimal generators of I_b for each k <= kmax."""
    out = {}
    for k in range(1, kmax + 1):
        full, _ = _graded_span_echelon(bs, k, 0)
        sub, _ = _graded_span_echelon(bs, k, 1)
        out[k] = len(full) - len(sub)
    return out


def _component_in_span(bs: BaseSpace, poly: Polynomial, min_cofactor_degree: int) -> bool:
    if poly.is_zero():
        return True
    k = poly.weighted_degree()
    echelon, cols = _graded_span_echelon(bs, k, min_cofactor_degree)
    target = [Fraction(0)] * len(cols)
    for mono, c in poly.terms.items():
        if mono not in cols:
            return False
        target[cols[mono]] = c
    return in_q_row_span(echelon, target)


def ideal_contains(bs: BaseSpace, poly: Polynomial) -> bool:
    """Exact membership of a basis-variable polynomial in the ideal I_b."""
    comps = {}
    for mono, c in poly.terms.items():
        d = sum(v.grading_weight() * e for v, e in mono)
        comps.setdefault(d, {})[mono] = c
    return all(_component_in_span(bs, Polynomial(t), 0) for t in comps.values())


def _mono_divide(m: Monomial, lead: Monomial):
    """Cofactor monomial m / lead, or None when not divisible."""
    d = dict(m)
    for v, e in lead:
        if d.get(v, 0) < e:
            return None
        d[v] -= e
    return tuple(sorted((v, e) for v, e in d.items() if e))


def _normal_form_mod_jb(bs: BaseSpace, poly: Polynomial) -> Polynomial:
    """Multivariate division against {m * g : g reduced generator, wdeg m >= 1}.

    The cofactor is required to have positive weighted degree, so exact
    matches of a generator itself are left in the remainder (they witness
    membership in I_b but not in I_b * (T_b)).
    """
    leads = []
    for g in bs.ib_reduced:
        if not g.is_zero():
            mono, coeff = g.leading()
            leads.append((mono, coeff, g))
    rem = poly
    while not rem.is_zero():
        mono, coeff = rem.leading()
        hit = None
        for lead, lc, g in leads:
            cof = _mono_divide(mono, lead)
            if cof is not None and sum(e for _, e in cof) >= 1:
                hit = (cof, lc, g)
                break
        if hit is None:
            return rem  # leading term irreducible; caller decides what's next
        cof, lc, g = hit
        rem = rem - Polynomial({cof: coeff / lc}) * g
    return rem


def reduces_to_zero_in_w(bs: BaseSpace, poly: Polynomial) -> bool:
    """True when the (eliminated) polynomial lies in I_b * (T_b) degreewise.

    Division-style normal form first; the exhaustive graded-span test is the
    complete fallback for remainders the division order cannot see.
    """
    h = _normal_form_mod_jb(bs, apply_elimination(bs, poly))
    if h.is_zero():
        return True
    comps = {}
    for mono, c in h.terms.items():
        d = sum(v.grading_weight() * e for v, e in mono)
        comps.setdefault(d, {})[mono] = c
    return all(_component_in_span(bs, Polynomial(t), 1) for t in comps.values())


def build_base_space(p: Polytope, strategy: str = "faces-basis") -> BaseSpace:
    """Full pipeline: generators, substitution, basis choice, elimination."""
    return eliminate(base_ideal(p, ttilde_generators(p, strategy)))


# ---------------------------------------------------------------------------
# deformation family


def _exponent_tuples(r: int, bound: int):
    """All k in N^r with 1 <= sum k_i <= bound, lexicographic order."""

    def rec(i, remaining):
        if i == r - 1:
            for e in range(remaining + 1):
                yield (e,)
            return
        for e in range(remaining + 1):
            for rest in rec(i + 1, remaining - e):
                yield (e,) + rest

    for k in rec(0, bound):
        if any(k):
            yield k


def family_binomials(p: Polytope, hb: HilbertBasis, degree_bound: int = 3) -> FamilyEquations:
    """Binomial equations x^k - x^b(k) t^lam(k) and their u- and T-liftings.

    Exponent tuples up to the degree bound; tuples whose binomial vanishes
    identically (boundary exponents equal to k with zero edge part) are
    skipped.  Completeness of the generating set is degree-bounded only.
    """
    members = []
    seen = set()
    t_bind = u_substitution(p, Polynomial.var(tvar()))
    for k in _exponent_tuples(hb.r, degree_bound):
        dec = free_pair_decompose(p, hb, k)
        b = boundary_representation(p, hb, dec.boundary_c)
        if b == k and dec.lam == 0:
            continue
        xk = Polynomial.monomial([(xvar(j + 1), kj) for j, kj in enumerate(k)])
        xb = Polynomial.monomial([(xvar(j + 1), bj) for j, bj in enumerate(b)])
        f = xk - xb * Polynomial.var(tvar(), dec.lam)
        u_mono = Polynomial.constant(1)
        for ei, coeff in enumerate(dec.lam_tilde.coeffs, start=1):
            if coeff:
                u_mono = u_mono * Polynomial.var(uvar(ei), coeff // p.edges[ei - 1].length)
        big_f = xk - xb * u_mono
        f_t = big_f.substitute(t_bind)
        if f.key() in seen:
            continue
        seen.add(f.key())
        members.append(FamilyMember(k=k, f=f, F=big_f, F_T=f_t))
    return FamilyEquations(members=tuple(members), degree_bound=degree_bound)


def validate_tangent_vector(p: Polytope, tvec: dict[tuple[int, int], Fraction]) -> None:
    """Check a T-indexed vector against the base tangent constraints."""
    max_len = max(e.length for e in p.edges)
    for (i, j), val in tvec.items():
        if not (1 <= i <= p.n_edges and 1 <= j <= p.edges[i - 1].length):
            raise ValueError(f"tangent entry T{i}{j} out of range")
        if (i, j) == (U0_EDGE, 1) and val != 0:
            raise ValueError("the distinguished degree-one entry must be zero")
    for k in range(1, max_len + 1):
        for face in p.two_faces:
            for coord in range(p.dim):
                total = Fraction(0)
                for ei, sign in face:
                    e = p.edges[ei - 1]
                    if e.length >= k:
                        total += Fraction(sign * e.vector[coord], e.length) * tvec.get((ei, k), Fraction(0))
                if total != 0:
                    raise ValueError(f"vector violates the degree-{k} tangent equations")


def first_order_family(
    p: Polytope,
    hb: HilbertBasis,
    degree_bound: int,
    tvec: dict[tuple[int, int], Fraction],
) -> list[tuple[FamilyMember, Polynomial]]:
    """First-order perturbation of each family member along a tangent vector.

    For a member with edge part lam~ the perturbation is
    - sum_ij (lam~_i / l_i) tvec_ij x^b(k) t^(lam(k) - j), the exact epsilon
    coefficient of the substituted family.
    """
    validate_tangent_vector(p, tvec)
    fam = family_binomials(p, hb, degree_bound)
    out = []
    for member in fam.members:
        dec = free_pair_decompose(p, hb, member.k)
        b = boundary_representation(p, hb, dec.boundary_c)
        xb = Polynomial.monomial([(xvar(j + 1), bj) for j, bj in enumerate(b)])
        delta = Polynomial.zero()
        for ei, e in enumerate(p.edges, start=1):
            lt = dec.lam_tilde.coeffs[ei - 1]
            if lt == 0:
                continue
            for j in range(1, e.length + 1):
                val = tvec.get((ei, j), Fraction(0))
                if val == 0:
                    continue
                delta = delta - Polynomial.constant(Fraction(lt, e.length) * val) * xb * Polynomial.var(
                    tvar(), dec.lam - j
                )
        out.append((member, delta))
    return out


def export_cas(bs: BaseSpace, fam: FamilyEquations | None = None) -> str:
    """Plain-text script with the ring, the base ideal and the family ideal."""
    p = bs.polytope
    variables: list[str] = []
    r = 0
    if fam is not None and fam.members:
        r = len(fam.members[0].k)
    variables += [xvar(i).name() for i in range(1, r + 1)]
    variables.append(tvar().name())
    variables += sorted(v.name() for v in tt_variables(p))
    lines = [f"ring = QQ[{', '.join(variables)}]"]
    if bs.ib_full:
        for i, g in enumerate(bs.ib_full, start=1):
            lines.append(f"base[{i}] = {g.render()}")
    else:
        lines.append("base[1] = 0")
    for i, g in enumerate(bs.ib_reduced, start=1):
        lines.append(f"reduced[{i}] = {g.render()}")
    if fam is not None:
        if fam.members:
            for i, m in enumerate(fam.members, start=1):
                lines.append(f"family[{i}] = {m.F_T.render()}")
        else:
            lines.append("family[1] = 0")
    return "\n".join(lines) + "\n"


def random_perp_vector(p: Polytope, rng, coeff_bound: int = 2) -> tuple[int, ...]:
    """Random integer combination of signed-face pairing vectors (always valid)."""
    d = [0] * p.n_edges
    for face in p.two_faces:
        for coord in range(p.dim):
            w = rng.randint(-coeff_bound, coeff_bound)
            if w == 0:
                continue
            for ei, sign in face:
                d[ei - 1] += w * sign * p.edges[ei - 1].vector[coord]
    return tuple(d)


def coefficient_extraction(p: Polytope, d) -> dict[int, Polynomial]:
    """Graded u0-coefficients p^(i) of the substituted binomial for one vector."""
    bindings = u_substitution(p, Polynomial.var(u0var()))
    g_deg = sum(x for x in d if x > 0)
    q = binomial_for(p, d).substitute(bindings)
    out = {}
    for power, coeff in q.coefficients_in_u0():
        out[g_deg - power] = coeff
    return out
