"""Sparse exact multivariate polynomials over Q.

Variables come in fixed families (x_i, the parameter t, u_0, u_i, T_ij, K_k)
with a fixed global order X < T < U0 < U < TT < K, each family ordered by
index.  Terms are kept in graded-lexicographic order for printing and
equality, coefficients are `fractions.Fraction` and zero coefficients are
never stored.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

FAM_X, FAM_T, FAM_U0, FAM_U, FAM_TT, FAM_K = range(6)
_FAM_NAMES = {FAM_X: "x", FAM_T: "t", FAM_U0: "u0", FAM_U: "u", FAM_TT: "T", FAM_K: "K"}


@dataclass(frozen=True, order=True)
class Variable:
    """A named variable: family tag plus one or two indices."""

    fam: int
    i: int = 0
    j: int = 0

    def name(self) -> str:
        if self.fam == FAM_T:
            return "t"
        if self.fam == FAM_U0:
            return "u0"
        if self.fam == FAM_TT:
            if self.i < 10 and self.j < 10:
                return f"T{self.i}{self.j}"
            return f"T{self.i}_{self.j}"
        return f"{_FAM_NAMES[self.fam]}{self.i}"

    def grading_weight(self) -> int:
        # deformation parameters T_ij carry weight j; everything else weight 1
        return self.j if self.fam == FAM_TT else 1


def xvar(i: int) -> Variable:
    return Variable(FAM_X, i)


def tvar() -> Variable:
    return Variable(FAM_T)


def u0var() -> Variable:
    return Variable(FAM_U0)


def uvar(i: int) -> Variable:
    return Variable(FAM_U, i)


def ttvar(i: int, j: int) -> Variable:
    return Variable(FAM_TT, i, j)


def kvar(k: int) -> Variable:
    return Variable(FAM_K, k)


# A monomial is a sorted tuple of (Variable, positive exponent).
Monomial = tuple[tuple[Variable, int], ...]

_ONE: Monomial = ()


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    d = dict(m1)
    for v, e in m2:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


def _mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def _mono_sort_key(m: Monomial):
    # graded lexicographic: total degree first, then exponents along the
    # global variable order (higher exponent on an earlier variable wins)
    return (_mono_degree(m), tuple((v, e) for v, e in m))


class Polynomial:
    """Sparse polynomial; immutable by convention."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[Monomial, Fraction] | None = None):
        self.terms: dict[Monomial, Fraction] = {}
        if terms:
            for m, c in terms.items():
                if c != 0:
                    self.terms[m] = Fraction(c)

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero() -> "Polynomial":
        return Polynomial()

    @staticmethod
    def constant(c) -> "Polynomial":
        c = Fraction(c)
        return Polynomial({_ONE: c}) if c else Polynomial()

    @staticmethod
    def var(v: Variable, power: int = 1) -> "Polynomial":
        if power == 0:
            return Polynomial.constant(1)
        return Polynomial({((v, power),): Fraction(1)})

    @staticmethod
    def monomial(pairs, coeff=1) -> "Polynomial":
        mono = tuple(sorted((v, e) for v, e in pairs if e))
        return Polynomial({mono: Fraction(coeff)})

    # -- ring operations ---------------------------------------------------

    def __add__(self, other) -> "Polynomial":
        other = _coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, Fraction(0)) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Polynomial(out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial({m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "Polynomial":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "Polynomial":
        return _coerce(other) + (-self)

    def __mul__(self, other) -> "Polynomial":
        other = _coerce(other)
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                s = out.get(m, Fraction(0)) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Polynomial":
        assert n >= 0
        result = Polynomial.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        return isinstance(other, Polynomial) and self.terms == other.terms

    def __hash__(self):
        return hash(self.key())

    def __bool__(self) -> bool:
        return bool(self.terms)

    # -- structure ---------------------------------------------------------

    def key(self):
        """Hashable canonical form (terms in descending graded-lex order)."""
        return tuple(sorted(self.terms.items(), key=lambda t: _mono_sort_key(t[0]), reverse=True))

    def variables(self) -> set[Variable]:
        return {v for m in self.terms for v, _ in m}

    def is_zero(self) -> bool:
        return not self.terms

    def constant_term(self) -> Fraction:
        return self.terms.get(_ONE, Fraction(0))

    def leading(self) -> tuple[Monomial, Fraction]:
        m = max(self.terms, key=_mono_sort_key)
        return m, self.terms[m]

    def sign_normalized(self) -> "Polynomial":
        """Negate if the graded-lex leading coefficient is negative."""
        if not self.terms:
            return self
        return -self if self.leading()[1] < 0 else self

    def total_degree(self) -> int:
        return max((_mono_degree(m) for m in self.terms), default=0)

    def weighted_degree(self) -> int:
        """Max term degree under the T_ij-weight grading (weight of T_ij is j)."""
        return max(
            (sum(v.grading_weight() * e for v, e in m) for m in self.terms),
            default=0,
        )

    def is_weighted_homogeneous(self) -> bool:
        degs = {sum(v.grading_weight() * e for v, e in m) for m in self.terms}
        return len(degs) <= 1

    # -- calculus / rewriting ----------------------------------------------

    def substitute(self, bindings: dict[Variable, "Polynomial"]) -> "Polynomial":
        """Exact expanded substitution; identity on unbound variables."""
        out = Polynomial()
        cache: dict[tuple[Variable, int], Polynomial] = {}
        for m, c in self.terms.items():
            term = Polynomial.constant(c)
            for v, e in m:
                if v in bindings:
                    p = cache.get((v, e))
                    if p is None:
                        p = bindings[v] ** e
                        cache[(v, e)] = p
                    term = term * p
                else:
                    term = term * Polynomial.var(v, e)
            out = out + term
        return out

    def evaluate(self, point: dict[Variable, Fraction]) -> Fraction:
        total = Fraction(0)
        for m, c in self.terms.items():
            val = c
            for v, e in m:
                if v not in point:
                    raise KeyError(f"no value for variable {v.name()}")
                val *= Fraction(point[v]) ** e
            total += val
        return total

    def derivative(self, v: Variable) -> "Polynomial":
        out: dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            d = dict(m)
            e = d.get(v)
            if not e:
                continue
            if e == 1:
                del d[v]
            else:
                d[v] = e - 1
            mono = tuple(sorted(d.items()))
            s = out.get(mono, Fraction(0)) + c * e
            if s:
                out[mono] = s
            else:
                out.pop(mono, None)
        return Polynomial(out)

    def coefficients_in_u0(self) -> list[tuple[int, "Polynomial"]]:
        """Unique decomposition sum_i coeff_i * u0^i, descending in the power.

        Only u0 and T_ij variables may occur.
        """
        u0 = u0var()
        assert all(v.fam in (FAM_U0, FAM_TT) for v in self.variables()), "u0/T variables only"
        buckets: dict[int, dict[Monomial, Fraction]] = {}
        for m, c in self.terms.items():
            d = dict(m)
            p = d.pop(u0, 0)
            buckets.setdefault(p, {})[tuple(sorted(d.items()))] = c
        return [(p, Polynomial(buckets[p])) for p in sorted(buckets, reverse=True)]

    def graded_components(self) -> dict[int, "Polynomial"]:
        """Split a T_ij-polynomial by weighted degree (weight of T_ij is j)."""
        assert all(v.fam == FAM_TT for v in self.variables()), "T variables only"
        out: dict[int, dict[Monomial, Fraction]] = {}
        for m, c in self.terms.items():
            d = sum(v.grading_weight() * e for v, e in m)
            out.setdefault(d, {})[m] = c
        return {d: Polynomial(t) for d, t in sorted(out.items())}

    # -- rendering -----------------------------------------------------------

    def render(self) -> str:
        """Canonical text form: descending graded-lex terms, a/b coefficients."""
        if not self.terms:
            return "0"
        parts = []
        for m, c in sorted(self.terms.items(), key=lambda t: _mono_sort_key(t[0]), reverse=True):
            mono = "*".join(f"{v.name()}^{e}" if e > 1 else v.name() for v, e in m)
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)

    __str__ = render

    def __repr__(self):
        return f"Polynomial({self.render()})"


def _coerce(x) -> Polynomial:
    if isinstance(x, Polynomial):
        return x
    return Polynomial.constant(x)


def jacobian(ps: list[Polynomial], variables: list[Variable]) -> list[list[Polynomial]]:
    """Matrix of formal partial derivatives, one row per polynomial."""
    return [[p.derivative(v) for v in variables] for p in ps]


def monomials_of_weighted_degree(variables: list[Variable], degree: int) -> list[Monomial]:
    """All monomials in the given variables of exact weighted degree."""
    out: list[Monomial] = []

    def rec(idx: int, remaining: int, acc: list[tuple[Variable, int]]):
        if remaining == 0:
            out.append(tuple(sorted(acc)))
            return
        if idx == len(variables):
            return
        w = variables[idx].grading_weight()
        for e in range(remaining // w + 1):
            rec(idx + 1, remaining - w * e, acc + ([(variables[idx], e)] if e else []))

    rec(0, degree, [])
    return sorted(out, key=_mono_sort_key)
