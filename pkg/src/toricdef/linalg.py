"""Exact integer and rational linear algebra.

Everything here runs on arbitrary-precision integers or `fractions.Fraction`;
no floating point is used anywhere in the package.  Conventions are fixed for
determinism: Hermite normal form is row-style with positive pivots and the
entries above each pivot reduced into ``[0, pivot)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd


@dataclass(frozen=True)
class IntMatrix:
    """Immutable rectangular integer matrix (entries as tuples of rows)."""

    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        widths = {len(r) for r in self.entries}
        if len(widths) > 1:
            raise ValueError("ragged rows in integer matrix")

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    @staticmethod
    def from_rows(rows) -> "IntMatrix":
        return IntMatrix(tuple(tuple(int(x) for x in r) for r in rows))

    @staticmethod
    def identity(n: int) -> "IntMatrix":
        return IntMatrix(tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    def transpose(self) -> "IntMatrix":
        return IntMatrix(tuple(zip(*self.entries)) if self.entries else ())

    def mul(self, other: "IntMatrix") -> "IntMatrix":
        assert self.cols == other.rows
        ot = other.transpose().entries
        return IntMatrix(
            tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in ot) for row in self.entries)
        )


# kernel bases are plain tuples of integer coordinate tuples
LatticeBasis = tuple[tuple[int, ...], ...]


def hermite_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix]:
    """Row-style HNF: returns (h, u) with u unimodular and u*m = h.

    Pivots are positive and entries above a pivot are reduced into [0, pivot).
    """
    a = [list(r) for r in m.entries]
    nrows, ncols = m.rows, m.cols
    u = [[1 if i == j else 0 for j in range(nrows)] for i in range(nrows)]

    def row_combine(i1, i2, x, y, z, w):
        # (row i1, row i2) <- (x*r1 + y*r2, z*r1 + w*r2)
        for mat in (a, u):
            r1, r2 = mat[i1], mat[i2]
            for j in range(len(r1)):
                r1[j], r2[j] = x * r1[j] + y * r2[j], z * r1[j] + w * r2[j]

    pivot_row = 0
    for col in range(ncols):
        # clear the column below pivot_row with gcd row operations
        for i in range(pivot_row + 1, nrows):
            if a[i][col] == 0:
                continue
            p, q = a[pivot_row][col], a[i][col]
            if p == 0:
                a[pivot_row], a[i] = a[i], a[pivot_row]
                u[pivot_row], u[i] = u[i], u[pivot_row]
                continue
            g, x, y = _xgcd(p, q)
            row_combine(pivot_row, i, x, y, -(q // g), p // g)
        if a[pivot_row][col] == 0:
            continue
        if a[pivot_row][col] < 0:
            a[pivot_row] = [-v for v in a[pivot_row]]
            u[pivot_row] = [-v for v in u[pivot_row]]
        piv = a[pivot_row][col]
        for i in range(pivot_row):
            q = a[i][col] // piv  # floor division keeps residues in [0, piv)
            if q:
                a[i] = [vi - q * vp for vi, vp in zip(a[i], a[pivot_row])]
                u[i] = [vi - q * vp for vi, vp in zip(u[i], u[pivot_row])]
        pivot_row += 1
        if pivot_row == nrows:
            break
    return IntMatrix.from_rows(a), IntMatrix.from_rows(u)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with g = gcd(a, b) = x*a + y*b."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def det(m: IntMatrix) -> int:
    """Determinant by fraction-free (Bareiss) elimination."""
    n = m.rows
    assert n == m.cols
    if n == 0:
        return 1
    a = [list(r) for r in m.entries]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _canonical_basis(rows) -> LatticeBasis:
    """HNF cleanup of a generating set: canonical ordered basis, no zero rows."""
    rows = [r for r in rows if any(r)]
    if not rows:
        return ()
    h, _ = hermite_normal_form(IntMatrix.from_rows(rows))
    return tuple(tuple(r) for r in h.entries if any(r))


def integer_kernel_basis(m: IntMatrix) -> LatticeBasis:
    """Canonical Z-basis of {v : m*v = 0, v integral}.

    The basis spans the full (saturated) integer kernel lattice: rows of the
    HNF transform of m^T matching zero rows of the HNF form the kernel.
    """
    mt = m.transpose()
    h, u = hermite_normal_form(mt)
    rows = [u.entries[i] for i in range(mt.rows) if not any(h.entries[i])]
    return _canonical_basis(rows)


def rational_rank(m: IntMatrix) -> int:
    """Rank over Q via fraction-free elimination."""
    return rank_fraction_rows([[Fraction(x) for x in row] for row in m.entries])


def constrained_kernel_lattice(m: IntMatrix, moduli) -> LatticeBasis:
    """Z-basis of {d in ker_Z(m) : moduli[i] | d[i] for all i}.

    Solved as the kernel of the stacked system over (d, e): m*d = 0 and
    d_i - moduli_i * e_i = 0, projected to the d-part (the projection is a
    lattice isomorphism since e is determined by d), then HNF cleanup.
    """
    moduli = [int(x) for x in moduli]
    n = m.cols
    assert len(moduli) == n and all(x > 0 for x in moduli)
    stacked = []
    for row in m.entries:
        stacked.append(list(row) + [0] * n)
    for i in range(n):
        row = [0] * (2 * n)
        row[i] = 1
        row[n + i] = -moduli[i]
        stacked.append(row)
    kern = integer_kernel_basis(IntMatrix.from_rows(stacked))
    return _canonical_basis([v[:n] for v in kern])


def lattice_member(basis: LatticeBasis, v) -> bool:
    """Exact membership of v in the Z-span of basis (basis in HNF row form)."""
    if not any(v):
        return True
    rows = _canonical_basis(basis)
    vec = list(v)
    pivots = {next(j for j, x in enumerate(row) if x): row for row in rows}
    for j in range(len(vec)):
        if vec[j] == 0:
            continue
        row = pivots.get(j)
        if row is None or vec[j] % row[j] != 0:
            return False
        q = vec[j] // row[j]
        vec = [a - q * b for a, b in zip(vec, row)]
    return not any(vec)


def lattice_intersection(b1: LatticeBasis, b2: LatticeBasis) -> LatticeBasis:
    """Basis of the intersection of two sublattices of Z^n."""
    if not b1 or not b2:
        return ()
    n = len(b1[0])
    # x in L1 cap L2  <=>  x = y*B1 = z*B2; kernel of [B1^T | -B2^T] in (y, z)
    rows = []
    for i in range(n):
        rows.append([b[i] for b in b1] + [-b[i] for b in b2])
    kern = integer_kernel_basis(IntMatrix.from_rows(rows))
    combos = []
    for v in kern:
        y = v[: len(b1)]
        combos.append([sum(c * b[i] for c, b in zip(y, b1)) for i in range(n)])
    return _canonical_basis(combos)


# ---------------------------------------------------------------------------
# rational elimination helpers (shared by the tangent/base-space modules)


def rank_fraction_rows(rows: list[list[Fraction]]) -> int:
    """Rank of a matrix given as rows of Fractions (Gaussian elimination)."""
    rows = [list(r) for r in rows if any(r)]
    rank = 0
    col = 0
    ncols = len(rows[0]) if rows else 0
    while rank < len(rows) and col < ncols:
        piv = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        prow = rows[rank]
        inv = 1 / prow[col]
        rows[rank] = prow = [x * inv for x in prow]
        for i in range(len(rows)):
            if i != rank and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], prow)]
        rank += 1
        col += 1
    return rank


def int_row_echelon(rows: list[list[int]]) -> list[list[int]]:
    """Echelon form of the Q-row-space with integer rows (content stripped).

    Fraction-free cross-multiplication updates keep all entries integral;
    dividing each row by its gcd bounds the growth.
    """
    work = []
    for r in rows:
        if any(r):
            g = 0
            for x in r:
                g = gcd(g, abs(x))
            work.append([x // g for x in r])
    echelon: list[list[int]] = []
    for row in work:
        for e in echelon:
            c = next(j for j, x in enumerate(e) if x)
            if row[c]:
                p, q = e[c], row[c]
                row = [p * a - q * b for a, b in zip(row, e)]
        if any(row):
            g = 0
            for x in row:
                g = gcd(g, abs(x))
            row = [x // g for x in row]
            echelon.append(row)
            echelon.sort(key=lambda r: next(j for j, x in enumerate(r) if x))
    return echelon


def in_q_row_span(echelon: list[list[int]], target) -> bool:
    """Membership of a rational vector in the Q-span of echelon rows."""
    vec = [Fraction(x) for x in target]
    for e in echelon:
        c = next(j for j, x in enumerate(e) if x)
        if vec[c]:
            f = vec[c] / e[c]
            vec = [a - f * b for a, b in zip(vec, e)]
    return not any(vec)


def rational_kernel_basis(rows: list[list[Fraction]], ncols: int) -> list[tuple[Fraction, ...]]:
    """Canonical basis of the right kernel over Q (one vector per free column).

    The matrix is reduced to RREF; each free column yields the basis vector
    with a 1 in that coordinate, so the result is deterministic.
    """
    mat = [list(r) for r in rows if any(r)]
    pivots: list[int] = []
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(mat)) if mat[i][col] != 0), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        prow = mat[rank]
        inv = 1 / prow[col]
        mat[rank] = prow = [x * inv for x in prow]
        for i in range(len(mat)):
            if i != rank and mat[i][col] != 0:
                f = mat[i][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], prow)]
        pivots.append(col)
        rank += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            vec[pc] = -mat[r][fc]
        basis.append(tuple(vec))
    return basis
