"""Exact integer matrices: Smith and Hermite normal forms, integer solving.

Everything here works on Python ints, so there is no overflow anywhere.
Matrices are immutable :class:`IntMatrix` values; the normal-form routines
copy into plain lists, work in place, and wrap the result again.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence

Vector = tuple[int, ...]


@dataclass(frozen=True)
class IntMatrix:
    """A ``nrows x ncols`` integer matrix stored row-major.

    The shape is carried explicitly so that ``0 x n`` and ``n x 0`` matrices
    (empty relation lists, zero groups) behave like any other matrix.
    """

    nrows: int
    ncols: int
    rows: tuple[Vector, ...]

    def __post_init__(self):
        if len(self.rows) != self.nrows or any(len(r) != self.ncols for r in self.rows):
            raise ValueError(f"ragged matrix for declared shape {self.nrows}x{self.ncols}")

    # -- constructors -------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]], ncols: int | None = None) -> IntMatrix:
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        if ncols is None:
            if not rows:
                raise ValueError("ncols is required for a matrix with no rows")
            ncols = len(rows[0])
        return cls(len(rows), ncols, rows)

    @classmethod
    def from_columns(cls, cols: Iterable[Iterable[int]], nrows: int) -> IntMatrix:
        cols = [tuple(int(x) for x in c) for c in cols]
        for c in cols:
            if len(c) != nrows:
                raise ValueError(f"column of length {len(c)}, expected {nrows}")
        rows = tuple(tuple(c[i] for c in cols) for i in range(nrows))
        return cls(nrows, len(cols), rows)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> IntMatrix:
        return cls(nrows, ncols, tuple((0,) * ncols for _ in range(nrows)))

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def diagonal(cls, entries: Sequence[int], nrows: int | None = None,
                 ncols: int | None = None) -> IntMatrix:
        nrows = len(entries) if nrows is None else nrows
        ncols = len(entries) if ncols is None else ncols
        rows = [[0] * ncols for _ in range(nrows)]
        for i, d in enumerate(entries):
            rows[i][i] = d
        return cls.from_rows(rows, ncols)

    # -- access -------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, idx):
        i, j = idx
        return self.rows[i][j]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.ncols)]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    @property
    def T(self) -> IntMatrix:
        return IntMatrix.from_columns(self.rows, self.ncols)

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.rows for x in r)

    # -- arithmetic ---------------------------------------------------

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = other.columns()
        rows = tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in cols) for r in self.rows)
        return IntMatrix(self.nrows, other.ncols, rows)

    def apply(self, v: Sequence[int]) -> Vector:
        if len(v) != self.ncols:
            raise ValueError(f"vector of length {len(v)} for a {self.shape} matrix")
        return tuple(sum(a * b for a, b in zip(r, v)) for r in self.rows)

    def __add__(self, other: IntMatrix) -> IntMatrix:
        if self.shape != other.shape:
            raise ValueError("shape mismatch in addition")
        return IntMatrix(self.nrows, self.ncols,
                         tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)))

    def __neg__(self) -> IntMatrix:
        return IntMatrix(self.nrows, self.ncols, tuple(tuple(-a for a in r) for r in self.rows))

    def __sub__(self, other: IntMatrix) -> IntMatrix:
        return self + (-other)

    def scale(self, k: int) -> IntMatrix:
        return IntMatrix(self.nrows, self.ncols, tuple(tuple(k * a for a in r) for r in self.rows))

    def hstack(self, *others: IntMatrix) -> IntMatrix:
        rows = [list(r) for r in self.rows]
        ncols = self.ncols
        for o in others:
            if o.nrows != self.nrows:
                raise ValueError("row count mismatch in hstack")
            for r, s in zip(rows, o.rows):
                r.extend(s)
            ncols += o.ncols
        return IntMatrix.from_rows(rows, ncols)

    def vstack(self, *others: IntMatrix) -> IntMatrix:
        rows = list(self.rows)
        for o in others:
            if o.ncols != self.ncols:
                raise ValueError("column count mismatch in vstack")
            rows.extend(o.rows)
        return IntMatrix(len(rows), self.ncols, tuple(rows))

    def select_columns(self, idx: Iterable[int]) -> IntMatrix:
        idx = list(idx)
        return IntMatrix.from_rows(([r[j] for j in idx] for r in self.rows), len(idx))

    def select_rows(self, idx: Iterable[int]) -> IntMatrix:
        return IntMatrix.from_rows((self.rows[i] for i in idx), self.ncols)

    def __repr__(self):
        return f"IntMatrix({self.tolist()!r}, shape={self.shape})"


def det(A: IntMatrix) -> int:
    """Determinant by fraction-free Bareiss elimination."""
    if A.nrows != A.ncols:
        raise ValueError("determinant of a non-square matrix")
    n = A.nrows
    if n == 0:
        return 1
    M = A.tolist()
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SmithForm:
    """``U @ A @ V == D`` with U, V unimodular; ``U_inv`` is ``U``'s inverse."""

    U: IntMatrix
    U_inv: IntMatrix
    D: IntMatrix
    V: IntMatrix
    rank: int

    @property
    def diagonal(self) -> list[int]:
        return [self.D[i, i] for i in range(min(self.D.shape))]


def _min_pivot(A, t, m, n):
    best = None
    for i in range(t, m):
        row = A[i]
        for j in range(t, n):
            a = row[j]
            if a and (best is None or abs(a) < best[0]):
                best = (abs(a), i, j)
                if best[0] == 1:
                    return best
    return best


def smith(A: IntMatrix) -> SmithForm:
    """Smith normal form with transforms.

    Pivot rule: the nonzero entry of least absolute value in the remaining
    block, ties broken by (row, col). Deterministic for a given input.
    """
    m, n = A.shape
    M = A.tolist()
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    Ui = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, k):
        M[i], M[k] = M[k], M[i]
        U[i], U[k] = U[k], U[i]
        for r in Ui:
            r[i], r[k] = r[k], r[i]

    def swap_cols(j, k):
        for r in M:
            r[j], r[k] = r[k], r[j]
        for r in V:
            r[j], r[k] = r[k], r[j]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        if q == 0:
            return
        Md, Ms = M[dst], M[src]
        for c in range(n):
            Md[c] += q * Ms[c]
        Ud, Us = U[dst], U[src]
        for c in range(m):
            Ud[c] += q * Us[c]
        for r in Ui:
            r[src] -= q * r[dst]

    def add_col(dst, src, q):
        if q == 0:
            return
        for r in M:
            r[dst] += q * r[src]
        for r in V:
            r[dst] += q * r[src]

    def negate_row(i):
        M[i] = [-x for x in M[i]]
        U[i] = [-x for x in U[i]]
        for r in Ui:
            r[i] = -r[i]

    t = 0
    while t < min(m, n):
        piv = _min_pivot(M, t, m, n)
        if piv is None:
            break
        _, pi, pj = piv
        if pi != t:
            swap_rows(t, pi)
        if pj != t:
            swap_cols(t, pj)
        while True:
            p = M[t][t]
            dirty = False
            for i in range(t + 1, m):
                if M[i][t]:
                    add_row(i, t, -(M[i][t] // p))
                    if M[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if M[t][j]:
                    add_col(j, t, -(M[t][j] // p))
                    if M[t][j]:
                        dirty = True
            if dirty:
                # a remainder survived: move the smallest one into the pivot slot
                best = None
                for i in range(t, m):
                    if M[i][t] and (best is None or abs(M[i][t]) < best[0]):
                        best = (abs(M[i][t]), i, t)
                for j in range(t + 1, n):
                    if M[t][j] and abs(M[t][j]) < best[0]:
                        best = (abs(M[t][j]), t, j)
                _, bi, bj = best
                if bi != t:
                    swap_rows(t, bi)
                if bj != t:
                    swap_cols(t, bj)
                continue
            # row and column cleared; enforce divisibility on the rest
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if M[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if M[t][t] < 0:
            negate_row(t)
        t += 1

    return SmithForm(
        U=IntMatrix.from_rows(U, m),
        U_inv=IntMatrix.from_rows(Ui, m),
        D=IntMatrix.from_rows(M, n),
        V=IntMatrix.from_rows(V, n),
        rank=t,
    )


def smith_normal_form(A: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(U, D, V)`` with ``U @ A @ V == D``."""
    s = smith(A)
    return s.U, s.D, s.V


def rank(A: IntMatrix) -> int:
    return smith(A).rank


def elementary_divisors(A: IntMatrix) -> list[int]:
    """Nonzero diagonal entries of the Smith form (including 1s)."""
    s = smith(A)
    return s.diagonal[: s.rank]


# ---------------------------------------------------------------------------
# Hermite normal form of a lattice given by column generators
# ---------------------------------------------------------------------------


def _xgcd(a, b):
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def hermite_columns(cols: Iterable[Sequence[int]], n: int) -> tuple[Vector, ...]:
    """Canonical basis of the lattice spanned by ``cols`` inside Z^n.

    The returned columns are in column echelon form: column k has its first
    nonzero entry (the pivot, positive) in row p_k with p_0 < p_1 < ...,
    and every other basis column has its row-p_k entry reduced into
    ``[0, pivot)``. Two generator lists span the same lattice iff they
    produce the same output.
    """
    work = [list(c) for c in cols if any(c)]
    basis: list[list[int]] = []
    pivots: list[int] = []
    for r in range(n):
        if not work:
            break
        nz = [c for c in work if c[r]]
        if not nz:
            continue
        rest = [c for c in work if not c[r]]
        piv = nz[0]
        for c in nz[1:]:
            a, b = piv[r], c[r]
            g, x, y = _xgcd(a, b)
            ag, bg = a // g, b // g
            new_piv = [x * u + y * v for u, v in zip(piv, c)]
            other = [ag * v - bg * u for u, v in zip(piv, c)]
            piv = new_piv
            if any(other):
                rest.append(other)
        if piv[r] < 0:
            piv = [-x for x in piv]
        p = piv[r]
        for b in basis:
            q = b[r] // p
            if q:
                for i in range(n):
                    b[i] -= q * piv[i]
        basis.append(piv)
        pivots.append(r)
        work = [c for c in rest if any(c)]
    return tuple(tuple(b) for b in basis)


def hermite_pivots(basis: Sequence[Sequence[int]]) -> list[int]:
    return [next(i for i, x in enumerate(b) if x) for b in basis]


def reduce_mod_lattice(v: Sequence[int], basis: Sequence[Sequence[int]],
                       pivots: Sequence[int] | None = None) -> Vector:
    """Canonical representative of ``v`` modulo a Hermite basis."""
    if pivots is None:
        pivots = hermite_pivots(basis)
    v = list(v)
    for b, p in zip(basis, pivots):
        q = v[p] // b[p]
        if q:
            for i in range(p, len(v)):
                v[i] -= q * b[i]
    return tuple(v)


# ---------------------------------------------------------------------------
# Solving
# ---------------------------------------------------------------------------


def solve(A: IntMatrix, b: Sequence[int], sf: SmithForm | None = None) -> Vector | None:
    """An integer solution of ``A x = b`` or ``None`` when there is none."""
    sf = sf or smith(A)
    c = sf.U.apply(b)
    y = [0] * A.ncols
    for i, ci in enumerate(c):
        if i < sf.rank:
            d = sf.D[i, i]
            if ci % d:
                return None
            y[i] = ci // d
        elif ci:
            return None
    return sf.V.apply(y)


def kernel_basis(A: IntMatrix, sf: SmithForm | None = None) -> list[Vector]:
    """A Z-basis of ``{x : A x = 0}``."""
    sf = sf or smith(A)
    return [sf.V.column(j) for j in range(sf.rank, A.ncols)]


def saturation_basis(cols: Sequence[Sequence[int]], n: int) -> list[Vector]:
    """Basis of (Q-span of cols) ∩ Z^n."""
    if not cols:
        return []
    sf = smith(IntMatrix.from_columns(cols, n))
    return [sf.U_inv.column(j) for j in range(sf.rank)]


def lcm(*xs: int) -> int:
    out = 1
    for x in xs:
        if x:
            out = out * abs(x) // gcd(out, x)
    return out
