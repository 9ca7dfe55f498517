"""Dense exact-integer matrices and Smith-normal-form machinery.

Everything here runs on Python's arbitrary-precision integers; there is no
floating point and no modular shortcut anywhere.  Matrices are immutable,
so values can be shared freely between threads.

Convention used throughout the library: matrices act on column vectors,
i.e. column ``j`` of the matrix of an automorphism holds the image of the
``j``-th basis vector.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Optional, Sequence

from .errors import DimensionError, NotCompletableError, ValidationError


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix stored as a tuple of row tuples."""

    data: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.data:
            w = len(self.data[0])
            for row in self.data:
                if len(row) != w:
                    raise DimensionError("ragged rows in matrix literal")
                for x in row:
                    if not isinstance(x, int) or isinstance(x, bool):
                        raise ValidationError(f"non-integer entry {x!r}")

    # -- construction -------------------------------------------------

    @staticmethod
    def from_rows(rows: Iterable[Iterable[int]]) -> "IntMatrix":
        return IntMatrix(tuple(tuple(int(x) for x in row) for row in rows))

    @staticmethod
    def identity(n: int) -> "IntMatrix":
        return IntMatrix(tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @staticmethod
    def zeros(rows: int, cols: int) -> "IntMatrix":
        return IntMatrix(tuple((0,) * cols for _ in range(rows)))

    @staticmethod
    def column(values: Sequence[int]) -> "IntMatrix":
        return IntMatrix(tuple((int(v),) for v in values))

    @staticmethod
    def block_diag(blocks: Sequence["IntMatrix"]) -> "IntMatrix":
        n = sum(b.rows for b in blocks)
        m = sum(b.cols for b in blocks)
        out = [[0] * m for _ in range(n)]
        r = c = 0
        for b in blocks:
            for i in range(b.rows):
                out[r + i][c : c + b.cols] = list(b.data[i])
            r += b.rows
            c += b.cols
        return IntMatrix.from_rows(out)

    # -- shape ---------------------------------------------------------

    @property
    def rows(self) -> int:
        return len(self.data)

    @property
    def cols(self) -> int:
        return len(self.data[0]) if self.data else 0

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, ij: tuple[int, int]) -> int:
        return self.data[ij[0]][ij[1]]

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.data)

    def submatrix(self, r0: int, r1: int, c0: int, c1: int) -> "IntMatrix":
        return IntMatrix(tuple(row[c0:c1] for row in self.data[r0:r1]))

    def top_left(self, n: int) -> "IntMatrix":
        return self.submatrix(0, n, 0, n)

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.rows != other.rows:
            raise DimensionError("hstack needs equal row counts")
        return IntMatrix(tuple(a + b for a, b in zip(self.data, other.data)))

    def transpose(self) -> "IntMatrix":
        return IntMatrix(tuple(zip(*self.data))) if self.data else self

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        self._same_shape(other)
        return IntMatrix(
            tuple(tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(self.data, other.data))
        )

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        self._same_shape(other)
        return IntMatrix(
            tuple(tuple(a - b for a, b in zip(ra, rb)) for ra, rb in zip(self.data, other.data))
        )

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(tuple(tuple(-a for a in row) for row in self.data))

    def scale(self, c: int) -> "IntMatrix":
        return IntMatrix(tuple(tuple(c * a for a in row) for row in self.data))

    def __mul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        # row accumulation with zero skipping: the window matrices of block
        # automorphisms are mostly zeros and this keeps products near-linear
        cols = other.cols
        odata = other.data
        out = []
        for row in self.data:
            acc = [0] * cols
            for j, a in enumerate(row):
                if a:
                    orow = odata[j]
                    if a == 1:
                        for c, b in enumerate(orow):
                            if b:
                                acc[c] += b
                    elif a == -1:
                        for c, b in enumerate(orow):
                            if b:
                                acc[c] -= b
                    else:
                        for c, b in enumerate(orow):
                            if b:
                                acc[c] += a * b
            out.append(tuple(acc))
        return IntMatrix(tuple(out))

    def apply(self, vector: Sequence[int]) -> tuple[int, ...]:
        """Matrix times column vector."""
        if len(vector) != self.cols:
            raise DimensionError("vector length does not match column count")
        return tuple(sum(a * v for a, v in zip(row, vector)) for row in self.data)

    def power(self, e: int) -> "IntMatrix":
        if not self.is_square:
            raise DimensionError("power needs a square matrix")
        if e < 0:
            return self.inverse().power(-e)
        result = IntMatrix.identity(self.rows)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def _same_shape(self, other: "IntMatrix") -> None:
        if self.rows != other.rows or self.cols != other.cols:
            raise DimensionError("shape mismatch")

    # -- exact linear algebra -------------------------------------------

    def det(self) -> int:
        """Exact determinant by fraction-free (Bareiss) elimination."""
        if not self.is_square:
            raise DimensionError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        a = [list(row) for row in self.data]
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

    def is_unimodular(self) -> bool:
        return self.is_square and self.det() in (1, -1)

    def inverse(self) -> "IntMatrix":
        """Exact inverse of a unimodular matrix, via its Smith transforms."""
        res = snf(self)
        if not self.is_square or res.d != IntMatrix.identity(self.rows):
            raise ValidationError("matrix is not unimodular; no integer inverse")
        return res.v * res.u

    def entries(self) -> Iterable[int]:
        for row in self.data:
            yield from row

    def __str__(self) -> str:
        if not self.data:
            return "[]"
        widths = [max(len(str(row[j])) for row in self.data) for j in range(self.cols)]
        return "\n".join(
            " ".join(str(x).rjust(w) for x, w in zip(row, widths)) for row in self.data
        )


@dataclass(frozen=True)
class SnfResult:
    """Transforms ``u * input * v == d`` with u, v unimodular and d in Smith form."""

    u: IntMatrix
    d: IntMatrix
    v: IntMatrix

    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.d.data[i][i] for i in range(min(self.d.rows, self.d.cols)))


def _min_abs_pivot(a: list[list[int]], t: int, rows: int, cols: int) -> Optional[tuple[int, int]]:
    """Minimal-|entry| nonzero pivot in the trailing submatrix, first hit wins."""
    best = None
    where = None
    for i in range(t, rows):
        for j in range(t, cols):
            v = a[i][j]
            if v != 0 and (best is None or abs(v) < best):
                best = abs(v)
                where = (i, j)
                if best == 1:
                    return where
    return where


def snf(m: IntMatrix) -> SnfResult:
    """Smith normal form with both transforms.

    Pivots are chosen as the minimal-absolute-value nonzero entry with a
    fixed left-to-right scan, so identical inputs always produce identical
    transforms.  Diagonal entries come out nonnegative with each dividing
    the next; the sign is absorbed into ``v``.
    """
    rows, cols = m.rows, m.cols
    a = [list(row) for row in m.data]
    u = [[1 if i == j else 0 for j in range(rows)] for i in range(rows)]
    v = [[1 if i == j else 0 for j in range(cols)] for i in range(cols)]

    def swap_rows(i, j):
        if i != j:
            a[i], a[j] = a[j], a[i]
            u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        if i != j:
            for row in a:
                row[i], row[j] = row[j], row[i]
            for row in v:
                row[i], row[j] = row[j], row[i]

    def row_sub(i, j, q):
        # row_i -= q * row_j
        if q:
            ai, aj = a[i], a[j]
            for c in range(cols):
                ai[c] -= q * aj[c]
            ui, uj = u[i], u[j]
            for c in range(rows):
                ui[c] -= q * uj[c]

    def col_sub(i, j, q):
        # col_i -= q * col_j
        if q:
            for row in a:
                row[i] -= q * row[j]
            for row in v:
                row[i] -= q * row[j]

    t = 0
    lim = min(rows, cols)
    while t < lim:
        piv = _min_abs_pivot(a, t, rows, cols)
        if piv is None:
            break
        swap_rows(t, piv[0])
        swap_cols(t, piv[1])
        while True:
            for i in range(t + 1, rows):
                if a[i][t]:
                    row_sub(i, t, a[i][t] // a[t][t])
            for j in range(t + 1, cols):
                if a[t][j]:
                    col_sub(j, t, a[t][j] // a[t][t])
            leftovers = [i for i in range(t + 1, rows) if a[i][t]] or [
                j for j in range(t + 1, cols) if a[t][j]
            ]
            if not leftovers:
                break
            # a remainder survived; pull the smallest entry back to the pivot
            piv = _min_abs_pivot(a, t, rows, cols)
            swap_rows(t, piv[0])
            swap_cols(t, piv[1])
        # pivot now alone in its row and column; enforce divisibility
        p = a[t][t]
        offender = None
        for i in range(t + 1, rows):
            for j in range(t + 1, cols):
                if a[i][j] % p:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            row_sub(t, offender, -1)
            continue
        t += 1

    for i in range(lim):
        if a[i][i] < 0:
            for row in a:
                row[i] = -row[i]
            for row in v:
                row[i] = -row[i]

    return SnfResult(IntMatrix.from_rows(u), IntMatrix.from_rows(a), IntMatrix.from_rows(v))


def invariant_factors(m: IntMatrix) -> tuple[int, ...]:
    return snf(m).diagonal()


def is_unimodular_set(m: IntMatrix) -> bool:
    """True iff the columns extend to a basis of the ambient lattice.

    Equivalently, all invariant factors of the column matrix are 1 (the
    gcd of the maximal minors is 1).
    """
    if m.cols < 1:
        raise DimensionError("need at least one column")
    if m.cols > m.rows:
        raise DimensionError(f"{m.cols} columns cannot be independent in rank {m.rows}")
    return all(d == 1 for d in invariant_factors(m))


def complete_to_basis(m: IntMatrix) -> IntMatrix:
    """Extend a unimodular column set to a full basis.

    Returns an n x n unimodular matrix whose first ``m.cols`` columns equal
    the columns of ``m``.  The completion columns are read off the inverse
    of the Smith row transform: with ``u*m*v`` in Smith form with unit
    diagonal, the columns of ``m*v`` are the first k columns of ``u^-1``,
    so the trailing columns of ``u^-1`` complete them (and a final
    column-operation undoes ``v`` on the first block).
    """
    n, k = m.rows, m.cols
    res = snf(m)
    if k > n or any(d != 1 for d in res.diagonal()):
        raise NotCompletableError("columns do not form a unimodular set")
    if k == n:
        return m
    u_inv = res.u.inverse()
    completion = u_inv.submatrix(0, n, k, n)
    out = m.hstack(completion)
    if out.det() not in (1, -1):
        raise NotCompletableError("completion failed determinant check")
    return out


def solve_columns(m: IntMatrix, target: Sequence[int]) -> Optional[tuple[int, ...]]:
    """Integer solution x of ``m @ x == target``, or None if there is none."""
    if len(target) != m.rows:
        raise DimensionError("target length does not match row count")
    res = snf(m)
    w = res.u.apply(target)
    diag = res.diagonal()
    y = [0] * m.cols
    for i in range(m.rows):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            if w[i] != 0:
                return None
        else:
            if w[i] % d:
                return None
            if i < m.cols:
                y[i] = w[i] // d
    return res.v.apply(y)


def gcd_of_entries(m: IntMatrix) -> int:
    g = 0
    for x in m.entries():
        g = gcd(g, x)
    return g
