"""Exact dense linear algebra over the integers and rationals.

Everything here is pure Python on int and fractions.Fraction, so results are
exact by construction. Matrices are immutable; all mutating algorithms work on
private list-of-list copies. Sizes stay small (a few dozen rows), so clarity
wins over asymptotics, with one exception: determinants use fraction-free
Bareiss elimination to keep intermediate entries polynomial in size.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence, Union

Entry = Union[int, Fraction]


class SingularMatrixError(ValueError):
    """Raised when an exact inverse of a singular matrix is requested."""


def _norm(x) -> Entry:
    # canonical entry: plain int whenever the value is integral
    if isinstance(x, bool):
        return int(x)
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else x
    raise TypeError(f"matrix entries must be int or Fraction, got {type(x).__name__}")


class Matrix:
    """Immutable rectangular matrix with int or Fraction entries."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable[Entry]]):
        rws = tuple(tuple(_norm(x) for x in row) for row in rows)
        if rws and any(len(r) != len(rws[0]) for r in rws):
            raise ValueError("ragged rows")
        object.__setattr__(self, "rows", rws)
        object.__setattr__(self, "nrows", len(rws))
        object.__setattr__(self, "ncols", len(rws[0]) if rws else 0)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, m: int, n: int) -> "Matrix":
        return cls([[0] * n for _ in range(m)])

    @classmethod
    def diagonal(cls, entries: Sequence[Entry]) -> "Matrix":
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    # -- access ------------------------------------------------------------

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def row(self, i: int) -> tuple:
        return self.rows[i]

    def col(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix([[self.rows[i][j] for j in cols] for i in rows])

    @property
    def T(self) -> "Matrix":
        return Matrix(zip(*self.rows)) if self.nrows else Matrix([])

    @property
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    @property
    def is_integral(self) -> bool:
        return all(isinstance(x, int) for r in self.rows for x in r)

    @property
    def is_symmetric(self) -> bool:
        return self.is_square and all(
            self.rows[i][j] == self.rows[j][i]
            for i in range(self.nrows)
            for j in range(i)
        )

    def to_int(self) -> "Matrix":
        if not self.is_integral:
            raise ValueError("matrix has non-integer entries")
        return self

    # -- arithmetic ---------------------------------------------------------

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __neg__(self) -> "Matrix":
        return Matrix([[-x for x in r] for r in self.rows])

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Matrix(
            [[x + y for x, y in zip(r, s)] for r, s in zip(self.rows, other.rows)]
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def __mul__(self, scalar: Entry) -> "Matrix":
        return Matrix([[x * scalar for x in r] for r in self.rows])

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise ValueError("shape mismatch")
            cols = tuple(zip(*other.rows))
            return Matrix(
                [[_dot(r, c) for c in cols] for r in self.rows]
            )
        # matrix @ vector
        v = tuple(other)
        if self.ncols != len(v):
            raise ValueError("shape mismatch")
        return tuple(_norm(_dot(r, v)) for r in self.rows)

    def __rmatmul__(self, other):
        # vector @ matrix
        v = tuple(other)
        if self.nrows != len(v):
            raise ValueError("shape mismatch")
        return tuple(_norm(_dot(v, c)) for c in zip(*self.rows))

    def __pow__(self, k: int) -> "Matrix":
        if not self.is_square or k < 0:
            raise ValueError("power needs a square matrix and k >= 0")
        out = Matrix.identity(self.nrows)
        base = self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def __repr__(self):
        return "Matrix(%s)" % (list(map(list, self.rows)),)


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def dot(u: Sequence[Entry], v: Sequence[Entry]) -> Entry:
    """Exact inner product of two equal-length vectors."""
    if len(u) != len(v):
        raise ValueError("length mismatch")
    return _norm(sum(a * b for a, b in zip(u, v)))


def vec_gcd(v: Iterable[int]) -> int:
    """gcd of the absolute values; 0 for an all-zero (or empty) vector."""
    g = 0
    for x in v:
        if not isinstance(x, int):
            raise ValueError("gcd needs integer entries")
        g = gcd(g, abs(x))
    return g


def denominator_lcm(entries: Iterable[Entry]) -> int:
    out = 1
    for x in entries:
        if isinstance(x, Fraction):
            d = x.denominator
            out = out * d // gcd(out, d)
    return out


def det(a: Matrix):
    """Exact determinant of a square matrix, by Bareiss elimination.

    Fraction-free on integral input: every intermediate division is exact,
    entries stay integers of bit size linear in n. Rational input is scaled
    to integers first; the result is an int whenever it is integral.
    """
    if not a.is_square:
        raise ValueError("determinant needs a square matrix")
    if not a.is_integral:
        den = denominator_lcm(x for row in a.rows for x in row)
        scaled = Matrix([[int(Fraction(x) * den) for x in row] for row in a.rows])
        out = Fraction(det(scaled), den**a.nrows)
        return int(out) if out.denominator == 1 else out
    a.to_int()
    n = a.nrows
    if n == 0:
        return 1
    m = [list(r) for r in a.rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def is_positive_definite(a: Matrix) -> bool:
    """Sylvester test for a symmetric integral matrix.

    The Bareiss pivot before step k equals the leading principal minor of
    order k+1, so one elimination pass reads off all n minors.
    """
    if not a.is_symmetric:
        raise ValueError("definiteness test needs a symmetric matrix")
    a.to_int()
    n = a.nrows
    m = [list(r) for r in a.rows]
    prev = 1
    for k in range(n):
        if m[k][k] <= 0:
            return False
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return True


def signature(a: Matrix) -> tuple:
    """(positive, negative, zero) inertia of a symmetric rational matrix.

    Symmetric Gaussian congruence with exact rationals; Sylvester's law makes
    the count basis independent.
    """
    if not a.is_symmetric:
        raise ValueError("signature needs a symmetric matrix")
    n = a.nrows
    m = [[Fraction(x) for x in r] for r in a.rows]
    pos = neg = 0
    t = 0
    while t < n:
        piv = next((k for k in range(t, n) if m[k][k] != 0), None)
        if piv is None:
            spot = next(
                (
                    (i, j)
                    for i in range(t, n)
                    for j in range(i + 1, n)
                    if m[i][j] != 0
                ),
                None,
            )
            if spot is None:
                break  # remaining block is zero
            i, j = spot
            # symmetric op: row/col i += row/col j creates 2*m[i][j] on the diagonal
            for k in range(n):
                m[i][k] += m[j][k]
            for k in range(n):
                m[k][i] += m[k][j]
            piv = i
        if piv != t:
            m[piv], m[t] = m[t], m[piv]
            for row in m:
                row[piv], row[t] = row[t], row[piv]
        p = m[t][t]
        if p > 0:
            pos += 1
        else:
            neg += 1
        for i in range(t + 1, n):
            f = m[i][t] / p
            if f:
                for k in range(n):
                    m[i][k] -= f * m[t][k]
                for k in range(n):
                    m[k][i] -= f * m[k][t]
        t += 1
    return (pos, neg, n - pos - neg)


def inverse(a: Matrix) -> Matrix:
    """Exact rational inverse by Gauss-Jordan elimination.

    Raises SingularMatrixError when no inverse exists.
    """
    if not a.is_square:
        raise ValueError("inverse needs a square matrix")
    n = a.nrows
    m = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)]
         for i, r in enumerate(a.rows)]
    for k in range(n):
        piv = next((i for i in range(k, n) if m[i][k] != 0), None)
        if piv is None:
            raise SingularMatrixError("matrix is singular")
        m[k], m[piv] = m[piv], m[k]
        p = m[k][k]
        m[k] = [x / p for x in m[k]]
        for i in range(n):
            if i != k and m[i][k]:
                f = m[i][k]
                m[i] = [x - f * y for x, y in zip(m[i], m[k])]
    return Matrix([row[n:] for row in m])


def smith_normal_form(a: Matrix):
    """Smith normal form with transforms.

    Returns (U, D, V) with U @ a @ V == D, U and V unimodular, and D diagonal
    with non-negative entries d_1 | d_2 | ... (zeros last). Works for any
    rectangular integral matrix.
    """
    a.to_int()
    m, n = a.nrows, a.ncols
    A = [list(r) for r in a.rows]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def add_row(i, j, q):  # row i += q * row j
        A[i] = [x + q * y for x, y in zip(A[i], A[j])]
        U[i] = [x + q * y for x, y in zip(U[i], U[j])]

    def add_col(i, j, q):  # col i += q * col j
        for r in A:
            r[i] += q * r[j]
        for r in V:
            r[i] += q * r[j]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    for t in range(min(m, n)):
        while True:
            # smallest nonzero entry of the working submatrix as pivot
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    x = A[i][j]
                    if x != 0 and (best is None or abs(x) < abs(best[2])):
                        best = (i, j, x)
            if best is None:
                break
            bi, bj, _ = best
            if bi != t:
                swap_rows(t, bi)
            if bj != t:
                swap_cols(t, bj)
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t] != 0:
                    add_row(i, t, -(A[i][t] // p))
                    if A[i][t] != 0:
                        dirty = True  # remainder becomes a smaller pivot
            for j in range(t + 1, n):
                if A[t][j] != 0:
                    add_col(j, t, -(A[t][j] // p))
                    if A[t][j] != 0:
                        dirty = True
            if dirty:
                continue
            # pivot must divide the whole remaining block for the chain d_i | d_{i+1}
            witness = next(
                (
                    (i, j)
                    for i in range(t + 1, m)
                    for j in range(t + 1, n)
                    if A[i][j] % p != 0
                ),
                None,
            )
            if witness is None:
                break
            add_row(t, witness[0], 1)
        if t < m and t < n and A[t][t] == 0:
            break  # submatrix exhausted, zeros from here on

    for i in range(min(m, n)):
        if A[i][i] < 0:
            A[i] = [-x for x in A[i]]
            U[i] = [-x for x in U[i]]
    return Matrix(U), Matrix(A), Matrix(V)
