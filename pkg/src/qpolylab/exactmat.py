"""Exact rational matrices over the standard module V = Q^X.

Scalars are :class:`fractions.Fraction` at the public surface.  Storage and
the heavy kernels (products, RREF, rank) are delegated to FLINT's ``fmpq_mat``,
which is exact; nothing here ever rounds.

Vectors are plain tuples of Fractions.  A "vector list" is either an
:class:`ExactMatrix` whose rows are the vectors or any sequence of vectors.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence, TextIO, Union

import flint

ExactVector = tuple  # tuple[Fraction, ...]
Number = Union[int, Fraction]


def to_fmpq(x) -> flint.fmpq:
    if isinstance(x, flint.fmpq):
        return x
    if isinstance(x, int):
        return flint.fmpq(x)
    x = Fraction(x)
    return flint.fmpq(x.numerator, x.denominator)


def from_fmpq(x: flint.fmpq) -> Fraction:
    return Fraction(int(x.p), int(x.q))


def format_scalar(x) -> str:
    x = x if isinstance(x, Fraction) else from_fmpq(to_fmpq(x))
    return f"{x.numerator}/{x.denominator}"


class ExactMatrix:
    __slots__ = ("_m",)

    def __init__(self, rows: Sequence[Sequence[Number]] | None = None, *,
                 shape: tuple[int, int] | None = None):
        if rows is None:
            r, c = shape if shape is not None else (0, 0)
            self._m = flint.fmpq_mat(r, c)
            return
        rows = [list(r) for r in rows]
        r = len(rows)
        c = len(rows[0]) if rows else (shape[1] if shape else 0)
        if any(len(row) != c for row in rows):
            raise ValueError("ragged rows")
        self._m = flint.fmpq_mat(r, c, [to_fmpq(x) for row in rows for x in row])

    @classmethod
    def _wrap(cls, m: flint.fmpq_mat) -> ExactMatrix:
        out = cls.__new__(cls)
        out._m = m
        return out

    @classmethod
    def from_flat(cls, rows: int, cols: int, entries: Sequence) -> ExactMatrix:
        entries = list(entries)
        try:
            # ints and fmpq go straight through
            return cls._wrap(flint.fmpq_mat(rows, cols, entries))
        except TypeError:
            return cls._wrap(flint.fmpq_mat(rows, cols, [to_fmpq(x) for x in entries]))

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> ExactMatrix:
        return cls._wrap(flint.fmpq_mat(rows, rows if cols is None else cols))

    @classmethod
    def identity(cls, n: int) -> ExactMatrix:
        return cls.diagonal([1] * n)

    @classmethod
    def diagonal(cls, entries: Sequence[Number]) -> ExactMatrix:
        n = len(entries)
        m = flint.fmpq_mat(n, n)
        for i, x in enumerate(entries):
            m[i, i] = to_fmpq(x)
        return cls._wrap(m)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[Number]]) -> ExactMatrix:
        return cls(columns).transpose()

    # -- shape and access ----------------------------------------------------

    @property
    def rows(self) -> int:
        return self._m.nrows()

    @property
    def cols(self) -> int:
        return self._m.ncols()

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        return from_fmpq(self._m[ij])

    def with_entry(self, i: int, j: int, value: Number) -> ExactMatrix:
        m = flint.fmpq_mat(self._m)
        m[i, j] = to_fmpq(value)
        return ExactMatrix._wrap(m)

    def row(self, i: int) -> ExactVector:
        return tuple(from_fmpq(self._m[i, j]) for j in range(self.cols))

    def column(self, j: int) -> ExactVector:
        return tuple(from_fmpq(self._m[i, j]) for i in range(self.rows))

    def to_lists(self) -> list[list[Fraction]]:
        flat = [from_fmpq(x) for x in self._m.entries()]
        c = self.cols
        return [flat[k:k + c] for k in range(0, len(flat), c)]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> ExactMatrix:
        flat, c = self._m.entries(), self.cols
        return ExactMatrix.from_flat(len(rows), len(cols),
                                     [flat[i * c + j] for i in rows for j in cols])

    def select_rows(self, rows: Sequence[int]) -> ExactMatrix:
        flat, c = self._m.entries(), self.cols
        return ExactMatrix.from_flat(len(rows), c,
                                     [x for i in rows for x in flat[i * c:(i + 1) * c]])

    def select_columns(self, cols: Sequence[int]) -> ExactMatrix:
        return self.submatrix(range(self.rows), cols)

    # -- arithmetic ----------------------------------------------------------

    def _conform(self, other: ExactMatrix) -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: ExactMatrix) -> ExactMatrix:
        self._conform(other)
        return ExactMatrix._wrap(self._m + other._m)

    def __sub__(self, other: ExactMatrix) -> ExactMatrix:
        self._conform(other)
        return ExactMatrix._wrap(self._m - other._m)

    def __neg__(self) -> ExactMatrix:
        return ExactMatrix._wrap(-self._m)

    def __mul__(self, scalar: Number) -> ExactMatrix:
        if isinstance(scalar, ExactMatrix):
            raise TypeError("use @ for matrix products")
        return ExactMatrix._wrap(self._m * to_fmpq(scalar))

    __rmul__ = __mul__

    def __matmul__(self, other: ExactMatrix) -> ExactMatrix:
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        return ExactMatrix._wrap(self._m * other._m)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and self._m == other._m

    __hash__ = None  # type: ignore[assignment]

    def transpose(self) -> ExactMatrix:
        return ExactMatrix._wrap(self._m.transpose())

    @property
    def T(self) -> ExactMatrix:
        return self.transpose()

    def trace(self) -> Fraction:
        if self.rows != self.cols:
            raise ValueError("trace of a non-square matrix")
        return sum((self[i, i] for i in range(self.rows)), Fraction(0))

    def is_zero(self) -> bool:
        return self._m == flint.fmpq_mat(self.rows, self.cols)

    def first_nonzero(self) -> tuple[int, int, Fraction] | None:
        """Row-major first nonzero entry, as (row, col, value)."""
        if self.is_zero():
            return None
        c = self.cols
        for k, x in enumerate(self._m.entries()):
            if x != 0:
                return k // c, k % c, from_fmpq(x)
        return None  # pragma: no cover

    def is_diagonal(self) -> bool:
        n = self.rows
        return n == self.cols and self == ExactMatrix.diagonal(
            [self._m[i, i] for i in range(n)])

    def diagonal_entries(self) -> list[Fraction]:
        return [self[i, i] for i in range(min(self.shape))]

    def power(self, k: int) -> ExactMatrix:
        out = ExactMatrix.identity(self.rows)
        for _ in range(k):
            out = out @ self
        return out

    def rank(self) -> int:
        return self._m.rank()

    def solve(self, rhs: ExactMatrix) -> ExactMatrix:
        """X with self @ X = rhs; self must be square and invertible."""
        if self.rows != self.cols or rhs.rows != self.rows:
            raise ValueError(f"cannot solve {self.shape} against {rhs.shape}")
        return ExactMatrix._wrap(self._m.solve(rhs._m))

    def minpoly(self):
        """Minimal polynomial as a FLINT ``fmpq_poly``."""
        return self._m.minpoly()

    def vectorize(self) -> list:
        return list(self._m.entries())

    def __repr__(self) -> str:
        return f"ExactMatrix({self.rows}x{self.cols})"

    def dump(self, out: TextIO) -> None:
        """Text format: "rows cols" header, then one row per line of p/q entries."""
        out.write(f"{self.rows} {self.cols}\n")
        for row in self.to_lists():
            out.write(" ".join(format_scalar(x) for x in row) + "\n")


def load_matrix(text: str) -> ExactMatrix:
    tokens = text.split()
    rows, cols = int(tokens[0]), int(tokens[1])
    entries = [Fraction(t) for t in tokens[2:]]
    if len(entries) != rows * cols:
        raise ValueError(f"expected {rows * cols} entries, found {len(entries)}")
    return ExactMatrix.from_flat(rows, cols, entries)


def mat_mul(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    return a @ b


def mat_add(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    return a + b


def scalar_mul(c: Number, a: ExactMatrix) -> ExactMatrix:
    return a * c


def mat_vec(a: ExactMatrix, v: Sequence[Number]) -> ExactVector:
    if len(v) != a.cols:
        raise ValueError(f"vector of length {len(v)} for a {a.shape} matrix")
    return (a @ as_matrix([v]).transpose()).column(0)


def as_matrix(vectors: ExactMatrix | Sequence[Sequence[Number]],
              length: int | None = None) -> ExactMatrix:
    """Stack a vector list into a matrix whose rows are the vectors."""
    if isinstance(vectors, ExactMatrix):
        return vectors
    vectors = list(vectors)
    if not vectors:
        if length is None:
            raise ValueError("empty vector list needs an explicit length")
        return ExactMatrix.zeros(0, length)
    return ExactMatrix(vectors)


def vstack(mats: Iterable[ExactMatrix]) -> ExactMatrix:
    mats = list(mats)
    cols = {m.cols for m in mats}
    if len(cols) != 1:
        raise ValueError(f"cannot stack matrices with column counts {sorted(cols)}")
    entries = [x for m in mats for x in m._m.entries()]
    return ExactMatrix.from_flat(sum(m.rows for m in mats), cols.pop(), entries)


def hstack(mats: Iterable[ExactMatrix]) -> ExactMatrix:
    return vstack([m.transpose() for m in mats]).transpose()


def rref(m: ExactMatrix) -> tuple[ExactMatrix, int, list[int]]:
    """Reduced row echelon form, rank and pivot columns.

    The RREF of a matrix is unique, so the result does not depend on the
    pivoting used inside the elimination.
    """
    if m.rows == 0 or m.cols == 0:
        return m, 0, []
    r, rank = m._m.rref()
    pivots = []
    for i in range(rank):
        j = pivots[-1] + 1 if pivots else 0
        while r[i, j] == 0:
            j += 1
        pivots.append(j)
    return ExactMatrix._wrap(r), rank, pivots


def rank(vectors: ExactMatrix | Sequence[Sequence[Number]], length: int | None = None) -> int:
    m = as_matrix(vectors, length)
    if m.rows == 0 or m.cols == 0:
        return 0
    return m.rank()


def kernel_basis(m: ExactMatrix) -> list[ExactVector]:
    """Right null space read off the RREF free columns.

    The vector for free column f has a 1 in position f, zeros in the other
    free positions, and is solved for the pivot positions.
    """
    r, rk, pivots = rref(m)
    free = [j for j in range(m.cols) if j not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -r[i, f]
        basis.append(tuple(v))
    return basis


def row_basis(vectors: ExactMatrix | Sequence[Sequence[Number]],
              length: int | None = None) -> ExactMatrix:
    """Canonical basis (nonzero RREF rows) of the span of a vector list."""
    m = as_matrix(vectors, length)
    if m.rows == 0:
        return m
    r, rk, _ = rref(m)
    return r.select_rows(range(rk))


def span_equal(u, w, length: int | None = None) -> bool:
    mu, mw = as_matrix(u, length), as_matrix(w, length)
    if mu.cols != mw.cols:
        raise ValueError("vectors of different lengths")
    ru, rw = rank(mu), rank(mw)
    return ru == rw and rank(vstack([mu, mw])) == ru


def span_contains(u, v: Sequence[Number] | ExactMatrix, length: int | None = None) -> bool:
    """True iff ``v`` (a vector, or every row of a matrix) lies in span(u)."""
    mu = as_matrix(u, length)
    mv = v if isinstance(v, ExactMatrix) else as_matrix([v])
    if mu.cols != mv.cols:
        raise ValueError("vectors of different lengths")
    return rank(vstack([mu, mv])) == rank(mu)


def intersection(u, w, length: int | None = None) -> ExactMatrix:
    """Basis (canonical rows) of span(u) ∩ span(w), via the kernel of [U^T | -W^T]."""
    bu, bw = row_basis(u, length), row_basis(w, length)
    n = bu.cols
    if bu.rows == 0 or bw.rows == 0:
        return ExactMatrix.zeros(0, n)
    stacked = hstack([bu.transpose(), -bw.transpose()])
    coeffs = kernel_basis(stacked)
    if not coeffs:
        return ExactMatrix.zeros(0, n)
    c = ExactMatrix([v[:bu.rows] for v in coeffs])
    return row_basis(c @ bu)


def coordinates(basis, v: Sequence[Number]) -> ExactVector | None:
    """Coefficients x with sum_k x_k basis[k] = v, or None if v is outside the span.

    ``basis`` must be linearly independent.
    """
    b = as_matrix(basis)
    aug = hstack([b.transpose(), as_matrix([v]).transpose()])
    r, rk, pivots = rref(aug)
    if pivots and pivots[-1] == b.rows:
        return None
    if rk != b.rows:
        raise ValueError("basis vectors are linearly dependent")
    return r.column(b.rows)[:b.rows]
