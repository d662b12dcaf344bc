"""Finite fields GF(q), q-combinatorics, and canonical enumeration of subspaces.

Field elements are encoded as integers in ``range(q)``: the element with
coefficient vector ``(c_0, ..., c_{e-1})`` over GF(p) (constant term first)
is ``c_0 + c_1 p + ... + c_{e-1} p^{e-1}``.  For prime fields this is just
the residue mod p.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Sequence

DEFAULT_SIZE_LIMIT = 5000


class FieldError(ValueError):
    """Invalid field description (non-prime characteristic, bad modulus)."""


class SizeLimitExceeded(ValueError):
    def __init__(self, total: int, limit: int):
        super().__init__(
            f"geometry has {total} vertices, above the size limit {limit}"
        )
        self.total = total
        self.limit = limit


class AmbientMismatch(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def q_integer(n: int, q: int) -> int:
    """Return ``[n]_q = (q^n - 1)/(q - 1)``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return (q**n - 1) // (q - 1)


def q_factorial(n: int, q: int) -> int:
    out = 1
    for k in range(1, n + 1):
        out *= q_integer(k, q)
    return out


def gaussian_binomial(n: int, i: int, q: int) -> int:
    """Number of ``i``-dimensional subspaces of GF(q)^n (0 outside ``[0, n]``)."""
    if i < 0 or i > n:
        return 0
    num = q_factorial(n, q)
    den = q_factorial(i, q) * q_factorial(n - i, q)
    quot, rem = divmod(num, den)
    assert rem == 0
    return quot


def total_subspaces(n: int, q: int) -> int:
    return sum(gaussian_binomial(n, i, q) for i in range(n + 1))


# -- polynomials over GF(p), coefficient lists with constant term first ------


def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    """Remainder of ``a`` modulo the monic polynomial ``m``."""
    a = _poly_trim([c % p for c in a])
    dm = len(m) - 1
    while len(a) - 1 >= dm:
        lead = a[-1]
        shift = len(a) - 1 - dm
        for k, c in enumerate(m):
            a[shift + k] = (a[shift + k] - lead * c) % p
        _poly_trim(a)
    return a


def _monic_polys(degree: int, p: int) -> Iterator[list[int]]:
    for low in itertools.product(range(p), repeat=degree):
        yield list(low) + [1]


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    e = len(modulus) - 1
    for d in range(1, e // 2 + 1):
        for f in _monic_polys(d, p):
            if not _poly_mod(modulus, f, p):
                return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """GF(p^e); ``modulus`` lists the coefficients of a monic irreducible
    polynomial of degree ``e``, constant term first (x^2+x+1 -> (1, 1, 1))."""

    p: int
    e: int = 1
    modulus: tuple[int, ...] | None = None
    _mul: tuple[tuple[int, ...], ...] | None = field(
        default=None, init=False, repr=False, compare=False
    )
    _add: tuple[tuple[int, ...], ...] | None = field(
        default=None, init=False, repr=False, compare=False
    )
    _neg: tuple[int, ...] | None = field(
        default=None, init=False, repr=False, compare=False
    )

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise FieldError(f"characteristic {self.p} is not prime")
        if self.e < 1:
            raise FieldError("extension degree must be at least 1")
        if self.e == 1:
            if self.modulus is not None:
                raise FieldError("a modulus is only meaningful when e > 1")
            return
        if self.modulus is None:
            raise FieldError(f"GF({self.p}^{self.e}) needs an irreducible modulus")
        mod = tuple(int(c) for c in self.modulus)
        object.__setattr__(self, "modulus", mod)
        if len(mod) != self.e + 1 or mod[-1] != 1:
            raise FieldError(f"modulus must be monic of degree {self.e}: {mod}")
        if any(not 0 <= c < self.p for c in mod):
            raise FieldError(f"modulus coefficients must lie in [0, {self.p})")
        if not is_irreducible(mod, self.p):
            raise FieldError(f"modulus {mod} is reducible over GF({self.p})")
        q = self.q
        add = tuple(
            tuple(self._encode([(x + y) % self.p for x, y in
                                zip(self.coeffs(a), self.coeffs(b))])
                  for b in range(q))
            for a in range(q)
        )
        mul = tuple(
            tuple(self._poly_product(a, b) for b in range(q)) for a in range(q)
        )
        object.__setattr__(self, "_add", add)
        object.__setattr__(self, "_mul", mul)
        object.__setattr__(self, "_neg", tuple(row.index(0) for row in add))

    @property
    def q(self) -> int:
        return self.p**self.e

    def coeffs(self, a: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.e):
            a, c = divmod(a, self.p)
            out.append(c)
        return tuple(out)

    def _encode(self, coeffs: Sequence[int]) -> int:
        return sum(c * self.p**k for k, c in enumerate(coeffs))

    def _poly_product(self, a: int, b: int) -> int:
        ca, cb = self.coeffs(a), self.coeffs(b)
        prod = [0] * (2 * self.e - 1)
        for i, x in enumerate(ca):
            for j, y in enumerate(cb):
                prod[i + j] += x * y
        rem = _poly_mod(prod, self.modulus, self.p)
        return self._encode(rem + [0] * (self.e - len(rem)))

    def add(self, a: int, b: int) -> int:
        if self._add is None:
            return (a + b) % self.p
        return self._add[a][b]

    def mul(self, a: int, b: int) -> int:
        if self._mul is None:
            return a * b % self.p
        return self._mul[a][b]

    def neg(self, a: int) -> int:
        if self._neg is None:
            return -a % self.p
        return self._neg[a]

    def sub(self, a: int, b: int) -> int:
        if self._add is None:
            return (a - b) % self.p
        return self._add[a][self._neg[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse in GF(q)")
        if self._mul is None:
            return pow(a, -1, self.p)
        return self._mul[a].index(1)


@dataclass(frozen=True)
class Subspace:
    """A subspace of GF(q)^n, stored as its reduced row echelon basis."""

    field: FieldSpec
    n: int
    basis: tuple[tuple[int, ...], ...]
    pivots: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __repr__(self) -> str:
        rows = ",".join("".join(map(str, r)) for r in self.basis)
        return f"Subspace(dim={self.dim}, basis=[{rows}])"


def rref_rows(fld: FieldSpec, rows: Sequence[Sequence[int]], n: int) -> tuple[
    tuple[tuple[int, ...], ...], tuple[int, ...]
]:
    """Row-reduce vectors over ``fld``; returns (nonzero RREF rows, pivots)."""
    m = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(n):
        piv = next((k for k in range(r, len(m)) if m[k][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        s = fld.inv(m[r][c])
        m[r] = [fld.mul(s, x) for x in m[r]]
        for k in range(len(m)):
            if k != r and m[k][c] != 0:
                f = m[k][c]
                m[k] = [fld.sub(x, fld.mul(f, y)) for x, y in zip(m[k], m[r])]
        pivots.append(c)
        r += 1
    return tuple(tuple(row) for row in m[:r]), tuple(pivots)


def span(fld: FieldSpec, rows: Sequence[Sequence[int]], n: int) -> Subspace:
    basis, pivots = rref_rows(fld, rows, n)
    return Subspace(fld, n, basis, pivots)


def _rref_matrices(fld: FieldSpec, n: int, k: int) -> Iterator[Subspace]:
    q = fld.q
    for pivots in itertools.combinations(range(n), k):
        pivset = set(pivots)
        free = [(r, c) for r in range(k) for c in range(pivots[r] + 1, n)
                if c not in pivset]
        for values in itertools.product(range(q), repeat=len(free)):
            rows = [[0] * n for _ in range(k)]
            for r, c in enumerate(pivots):
                rows[r][c] = 1
            for (r, c), v in zip(free, values):
                rows[r][c] = v
            yield Subspace(fld, n, tuple(map(tuple, rows)), pivots)


def enumerate_subspaces(fld: FieldSpec, n: int,
                        size_limit: int | None = DEFAULT_SIZE_LIMIT) -> list[Subspace]:
    """All subspaces of GF(q)^n in canonical order.

    Order: ascending dimension, then pivot sets lexicographically, then the
    free (non-pivot) entries lexicographically in row-major order.
    """
    if n < 1:
        raise ValueError("N must be at least 1")
    total = total_subspaces(n, fld.q)
    if size_limit is not None and total > size_limit:
        raise SizeLimitExceeded(total, size_limit)
    out = []
    for k in range(n + 1):
        out.extend(_rref_matrices(fld, n, k))
    return out


def _check_ambient(z: Subspace, y: Subspace) -> None:
    if z.field != y.field or z.n != y.n:
        raise AmbientMismatch("subspaces live in different ambient spaces")


def reduces_to_zero(z: Subspace, v: Sequence[int]) -> bool:
    """True iff ``v`` lies in the row space of ``z``."""
    fld = z.field
    v = list(v)
    for row, c in zip(z.basis, z.pivots):
        f = v[c]
        if f:
            v = [fld.sub(x, fld.mul(f, y)) for x, y in zip(v, row)]
    return not any(v)


def contains(z: Subspace, y: Subspace) -> bool:
    """y <= z."""
    _check_ambient(z, y)
    if y.dim > z.dim:
        return False
    return all(reduces_to_zero(z, row) for row in y.basis)


def covers(z: Subspace, y: Subspace) -> bool:
    """z covers y: y <= z and dim z - dim y = 1."""
    _check_ambient(z, y)
    return z.dim - y.dim == 1 and contains(z, y)
