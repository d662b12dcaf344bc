import io
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qpolylab.exactmat import (ExactMatrix, coordinates, format_scalar, hstack, intersection,
                               kernel_basis, load_matrix, rank, row_basis, rref, span_contains,
                               span_equal, vstack)


def fraction_rref(rows):
    """Independent Gauss-Jordan over Fractions: (rref rows, pivots)."""
    m = [[Fraction(x) for x in r] for r in rows]
    pivots, r = [], 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        p = next((k for k in range(r, len(m)) if m[k][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for k in range(len(m)):
            if k != r and m[k][c] != 0:
                f = m[k][c]
                m[k] = [a - f * b for a, b in zip(m[k], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


small = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def matrices(draw, max_rows=5, max_cols=5):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    zero_bias = st.one_of(st.just(Fraction(0)), small)
    return [[draw(zero_bias) for _ in range(c)] for _ in range(r)]


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_rref_matches_fraction_oracle(rows):
    R, rk, pivots = rref(ExactMatrix(rows))
    want, want_pivots = fraction_rref(rows)
    assert R.to_lists() == want
    assert pivots == want_pivots and rk == len(want_pivots)


@settings(max_examples=100, deadline=None)
@given(matrices())
def test_rref_idempotent_and_rank_of_transpose(rows):
    m = ExactMatrix(rows)
    R, rk, _ = rref(m)
    assert rref(R)[0] == R
    assert m.rank() == m.transpose().rank() == rk


@settings(max_examples=100, deadline=None)
@given(matrices())
def test_kernel_vectors_are_annihilated(rows):
    m = ExactMatrix(rows)
    ker = kernel_basis(m)
    assert len(ker) == m.cols - m.rank()
    for v in ker:
        assert all(x == 0 for x in (m @ ExactMatrix.from_columns([v])).column(0))


def test_ring_laws_and_associativity():
    rnd = random.Random(20240611)

    def rand_mat():
        return ExactMatrix([[Fraction(rnd.randint(-9, 9), rnd.randint(1, 5)) for _ in range(5)]
                            for _ in range(5)])

    a, b, c = rand_mat(), rand_mat(), rand_mat()
    eye = ExactMatrix.identity(5)
    assert eye @ a == a == a @ eye
    assert (a + a * -1).is_zero()
    assert (a @ b) @ c == a @ (b @ c)
    assert (a - b) + b == a
    assert (a @ b).transpose() == b.T @ a.T


def test_small_examples():
    assert rref(ExactMatrix.identity(3))[1] == 3
    assert rref(ExactMatrix.zeros(3))[1] == 0
    assert rank(ExactMatrix([[1] * 3] * 3)) == 1
    assert kernel_basis(ExactMatrix.identity(3)) == []
    assert len(kernel_basis(ExactMatrix.zeros(4))) == 4
    assert kernel_basis(ExactMatrix([[1, 1]])) == [(Fraction(-1), Fraction(1))]


def test_span_predicates():
    e1, e2 = (1, 0, 0), (0, 1, 0)
    assert span_equal([e1, e2], [e1, e2])
    assert span_equal([e1], [(2, 0, 0)])
    assert not span_equal([e1], [e2])
    assert span_contains([e1, e2], (3, -1, 0))
    assert not span_contains([e1, e2], (0, 0, 1))
    meet = intersection([e1, e2], [(1, 1, 0), (0, 0, 1)])
    assert meet.rows == 1 and span_equal(meet, [(1, 1, 0)])
    assert intersection([e1], [e2]).rows == 0
    assert coordinates([e1, e2], (3, 4, 0)) == (3, 4)
    assert coordinates([e1, e2], (0, 0, 1)) is None
    assert row_basis([e1, e1, e2]).rows == 2


def test_stacking():
    a = ExactMatrix([[1, 2]])
    b = ExactMatrix([[3, 4]])
    assert vstack([a, b]).to_lists() == [[1, 2], [3, 4]]
    assert hstack([a, b]).to_lists() == [[1, 2, 3, 4]]
    with pytest.raises(ValueError):
        vstack([a, ExactMatrix([[1]])])


def test_dump_round_trip_and_format():
    m = ExactMatrix([[Fraction(1, 3), 0], [-2, Fraction(7, 4)]])
    buf = io.StringIO()
    m.dump(buf)
    text = buf.getvalue()
    assert text.splitlines()[0] == "2 2"
    assert "1/3" in text and "-2/1" in text and "0/1" in text
    assert load_matrix(text) == m
    assert format_scalar(Fraction(-6, 4)) == "-3/2"


def test_entry_access_and_mutation():
    m = ExactMatrix.diagonal([1, Fraction(1, 2)])
    assert m[1, 1] == Fraction(1, 2) and isinstance(m[1, 1], Fraction)
    m2 = m.with_entry(0, 1, 5)
    assert m2[0, 1] == 5 and m[0, 1] == 0
    assert m.is_diagonal() and not m2.is_diagonal()
    assert m2.first_nonzero() == (0, 0, Fraction(1))
    assert m.solve(ExactMatrix.identity(2)) == ExactMatrix.diagonal([1, 2])
