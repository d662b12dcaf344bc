from fractions import Fraction

import pytest

from qpolylab.exactmat import ExactMatrix
from qpolylab.gfspace import gaussian_binomial
from qpolylab.operators import (DuplicateEigenvalues, build_idempotents, eigenvalues,
                                verify_operators)

from conftest import failures, geometry, operators


def test_adjacency_for_N1():
    assert operators(2, 1).A.to_lists() == [[0, 1], [1, 0]]


def test_adjacency_weights():
    g, o = geometry(3, 2), operators(3, 2)
    z = g.zero_index
    for y in range(g.size):
        for w in g.cover_up[y]:
            assert o.A[y, w] == 3 ** g.dim(y)
            assert o.A[w, y] == 1
    a0 = o.A.column(z)
    assert [y for y, x in enumerate(a0) if x] == g.level(1)


def test_dual_adjacency_and_sign():
    g, o = geometry(2, 2), operators(2, 2)
    assert o.Astar[g.zero_index, g.zero_index] == 1
    top = g.level(2)[0]
    assert o.Astar[top, top] == Fraction(1, 4)
    for q, N in [(2, 3), (3, 2)]:
        o = operators(q, N)
        assert o.Astar.trace() == sum(Fraction(gaussian_binomial(N, i, q), q**i)
                                      for i in range(N + 1))
        assert o.S.trace() == sum((-1) ** i * gaussian_binomial(N, i, q) for i in range(N + 1))
        assert (o.S @ o.S) == o.identity()


def test_eigenvalue_values():
    theta, _ = eigenvalues(3, 2)
    assert theta == (7, 2, -2, -7)
    assert eigenvalues(4, 3)[0][2] == 0
    assert eigenvalues(2, 3)[1] == (1, Fraction(1, 3), Fraction(1, 9))


def test_idempotents_N1():
    o = operators(2, 1)
    assert o.E[0] == (o.A + o.identity()) * Fraction(1, 2)


def test_idempotent_ranks_q2_N4():
    assert [e.rank() for e in operators(2, 4).E] == [1, 15, 35, 15, 1]


def test_duplicate_eigenvalues_refused():
    with pytest.raises(DuplicateEigenvalues):
        build_idempotents(ExactMatrix.identity(2), [1, 1])


@pytest.mark.parametrize("q,N", [(2, 1), (2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (4, 2)])
def test_operator_checks_pass(q, N):
    results = verify_operators(operators(q, N))
    assert failures(results) == []
    assert len({r.id for r in results}) == len(results)


def test_operator_checks_detect_a_flipped_entry():
    from qpolylab.operators import build_A, build_operators
    g = geometry(2, 3)
    bad = build_A(g).with_entry(g.level(1)[0], g.zero_index, 0)
    results = {r.id: r for r in verify_operators(build_operators(g, bad))}
    assert not results["operators.weighted-adjacency"].passed
    assert not results["spectrum.decomposition"].passed or not results[
        "spectrum.idempotent-orthogonality"].passed
