from fractions import Fraction

import pytest

from qpolylab.exactmat import ExactMatrix
from qpolylab.qpolyverify import (QPolyCertificate, SpectrumRefused, certify,
                                  generic_dual_adjacency_check, rational_spectrum,
                                  tridiagonal_residuals, tridiagonal_scalar_residual,
                                  verify_dual_adjacency, verify_tridiagonal_relations)
from qpolylab.splitbasis import SpanOracle, build_families, build_split_decomposition

from conftest import failures, geometry, operators


def adjacency_lists(g):
    return [sorted(g.neighbours(y)) for y in range(g.size)]


def test_far_blocks_vanish_q2_N4():
    cert = QPolyCertificate()
    assert failures(verify_dual_adjacency(operators(2, 4), cert)) == []
    # 25 ordered pairs minus 5 diagonal minus 8 adjacent
    assert len(cert.far_blocks) == 12 and all(cert.far_blocks.values())
    assert cert.generator_checks["dim_M"] == cert.generator_checks["dim_M_star"] == 5


def test_near_block_recorded_q2_N2():
    cert = QPolyCertificate()
    verify_dual_adjacency(operators(2, 2), cert)
    assert cert.near_blocks_nonzero[(0, 1)]
    o = operators(2, 2)
    assert not (o.E[0] @ o.Astar @ o.E[1]).is_zero()


def test_N1_has_no_far_pairs():
    cert = QPolyCertificate()
    assert failures(verify_dual_adjacency(operators(2, 1), cert)) == []
    assert cert.far_blocks == {} and cert.passed


@pytest.mark.parametrize("q,N", [(2, 2), (3, 3), (4, 2), (2, 4)])
def test_tridiagonal_relations(q, N):
    cert = QPolyCertificate()
    assert failures(verify_tridiagonal_relations(operators(q, N), cert)) == []
    r1, r2 = tridiagonal_residuals(operators(q, N))
    assert r1.is_zero() and r2.is_zero()
    assert cert.residuals_zero == {"R1": True, "R2": True}


def test_relation_coefficient_q2_N2():
    o = operators(2, 2)
    A, As = o.A, o.Astar
    beta = Fraction(2) + Fraction(1, 2) + 1
    cubic = (A @ A @ A @ As - (A @ A @ As @ A) * beta + (A @ As @ A @ A) * beta
             - As @ A @ A @ A)
    commutator = A @ As - As @ A
    assert (cubic - commutator * 9).is_zero()
    assert not (cubic - commutator * 8).is_zero()
    theta = o.theta
    assert all(tridiagonal_scalar_residual(theta, i, i + 1, 2, 2) == 0 for i in range(2))
    assert tridiagonal_scalar_residual(theta, 0, 2, 2, 2) != 0


@pytest.mark.parametrize("q,N", [(2, 2), (2, 3), (3, 3), (4, 2)])
def test_certificate_with_replay(q, N):
    o = operators(q, N)
    fams = build_families(o.geometry)
    decomps = {v: build_split_decomposition(o, f) for v, f in fams.items()}
    cert, results = certify(o, decomps, SpanOracle(o))
    assert failures(results) == []
    assert cert.passed and cert.replay_agrees
    assert cert.to_json()["passed"] is True


def test_certificate_is_monotone():
    cert = QPolyCertificate()
    from qpolylab.checks import CheckResult, FAIL, PASS
    cert.absorb([CheckResult("a", "", FAIL)])
    cert.absorb([CheckResult("b", "", PASS)])
    assert not cert.passed


def test_generic_check_accepts_the_weighted_matrix():
    g, o = geometry(2, 2), operators(2, 2)
    adj = adjacency_lists(g)
    assert generic_dual_adjacency_check(o.A, g.zero_index, adj, o.Astar, list(o.theta))
    assert generic_dual_adjacency_check(o.A, g.zero_index, adj, o.Astar)
    assert rational_spectrum(o.A) == [3, 0, -3]


def test_generic_check_path_on_two_vertices():
    A = ExactMatrix([[0, 1], [1, 0]])
    assert generic_dual_adjacency_check(A, 0, [[1], [0]], ExactMatrix.diagonal([1, 2]))


def test_unweighted_adjacency_is_refused():
    # K_{2,3} has eigenvalues +-sqrt(6), 0: no rational diagonalization exists
    g, o = geometry(2, 2), operators(2, 2)
    unweighted = ExactMatrix([[int(x != 0) for x in row] for row in o.A.to_lists()])
    with pytest.raises(SpectrumRefused, match="not diagonalizable over the rationals"):
        generic_dual_adjacency_check(unweighted, g.zero_index, adjacency_lists(g), o.Astar)


def test_reversed_weights_fail():
    # same graph, same spectrum (7, 2, -2, -7), upward weight q^(N-1-dim y): expected-fail
    g, o = geometry(2, 3), operators(2, 3)
    n = g.size
    rows = [[0] * n for _ in range(n)]
    for y in range(n):
        for z in g.cover_up[y]:
            rows[y][z] = 2 ** (2 - g.dim(y))
            rows[z][y] = 1
    bad = ExactMatrix(rows)
    assert rational_spectrum(bad) == list(o.theta)
    assert not generic_dual_adjacency_check(bad, g.zero_index, adjacency_lists(g), o.Astar)


def test_generic_check_input_validation():
    A = ExactMatrix([[0, 1], [1, 0]])
    with pytest.raises(SpectrumRefused):
        generic_dual_adjacency_check(A, 0, [[1], [0]], ExactMatrix.diagonal([1, 2]), [1, 2])
    with pytest.raises(ValueError):
        generic_dual_adjacency_check(A, 0, [[1]], ExactMatrix.diagonal([1, 2]))
    # A* constant across both subconstituents does not generate M*
    assert not generic_dual_adjacency_check(A, 0, [[1], [0]], ExactMatrix.identity(2))
    # support of A disagrees with the graph
    assert not generic_dual_adjacency_check(A, 0, [[], []], ExactMatrix.diagonal([1, 2]))
