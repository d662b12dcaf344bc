from fractions import Fraction

import pytest

from qpolylab.exactmat import ExactMatrix
from qpolylab.qpolyverify import rational_spectrum
from qpolylab.tmodule import (CrossCheckFailed, IrreducibleModule, decompose,
                              expected_multiplicity, leonard_parameters, leonard_parameters_for,
                              lowering_raising, module_restriction, verify_modules,
                              verify_tridiagonal_pair)

from conftest import failures, geometry, operators


def test_lowering_raising_examples():
    o = operators(2, 2)
    g = o.geometry
    L, R = lowering_raising(o)
    z = g.zero_index
    assert L.column(z) == (0,) * g.size
    assert [y for y, x in enumerate(R.column(z)) if x] == g.level(1)
    assert set(R.column(z)) == {0, 1}
    o3 = operators(3, 3)
    L3, R3 = lowering_raising(o3)
    assert L3 + R3 == o3.A


@pytest.mark.parametrize("q,N,mu", [
    (2, 2, {0: 1, 1: 2}), (2, 4, {0: 1, 1: 14, 2: 20}), (3, 3, {0: 1, 1: 12}),
    (4, 2, {0: 1, 1: 4}), (2, 1, {0: 1}),
])
def test_multiplicities(q, N, mu):
    s = decompose(operators(q, N))
    assert s.multiplicities == mu
    assert all(mu[r] == expected_multiplicity(N, r, q) for r in mu)
    assert sum(m * (N - 2 * r + 1) for r, m in mu.items()) == geometry(q, N).size


def test_primary_module():
    o = operators(2, 4)
    s = decompose(o)
    primary = [m for m in s.modules if m.r == 0]
    assert len(primary) == 1 and primary[0].dim == 5


@pytest.mark.parametrize("q,N", [(2, 1), (2, 2), (2, 3), (2, 4), (3, 3), (4, 2)])
def test_module_checks_pass(q, N):
    o = operators(q, N)
    lr = lowering_raising(o)
    s = decompose(o, lr)
    assert failures(verify_modules(o, s, lr)) == []
    assert all(m.t == m.r and m.delta == m.d for m in s.modules)


def test_primary_restriction_eigenvalues_q2_N2():
    s = decompose(operators(2, 2))
    assert rational_spectrum(s.restriction(0)) == [3, 0, -3]


def test_middle_module_is_zero_dimensional_action():
    o = operators(2, 2)
    s = decompose(o)
    mid = [k for k, m in enumerate(s.modules) if m.r == 1]
    assert all(s.restriction(k) == ExactMatrix.zeros(1) for k in mid)


def test_tridiagonal_pair_standalone():
    o = operators(2, 3)
    s = decompose(o)
    for m in s.modules:
        assert verify_tridiagonal_pair(m, o)
        AW = module_restriction(m, o.A)
        assert AW is not None and AW.rows == m.d + 1


def test_tridiagonal_pair_rejects_a_non_module():
    o = operators(2, 2)
    g = o.geometry
    y = g.level(1)[0]
    v = tuple(Fraction(int(k == y)) for k in range(g.size))
    fake = IrreducibleModule(r=1, d=0, basis=(v,))
    verdict = verify_tridiagonal_pair(fake, o)
    assert not verdict and "invariant" in verdict.clause


def test_leonard_parameters():
    lp = leonard_parameters_for(0, 2, 4)
    assert (lp.d, lp.h, lp.h_star, lp.s, lp.theta0, lp.theta0_star) == (
        4, Fraction(16), 1, Fraction(-1, 32), 15, 1)
    lp = leonard_parameters(IrreducibleModule(1, 2, ()), 2, 4)
    assert lp.theta0 == 6 == operators(2, 4).theta[1]
    assert lp.h_star == lp.theta0_star == Fraction(1, 2)
    assert lp.eigenvalues(2) == list(operators(2, 4).theta[1:4])
    lp3 = leonard_parameters_for(1, 3, 4)
    assert lp3.h == Fraction(27, 2) and lp3.s == Fraction(-1, 27)
    assert issubclass(CrossCheckFailed, ValueError)
