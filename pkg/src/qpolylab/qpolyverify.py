"""Q-polynomial certification: A* is a dual adjacency matrix with respect to 0.

The checkable form of "A* E_iV lies in E_{i-1}V + E_iV + E_{i+1}V" is the
block identity E_i A* E_j = 0 for |i - j| > 1, which is equivalent given
orthogonal idempotents summing to I.  The subspace form is exercised once
more by replaying the flag argument through the DD and UU split
decompositions.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from .checks import CheckResult, jsonable, run_check
from .exactmat import ExactMatrix, intersection, rank, span_equal, vstack
from .operators import OperatorSet, build_idempotents, residual_witness
from .splitbasis import DD, UU, SpanOracle, SplitDecomposition, SplitVariant


class SpectrumRefused(ValueError):
    """The matrix is not diagonalizable over Q with the given (or any rational) spectrum."""


@dataclass
class QPolyCertificate:
    passed: bool = True
    far_blocks: dict[tuple[int, int], bool] = field(default_factory=dict)
    near_blocks_nonzero: dict[tuple[int, int], bool] = field(default_factory=dict)
    block_tridiag_A_in_Estar: dict[tuple[int, int], bool] = field(default_factory=dict)
    generator_checks: dict[str, int] = field(default_factory=dict)
    residuals_zero: dict[str, bool] = field(default_factory=dict)
    replay_agrees: bool | None = None
    residuals: dict[str, ExactMatrix] = field(default_factory=dict, repr=False)

    def absorb(self, results: Sequence[CheckResult]) -> None:
        self.passed = self.passed and all(r.passed for r in results)

    def to_json(self) -> dict[str, Any]:
        def pairs(d):
            return [{"i": i, "j": j, "value": v} for (i, j), v in sorted(d.items())]

        return jsonable({
            "passed": self.passed,
            "block_tridiag_Astar_in_E": pairs(self.far_blocks),
            "near_blocks_nonzero": pairs(self.near_blocks_nonzero),
            "block_tridiag_A_in_Estar": pairs(self.block_tridiag_A_in_Estar),
            "generator_checks": self.generator_checks,
            "tridiagonal_relation_residuals_zero": self.residuals_zero,
            "replay_agrees": self.replay_agrees,
        })


def power_span_ranks(B: ExactMatrix, top: int) -> tuple[int, int]:
    """Ranks of {B^0..B^top} and {B^0..B^(top+1)} as vectors in Mat_X."""
    powers = [ExactMatrix.identity(B.rows)]
    for _ in range(top + 1):
        powers.append(powers[-1] @ B)
    vecs = [m.vectorize() for m in powers]
    return rank(vecs[:top + 1]), rank(vecs)


def verify_dual_adjacency(ops: OperatorSet,
                          cert: QPolyCertificate | None = None) -> list[CheckResult]:
    cert = cert if cert is not None else QPolyCertificate()
    N = ops.N
    E, Ast = ops.E, ops.Astar
    levels = [ops.geometry.level(i) for i in range(N + 1)]

    def far_blocks():
        found = None
        for i in range(N + 1):
            EA = E[i] @ Ast
            for j in range(N + 1):
                block = EA @ E[j]
                zero = block.is_zero()
                if abs(i - j) > 1:
                    cert.far_blocks[(i, j)] = zero
                    if not zero and found is None:
                        found = residual_witness(block, i=i, j=j)
                else:
                    cert.near_blocks_nonzero[(i, j)] = not zero
        return found

    def a_in_estar():
        found = None
        for i in range(N + 1):
            for j in range(N + 1):
                if abs(i - j) > 1:
                    block = ops.A.submatrix(levels[i], levels[j])
                    cert.block_tridiag_A_in_Estar[(i, j)] = block.is_zero()
                    if found is None and not block.is_zero():
                        r, c, x = block.first_nonzero()
                        found = {"i": i, "j": j, "row": levels[i][r], "col": levels[j][c],
                                 "entry": x}
        return found

    def generators():
        star = power_span_ranks(Ast, N)
        adj = power_span_ranks(ops.A, N)
        cert.generator_checks = {"dim_span_Astar_powers": star[0], "dim_M_star": N + 1,
                                 "dim_span_A_powers": adj[0], "dim_M": adj[1]}
        if star != (N + 1, N + 1) or adj != (N + 1, N + 1):
            return {"Astar_ranks": list(star), "A_ranks": list(adj), "expected": N + 1}
        return None

    results = [
        run_check("qpoly.far-blocks-vanish", "E_i A* E_j = 0 whenever |i-j| > 1", far_blocks),
        run_check("qpoly.a-far-blocks-vanish", "E*_i A E*_j = 0 whenever |i-j| > 1",
                  a_in_estar),
        run_check("qpoly.generators",
                  "A* generates M* and A generates an (N+1)-dimensional algebra M",
                  generators),
    ]
    cert.absorb(results)
    return results


def verify_proof_replay(ops: OperatorSet, decomps: dict[SplitVariant, SplitDecomposition],
                        oracle: SpanOracle | None = None,
                        cert: QPolyCertificate | None = None) -> list[CheckResult]:
    """Rederive A* E_iV ⊆ E_{i-1}V + E_iV + E_{i+1}V through the split flags."""
    cert = cert if cert is not None else QPolyCertificate()
    oracle = oracle or SpanOracle(ops)
    N = ops.N
    AsT = ops.Astar.transpose()
    dd, uu = decomps[DD], decomps[UU]
    route_ok: dict[int, bool] = {}

    def inside(target: ExactMatrix, image: ExactMatrix) -> bool:
        return rank(vstack([target, image])) == rank(target)

    def dd_chain():
        for i in range(N + 1):
            lower = dd.partial_sum(range(N - i, N + 1))
            upper = dd.partial_sum(range(max(N - i - 1, 0), N + 1))
            if not span_equal(oracle.e(range(i + 1)), lower):
                return {"i": i, "reason": "E_0V+..+E_iV differs from its DD partial sum"}
            if not inside(upper, lower @ AsT):
                return {"i": i, "reason": "A* leaves the next DD partial sum"}
            if not span_equal(upper, oracle.e(range(min(i + 1, N) + 1))):
                return {"i": i, "reason": "next DD partial sum differs from E_0V+..+E_{i+1}V"}
        return None

    def uu_chain():
        for i in range(N + 1):
            lower = uu.partial_sum(range(i, N + 1))
            upper = uu.partial_sum(range(max(i - 1, 0), N + 1))
            if not span_equal(oracle.e(range(i, N + 1)), lower):
                return {"i": i, "reason": "E_iV+..+E_NV differs from its UU partial sum"}
            if not inside(upper, lower @ AsT):
                return {"i": i, "reason": "A* leaves the next UU partial sum"}
            if not span_equal(upper, oracle.e(range(max(i - 1, 0), N + 1))):
                return {"i": i, "reason": "next UU partial sum differs from E_{i-1}V+..+E_NV"}
        return None

    def meet():
        found = None
        for i in range(N + 1):
            lo, hi = max(i - 1, 0), min(i + 1, N)
            m = intersection(oracle.e(range(hi + 1)), oracle.e(range(lo, N + 1)))
            ok = span_equal(m, oracle.e(range(lo, hi + 1)))
            ok = ok and inside(m, oracle.e([i]) @ AsT)
            route_ok[i] = ok
            if not ok and found is None:
                found = {"i": i}
        return found

    results = [
        run_check("qpoly.replay-dd-chain",
                  "A*(E_0V+..+E_iV) lies in E_0V+..+E_{i+1}V via the DD partial sums", dd_chain),
        run_check("qpoly.replay-uu-chain",
                  "A*(E_iV+..+E_NV) lies in E_{i-1}V+..+E_NV via the UU partial sums", uu_chain),
        run_check("qpoly.replay-intersection",
                  "the two flags meet in E_{i-1}V+E_iV+E_{i+1}V, which contains A* E_iV", meet),
    ]

    def agree():
        if not cert.far_blocks and N >= 2:
            return {"reason": "direct block check has not run"}
        direct = {j: all(v for (i, jj), v in cert.far_blocks.items() if jj == j)
                  for j in range(N + 1)}
        replay = {j: route_ok.get(j, False) and results[0].passed and results[1].passed
                  for j in range(N + 1)}
        cert.replay_agrees = direct == replay
        if not cert.replay_agrees:
            return {"direct": direct, "replay": replay}
        return None

    results.append(run_check("qpoly.routes-agree",
                             "the direct block check and the replayed flag argument agree",
                             agree))
    cert.absorb(results)
    return results


def tridiagonal_residuals(ops: OperatorSet) -> tuple[ExactMatrix, ExactMatrix]:
    q, N = ops.q, ops.N
    A, As = ops.A, ops.Astar
    beta1 = Fraction(q) + Fraction(1, q) + 1
    gamma = Fraction(q) ** (N - 2) * (q + 1) ** 2
    A2 = A @ A
    A3 = A2 @ A
    As2 = As @ As
    As3 = As2 @ As
    commutator = A @ As - As @ A
    r1 = (A3 @ As - (A2 @ As @ A) * beta1 + (A @ As @ A2) * beta1 - As @ A3
          - commutator * gamma)
    r2 = As3 @ A - (As2 @ A @ As) * beta1 + (As @ A @ As2) * beta1 - A @ As3
    return r1, r2


def tridiagonal_scalar_residual(theta, i: int, j: int, q: int, N: int) -> Fraction:
    qq = Fraction(q)
    return (theta[i] ** 2 - (qq + 1 / qq) * theta[i] * theta[j] + theta[j] ** 2
            - qq ** (N - 2) * (q + 1) ** 2)


def verify_tridiagonal_relations(ops: OperatorSet,
                                 cert: QPolyCertificate | None = None) -> list[CheckResult]:
    cert = cert if cert is not None else QPolyCertificate()
    q, N = ops.q, ops.N
    r1, r2 = tridiagonal_residuals(ops)
    cert.residuals = {"R1": r1, "R2": r2}
    cert.residuals_zero = {"R1": r1.is_zero(), "R2": r2.is_zero()}

    def scalar():
        for i in range(N):
            for a, b in ((i, i + 1), (i + 1, i)):
                v = tridiagonal_scalar_residual(ops.theta, a, b, q, N)
                if v != 0:
                    return {"i": a, "j": b, "value": v}
        return None

    results = [
        run_check("tridiag.relation-1",
                  "A^3A* - b A^2A*A + b AA*A^2 - A*A^3 = q^(N-2)(q+1)^2 (AA* - A*A), "
                  "b = q + 1/q + 1", lambda: residual_witness(r1, matrix="R1")),
        run_check("tridiag.relation-2",
                  "A*^3A - b A*^2AA* + b A*AA*^2 - AA*^3 = 0",
                  lambda: residual_witness(r2, matrix="R2")),
        run_check("tridiag.scalar-identity",
                  "theta_i^2 - (q+1/q) theta_i theta_j + theta_j^2 = q^(N-2)(q+1)^2 "
                  "for |i-j| = 1", scalar),
    ]
    cert.absorb(results)
    return results


# -- generic predicate ---------------------------------------------------------------


def rational_spectrum(A: ExactMatrix) -> list[Fraction]:
    """Distinct eigenvalues of A in descending order; refuses unless the minimal
    polynomial splits into distinct rational linear factors."""
    mp = A.minpoly()
    _, factors = mp.factor()
    roots = []
    for f, mult in factors:
        if f.degree() != 1 or mult != 1:
            raise SpectrumRefused(
                f"minimal polynomial {mp} has factor {f}^{mult}; "
                "A is not diagonalizable over the rationals")
        c0, c1 = f.coeffs()
        root = -c0 / c1
        roots.append(Fraction(int(root.p), int(root.q)))
    return sorted(roots, reverse=True)


def generic_dual_adjacency_check(A_any: ExactMatrix, base_vertex: int,
                                 adjacency: Sequence[Sequence[int]], Astar: ExactMatrix,
                                 spectrum: Sequence[Fraction] | None = None) -> bool:
    """Is ``Astar`` a dual adjacency matrix for (graph, ``A_any``, base vertex)?

    ``spectrum`` fixes the ordering of the primitive idempotents; when omitted
    the rational eigenvalues are found from the minimal polynomial and taken in
    descending order.  Raises :class:`SpectrumRefused` when ``A_any`` has no
    rational diagonalization with that spectrum.
    """
    n = A_any.rows
    if A_any.shape != (n, n) or Astar.shape != (n, n) or len(adjacency) != n:
        raise ValueError("matrix and graph sizes disagree")
    adj = [set(nb) for nb in adjacency]
    for y in range(n):
        for z in range(n):
            if (A_any[y, z] != 0) != (z in adj[y]):
                return False

    theta = list(spectrum) if spectrum is not None else rational_spectrum(A_any)
    if len(set(theta)) != len(theta):
        raise SpectrumRefused("supplied eigenvalues are not distinct")
    E = build_idempotents(A_any, theta)
    eye = ExactMatrix.identity(n)
    combo = ExactMatrix.zeros(n)
    for t, e in zip(theta, E):
        combo = combo + e * t
    if (sum(E[1:], E[0]) != eye or combo != A_any
            or any(not (e @ e - e).is_zero() for e in E)):
        raise SpectrumRefused(f"A is not diagonalizable with spectrum {theta}")

    dist = [-1] * n
    dist[base_vertex] = 0
    queue = deque([base_vertex])
    while queue:
        y = queue.popleft()
        for z in adj[y]:
            if dist[z] < 0:
                dist[z] = dist[y] + 1
                queue.append(z)
    if min(dist) < 0:
        raise ValueError("graph is not connected")

    # A* must lie in M* and generate it: diagonal, constant on each
    # subconstituent, with distinct values on distinct subconstituents.
    if not Astar.is_diagonal():
        return False
    values: dict[int, Fraction] = {}
    for y in range(n):
        if values.setdefault(dist[y], Astar[y, y]) != Astar[y, y]:
            return False
    if len(set(values.values())) != len(values):
        return False

    for i in range(len(E)):
        EA = E[i] @ Astar
        for j in range(len(E)):
            if abs(i - j) > 1 and not (EA @ E[j]).is_zero():
                return False
    return True


def certify(ops: OperatorSet, decomps: dict[SplitVariant, SplitDecomposition] | None = None,
            oracle: SpanOracle | None = None) -> tuple[QPolyCertificate, list[CheckResult]]:
    cert = QPolyCertificate()
    results = verify_dual_adjacency(ops, cert)
    if decomps is not None:
        results += verify_proof_replay(ops, decomps, oracle, cert)
    results += verify_tridiagonal_relations(ops, cert)
    return cert, results


__all__ = [
    "QPolyCertificate",
    "SpectrumRefused",
    "certify",
    "generic_dual_adjacency_check",
    "power_span_ranks",
    "rational_spectrum",
    "tridiagonal_residuals",
    "tridiagonal_scalar_residual",
    "verify_dual_adjacency",
    "verify_proof_replay",
    "verify_tridiagonal_relations",
]
