"""The matrices A, A*, S, the dual idempotents E*_i and primitive idempotents E_i."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .checks import CheckResult, run_check
from .exactmat import ExactMatrix, rank
from .gfspace import gaussian_binomial, q_integer
from .poset import Geometry


class DuplicateEigenvalues(ValueError):
    pass


@dataclass(frozen=True)
class OperatorSet:
    geometry: Geometry
    A: ExactMatrix
    Astar: ExactMatrix
    S: ExactMatrix
    Estar: tuple[ExactMatrix, ...]
    E: tuple[ExactMatrix, ...]
    theta: tuple[Fraction, ...]
    theta_star: tuple[Fraction, ...]

    @property
    def N(self) -> int:
        return self.geometry.N

    @property
    def q(self) -> int:
        return self.geometry.q

    @property
    def size(self) -> int:
        return self.geometry.size

    def identity(self) -> ExactMatrix:
        return ExactMatrix.identity(self.size)

    def named(self) -> dict[str, ExactMatrix]:
        out = {"A": self.A, "Astar": self.Astar, "S": self.S}
        out.update({f"E{i}": m for i, m in enumerate(self.E)})
        out.update({f"Estar{i}": m for i, m in enumerate(self.Estar)})
        return out


def build_A(g: Geometry) -> ExactMatrix:
    """A[y][z] = 1 if y covers z, q^dim(y) if z covers y, else 0."""
    n, q = g.size, g.q
    entries = [0] * (n * n)
    for y in range(n):
        for z in g.cover_down[y]:
            entries[y * n + z] = 1
        for z in g.cover_up[y]:
            entries[y * n + z] = q ** g.dim(y)
    return ExactMatrix.from_flat(n, n, entries)


def build_Astar(g: Geometry) -> ExactMatrix:
    return ExactMatrix.diagonal([Fraction(1, g.q ** d) for d in g.dims])


def build_S(g: Geometry) -> ExactMatrix:
    return ExactMatrix.diagonal([(-1) ** d for d in g.dims])


def build_Estar(g: Geometry) -> tuple[ExactMatrix, ...]:
    return tuple(ExactMatrix.diagonal([int(d == i) for d in g.dims])
                 for i in range(g.N + 1))


def eigenvalues(N: int, q: int) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    theta = tuple(Fraction(q ** (N - i) - q**i, q - 1) for i in range(N + 1))
    theta_star = tuple(Fraction(1, q**i) for i in range(N + 1))
    return theta, theta_star


def build_idempotents(A: ExactMatrix, theta) -> tuple[ExactMatrix, ...]:
    """Lagrange projectors E_i = prod_{j != i} (A - theta_j I)/(theta_i - theta_j)."""
    if len(set(theta)) != len(theta):
        raise DuplicateEigenvalues(f"eigenvalues are not distinct: {theta}")
    eye = ExactMatrix.identity(A.rows)
    shifted = [A - eye * t for t in theta]
    out = []
    for i, ti in enumerate(theta):
        e = eye
        for j, tj in enumerate(theta):
            if j != i:
                e = (e @ shifted[j]) * Fraction(1, ti - tj)
        out.append(e)
    return tuple(out)


def build_operators(g: Geometry, A: ExactMatrix | None = None) -> OperatorSet:
    """``A`` may be supplied to replace the weighted adjacency matrix (fault injection)."""
    A = build_A(g) if A is None else A
    theta, theta_star = eigenvalues(g.N, g.q)
    return OperatorSet(
        geometry=g,
        A=A,
        Astar=build_Astar(g),
        S=build_S(g),
        Estar=build_Estar(g),
        E=build_idempotents(A, theta),
        theta=theta,
        theta_star=theta_star,
    )


def residual_witness(residual: ExactMatrix, **labels: Any) -> dict[str, Any] | None:
    """None for a zero residual, else labels plus the first nonzero entry."""
    hit = residual.first_nonzero()
    if hit is None:
        return None
    row, col, entry = hit
    return {**labels, "row": row, "col": col, "entry": entry}


def block_witness(M: ExactMatrix, rows: list[int], cols: list[int],
                  **labels: Any) -> dict[str, Any] | None:
    """Witness for a nonzero block E*_i M E*_j, given the index sets of both levels."""
    for y in rows:
        for z in cols:
            x = M[y, z]
            if x != 0:
                return {**labels, "row": y, "col": z, "entry": x}
    return None


def verify_operators(ops: OperatorSet) -> list[CheckResult]:
    g = ops.geometry
    N, q, n = ops.N, ops.q, ops.size
    eye = ops.identity()
    A, Ast, S, E, Es = ops.A, ops.Astar, ops.S, ops.E, ops.Estar
    levels = [g.level(i) for i in range(N + 1)]

    def weighted_adjacency():
        expected = build_A(g)
        w = residual_witness(A - expected)
        if w:
            return w
        for y in range(n):
            nonzero = sum(1 for z in range(n) if A[y, z] != 0)
            i = g.dim(y)
            if nonzero != q_integer(i, q) + q_integer(N - i, q):
                return {"row": y, "nonzero": nonzero}
        return None

    def dual_idempotents():
        w = residual_witness(sum(Es[1:], Es[0]) - eye, identity="sum E*_i = I")
        if w:
            return w
        for i in range(N + 1):
            for j in range(N + 1):
                target = Es[i] if i == j else ExactMatrix.zeros(n)
                w = residual_witness(Es[i] @ Es[j] - target, i=i, j=j)
                if w:
                    return w
        return None

    def astar_form():
        combo = ExactMatrix.zeros(n)
        for i in range(N + 1):
            combo = combo + Es[i] * ops.theta_star[i]
        w = residual_witness(Ast - combo, identity="A* = sum q^-i E*_i")
        if w:
            return w
        if len(set(ops.theta_star)) != N + 1:
            return {"theta_star": list(ops.theta_star)}
        return None

    def s_form():
        combo = ExactMatrix.zeros(n)
        for i in range(N + 1):
            combo = combo + Es[i] * (-1) ** i
        return (residual_witness(S - combo, identity="S = sum (-1)^i E*_i")
                or residual_witness(S @ S - eye, identity="S^2 = I"))

    def theta_antisymmetry():
        th = ops.theta
        if len(set(th)) != N + 1:
            return {"theta": list(th)}
        for i in range(N + 1):
            if th[N - i] != -th[i]:
                return {"i": i, "theta_i": th[i], "theta_N_minus_i": th[N - i]}
        return None

    def idempotent_sum():
        return residual_witness(sum(E[1:], E[0]) - eye, identity="sum E_i = I")

    def orthogonality():
        for i in range(N + 1):
            for j in range(i, N + 1):
                target = E[i] if i == j else ExactMatrix.zeros(n)
                w = residual_witness(E[i] @ E[j] - target, i=i, j=j)
                if w:
                    return w
        return None

    def spectral_decomposition():
        combo = ExactMatrix.zeros(n)
        for t, e in zip(ops.theta, E):
            combo = combo + e * t
        return residual_witness(A - combo, identity="A = sum theta_i E_i")

    def commutation():
        for i, (t, e) in enumerate(zip(ops.theta, E)):
            w = (residual_witness(A @ e - e * t, i=i, side="A E_i")
                 or residual_witness(e @ A - e * t, i=i, side="E_i A"))
            if w:
                return w
        return None

    def eigenspace_dimensions():
        for i, e in enumerate(E):
            expected = gaussian_binomial(N, i, q)
            r, tr = e.rank(), e.trace()
            if r != expected or tr != expected:
                return {"i": i, "rank": r, "trace": tr, "expected": expected}
        if A.trace() != 0:
            return {"trace_A": A.trace()}
        return None

    def bipartite_blocks():
        for i in range(N + 1):
            for j in range(N + 1):
                if abs(i - j) != 1:
                    w = block_witness(A, levels[i], levels[j], i=i, j=j)
                    if w:
                        return w
        return None

    def s_conjugation():
        return (residual_witness(S @ A @ S + A, identity="S A S = -A")
                or residual_witness(S @ Ast @ S - Ast, identity="S A* S = A*"))

    def s_idempotents():
        for i in range(N + 1):
            w = (residual_witness(S @ E[i] @ S - E[N - i], i=i, identity="S E_i S = E_{N-i}")
                 or residual_witness(S @ Es[i] @ S - Es[i], i=i, identity="S E*_i S = E*_i"))
            if w:
                return w
        return None

    def astar_generates():
        powers = [Ast.power(k) for k in range(N + 2)]
        for k, m in enumerate(powers):
            if not m.is_diagonal():
                return {"power": k, "reason": "not diagonal"}
            for lvl in levels:
                if len({m[y, y] for y in lvl}) > 1:
                    return {"power": k, "reason": "not constant on a subconstituent"}
        diags = [m.diagonal_entries() for m in powers]
        r_n, r_n1 = rank(diags[:N + 1]), rank(diags)
        if r_n != N + 1 or r_n1 != N + 1:
            return {"rank_powers_0_to_N": r_n, "rank_powers_0_to_N+1": r_n1}
        return None

    def adjacency_algebra_dimension():
        powers = [eye]
        for _ in range(N + 1):
            powers.append(powers[-1] @ A)
        vecs = [m.vectorize() for m in powers]
        r_n, r_n1 = rank(vecs[:N + 1]), rank(vecs)
        if r_n != N + 1 or r_n1 != N + 1:
            return {"rank_powers_0_to_N": r_n, "rank_powers_0_to_N+1": r_n1}
        return None

    return [
        run_check("operators.weighted-adjacency",
                  "A has weight 1 downward and q^dim(y) upward on Hasse edges only",
                  weighted_adjacency),
        run_check("operators.dual-idempotents",
                  "sum E*_i = I and E*_i E*_j = delta_ij E*_i", dual_idempotents),
        run_check("operators.astar-form",
                  "A* = sum_i q^-i E*_i with distinct theta*_i", astar_form),
        run_check("operators.s-form", "S = sum_i (-1)^i E*_i and S^2 = I", s_form),
        run_check("spectrum.theta-antisymmetry",
                  "theta_i distinct and theta_{N-i} = -theta_i", theta_antisymmetry),
        run_check("spectrum.idempotent-sum", "sum_i E_i = I", idempotent_sum),
        run_check("spectrum.idempotent-orthogonality",
                  "E_i E_j = delta_ij E_i", orthogonality),
        run_check("spectrum.decomposition", "A = sum_i theta_i E_i",
                  spectral_decomposition),
        run_check("spectrum.commutation", "A E_i = theta_i E_i = E_i A", commutation),
        run_check("spectrum.eigenspace-dimensions",
                  "rank E_i = trace E_i = [N choose i]_q and trace A = 0",
                  eigenspace_dimensions),
        run_check("operators.bipartite-blocks",
                  "E*_i A E*_j = 0 unless |i-j| = 1", bipartite_blocks),
        run_check("operators.s-conjugation", "S A S = -A and S A* S = A*",
                  s_conjugation),
        run_check("operators.s-idempotents",
                  "S E_i S = E_{N-i} and S E*_i S = E*_i", s_idempotents),
        run_check("operators.astar-generates",
                  "powers of A* span the (N+1)-dimensional algebra M*",
                  astar_generates),
        run_check("operators.adjacency-algebra-dimension",
                  "the algebra generated by A has dimension N+1",
                  adjacency_algebra_dimension),
    ]
