"""Irreducible T-modules of the standard module and their Leonard parameters.

Construction: A splits as L + R, where L lowers and R raises the dimension
by one.  For each r <= N/2 the kernel of L on E*_rV supplies generators v,
and {R^k v : 0 <= k <= N - 2r} spans an irreducible module with endpoint r.
All modules together are stored as the columns of one invertible matrix B,
so B^-1 M B is block diagonal for every M in T and its diagonal blocks are
the restrictions M|_W in the raising-orbit bases.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .checks import CheckResult, jsonable, run_check
from .exactmat import ExactMatrix, ExactVector, coordinates, kernel_basis
from .gfspace import gaussian_binomial, q_integer
from .operators import OperatorSet, residual_witness


@dataclass
class IrreducibleModule:
    r: int
    d: int
    basis: tuple[ExactVector, ...]
    generator: int = 0  # index of the kernel vector within K_r
    t: int | None = None  # dual endpoint, measured
    delta: int | None = None  # dual diameter, measured

    @property
    def endpoint(self) -> int:
        return self.r

    @property
    def diameter(self) -> int:
        return self.d

    @property
    def dim(self) -> int:
        return self.d + 1


@dataclass(frozen=True)
class LeonardParameters:
    d: int
    h: Fraction
    h_star: Fraction
    s: Fraction
    theta0: Fraction
    theta0_star: Fraction

    def eigenvalues(self, q: int) -> list[Fraction]:
        """theta_i = theta_0 + h (1 - q^i)(1 - s q^(i+1)) / q^i, dual q-Krawtchouk form."""
        qq = Fraction(q)
        return [self.theta0 + self.h * (1 - qq**i) * (1 - self.s * qq ** (i + 1)) / qq**i
                for i in range(self.d + 1)]

    def dual_eigenvalues(self, q: int) -> list[Fraction]:
        """theta*_i = theta*_0 + h* (q^-i - 1)."""
        return [self.theta0_star + self.h_star * (Fraction(1, q**i) - 1)
                for i in range(self.d + 1)]

    def to_json(self) -> dict[str, Any]:
        return jsonable({"d": self.d, "h": self.h, "h_star": self.h_star, "s": self.s,
                         "theta0": self.theta0, "theta0_star": self.theta0_star})


@dataclass
class DecompositionSummary:
    N: int
    q: int
    modules: list[IrreducibleModule]
    multiplicities: dict[int, int]
    total_dimension: int
    basis_matrix: ExactMatrix  # columns are the module basis vectors, module by module
    offsets: list[int] = field(default_factory=list)
    A_coords: ExactMatrix | None = None  # B^-1 A B, None if B is singular
    Astar_coords: ExactMatrix | None = None
    E_coords: list[ExactMatrix] = field(default_factory=list)
    blocks: dict[str, list[ExactMatrix]] = field(default_factory=dict, repr=False)

    def split_blocks(self, name: str, coords: ExactMatrix) -> None:
        """Cache the diagonal blocks of ``coords`` under ``name``."""
        flat, n = coords.vectorize(), coords.cols
        out = []
        for k, m in enumerate(self.modules):
            o = self.offsets[k]
            entries = [flat[(o + a) * n + o + b] for a in range(m.dim) for b in range(m.dim)]
            out.append(ExactMatrix.from_flat(m.dim, m.dim, entries))
        self.blocks[name] = out

    def block(self, name: str, k: int) -> ExactMatrix:
        return self.blocks[name][k]

    def restriction(self, k: int) -> ExactMatrix:
        return self.blocks["A"][k]

    def to_json(self) -> dict[str, Any]:
        return jsonable({
            "multiplicities": {str(r): m for r, m in sorted(self.multiplicities.items())},
            "total_dimension": self.total_dimension,
            "modules_per_endpoint": [
                {"r": r, "count": m, "diameter": self.N - 2 * r,
                 "leonard_parameters": leonard_parameters_for(r, self.q, self.N).to_json()}
                for r, m in sorted(self.multiplicities.items())],
        })


class CrossCheckFailed(ValueError):
    pass


def expected_multiplicity(N: int, r: int, q: int) -> int:
    if r == 0:
        return 1
    return gaussian_binomial(N, r, q) - gaussian_binomial(N, r - 1, q)


def lowering_raising(ops: OperatorSet) -> tuple[ExactMatrix, ExactMatrix]:
    """L = sum E*_{i-1} A E*_i and R = sum E*_{i+1} A E*_i."""
    g, n = ops.geometry, ops.size
    dims = g.dims
    flat = ops.A.vectorize()
    low = [0] * (n * n)
    high = [0] * (n * n)
    for y in range(n):
        for z in range(n):
            x = flat[y * n + z]
            if x == 0:
                continue
            if dims[y] == dims[z] - 1:
                low[y * n + z] = x
            elif dims[y] == dims[z] + 1:
                high[y * n + z] = x
    return ExactMatrix.from_flat(n, n, low), ExactMatrix.from_flat(n, n, high)


def _lift(vec: ExactVector, coords: list[int], n: int) -> list[Fraction]:
    out = [Fraction(0)] * n
    for c, x in zip(coords, vec):
        out[c] = x
    return out


def decompose(ops: OperatorSet,
              lr: tuple[ExactMatrix, ExactMatrix] | None = None) -> DecompositionSummary:
    g, N, n = ops.geometry, ops.N, ops.size
    L, R = lr if lr is not None else lowering_raising(ops)
    modules: list[IrreducibleModule] = []
    multiplicities: dict[int, int] = {}
    for r in range(N // 2 + 1):
        level = g.level(r)
        if r == 0:
            kernel = [(Fraction(1),) * len(level)]
        else:
            kernel = kernel_basis(L.submatrix(g.level(r - 1), level))
        multiplicities[r] = len(kernel)
        d = N - 2 * r
        for idx, v in enumerate(kernel):
            col = ExactMatrix.from_columns([_lift(v, level, n)])
            orbit = [col]
            for _ in range(d):
                orbit.append(R @ orbit[-1])
            modules.append(IrreducibleModule(r, d, tuple(m.column(0) for m in orbit), idx))

    columns = [v for m in modules for v in m.basis]
    B = ExactMatrix.from_columns(columns) if columns else ExactMatrix.zeros(n, 0)
    offsets, pos = [], 0
    for m in modules:
        offsets.append(pos)
        pos += m.dim
    summary = DecompositionSummary(N, ops.q, modules, multiplicities, pos, B, offsets)
    if B.rows == B.cols and B.rank() == n:
        Binv = B.solve(ExactMatrix.identity(n))
        summary.A_coords = Binv @ (ops.A @ B)
        summary.Astar_coords = Binv @ (ops.Astar @ B)
        summary.E_coords = [Binv @ (e @ B) for e in ops.E]
        summary.split_blocks("A", summary.A_coords)
        summary.split_blocks("Astar", summary.Astar_coords)
        for i, e in enumerate(summary.E_coords):
            summary.split_blocks(f"E{i}", e)
        _measure_dual_structure(summary)
    return summary


def _measure_dual_structure(summary: DecompositionSummary) -> None:
    for k, m in enumerate(summary.modules):
        support = [i for i in range(len(summary.E_coords))
                   if not summary.block(f"E{i}", k).is_zero()]
        if support:
            m.t, m.delta = support[0], support[-1] - support[0]


def leonard_parameters_for(r: int, q: int, N: int) -> LeonardParameters:
    qq = Fraction(q)
    return LeonardParameters(
        d=N - 2 * r,
        h=qq ** (N - r) / (q - 1),
        h_star=qq ** (-r),
        s=-(qq ** (2 * r - N - 1)),
        theta0=qq**r * q_integer(N - 2 * r, q),
        theta0_star=qq ** (-r),
    )


def leonard_parameters(m: IrreducibleModule, q: int, N: int) -> LeonardParameters:
    """The six dual q-Krawtchouk parameters, cross-checked against theta_r, theta*_r."""
    lp = leonard_parameters_for(m.r, q, N)
    theta_r = Fraction(q ** (N - m.r) - q**m.r, q - 1)
    if lp.theta0 != theta_r or lp.theta0_star != Fraction(1, q**m.r):
        raise CrossCheckFailed(f"r={m.r}: theta0={lp.theta0} vs theta_r={theta_r}")
    return lp


@dataclass(frozen=True)
class PairVerdict:
    ok: bool
    clause: str | None = None

    def __bool__(self) -> bool:
        return self.ok


def module_restriction(m: IrreducibleModule, M: ExactMatrix) -> ExactMatrix | None:
    """Matrix of M|_W in the module basis, or None if W is not M-invariant."""
    cols = []
    for v in m.basis:
        image = (M @ ExactMatrix.from_columns([v])).column(0)
        x = coordinates(list(m.basis), image)
        if x is None:
            return None
        cols.append(x)
    return ExactMatrix.from_columns(cols)


def verify_tridiagonal_pair(m: IrreducibleModule, ops: OperatorSet,
                            restriction: ExactMatrix | None = None,
                            eigen_ranks: list[int] | None = None) -> PairVerdict:
    """A acts on W as an irreducible tridiagonal matrix with eigenvalues
    theta_r..theta_{N-r}, each eigenspace of W one-dimensional."""
    N, r, d = ops.N, m.r, m.d
    AW = restriction if restriction is not None else module_restriction(m, ops.A)
    if AW is None:
        return PairVerdict(False, "W is not A-invariant")
    for k in range(d + 1):
        for l in range(d + 1):
            x = AW[k, l]
            if abs(k - l) > 1 and x != 0:
                return PairVerdict(False, f"A|_W[{k},{l}] = {x} off the tridiagonal band")
            if abs(k - l) == 1 and x == 0:
                return PairVerdict(False, f"A|_W[{k},{l}] = 0, tridiagonal is reducible")
            if k == l and x != 0:
                return PairVerdict(False, f"A|_W[{k},{k}] = {x}, expected 0 (bipartite)")

    thetas = ops.theta[r:N - r + 1]
    eye = ExactMatrix.identity(d + 1)
    shifted = [AW - eye * t for t in thetas]

    def product(skip: int | None) -> ExactMatrix:
        out = eye
        for j, s in enumerate(shifted):
            if j != skip:
                out = out @ s
        return out

    if not product(None).is_zero():
        return PairVerdict(False, "prod (A|_W - theta_i) is nonzero")
    for j in range(len(shifted)):
        if product(j).is_zero():
            return PairVerdict(False, f"annihilated without the factor theta_{r + j}")

    if eigen_ranks is None:
        basis = ExactMatrix.from_columns(list(m.basis))
        eigen_ranks = [(e @ basis).rank() for e in ops.E]
    for i, rk in enumerate(eigen_ranks):
        want = 1 if r <= i <= N - r else 0
        if rk != want:
            return PairVerdict(False, f"dim E_{i}W = {rk}, expected {want}")
    support = [i for i, rk in enumerate(eigen_ranks) if rk]
    if support[-1] - support[0] != d:
        return PairVerdict(False, "diameter differs from dual diameter")
    return PairVerdict(True)


def verify_modules(ops: OperatorSet, summary: DecompositionSummary,
                   lr: tuple[ExactMatrix, ExactMatrix]) -> list[CheckResult]:
    g, N, q, n = ops.geometry, ops.N, ops.q, ops.size
    L, R = lr
    mods = summary.modules
    coords_ok = summary.A_coords is not None
    dims = g.dims

    def split_sum():
        w = residual_witness(L + R - ops.A, identity="L + R = A")
        if w:
            return w
        for label, flat, shift in (("L", L.vectorize(), -1), ("R", R.vectorize(), 1)):
            for k, x in enumerate(flat):
                y, z = divmod(k, n)
                if x != 0 and dims[y] != dims[z] + shift:
                    return {"matrix": label, "row": y, "col": z}
        return None

    def orbit_lengths():
        for k, m in enumerate(mods):
            for j, v in enumerate(m.basis):
                if not any(v):
                    return {"r": m.r, "vector": m.generator, "power": j}
                levels = {dims[y] for y, x in enumerate(v) if x != 0}
                if levels != {m.r + j}:
                    return {"r": m.r, "vector": m.generator, "power": j,
                            "levels": sorted(levels)}
            last = R @ ExactMatrix.from_columns([m.basis[-1]])
            if not last.is_zero():
                return {"r": m.r, "vector": m.generator, "power": m.d + 1,
                        "reason": "R^(d+1) v is nonzero"}
        return None

    def direct_sum():
        B = summary.basis_matrix
        if B.cols != n or not coords_ok:
            return {"columns": B.cols, "rank": B.rank(), "expected": n}
        return None

    def off_block(coords: ExactMatrix, label: str):
        owner = [k for k, m in enumerate(mods) for _ in range(m.dim)]
        flat = coords.vectorize()
        for a in range(n):
            for b in range(n):
                if owner[a] != owner[b] and flat[a * n + b] != 0:
                    return {"operator": label, "module_row": owner[a], "module_col": owner[b],
                            "r": mods[owner[b]].r, "vector": mods[owner[b]].generator}
        return None

    def invariance():
        if not coords_ok:
            return {"reason": "module bases are not a basis of V"}
        return off_block(summary.A_coords, "A") or off_block(summary.Astar_coords, "Astar")

    def multiplicities():
        for r, mu in summary.multiplicities.items():
            if mu != expected_multiplicity(N, r, q):
                return {"r": r, "mu": mu, "expected": expected_multiplicity(N, r, q)}
        total = sum(mu * (N - 2 * r + 1) for r, mu in summary.multiplicities.items())
        if total != n:
            return {"dimension_sum": total, "vertices": n}
        return None

    eigen_ranks: list[list[int]] = []

    def level_dimensions():
        if not coords_ok:
            return {"reason": "module bases are not a basis of V"}
        for k, m in enumerate(mods):
            ranks = [summary.block(f"E{i}", k).rank() for i in range(N + 1)]
            eigen_ranks.append(ranks)
            for i in range(N + 1):
                want = 1 if m.r <= i <= N - m.r else 0
                star = 1 if 0 <= i - m.r <= m.d else 0  # basis vector i-r lies in E*_iV
                if ranks[i] != want or star != want:
                    return {"r": m.r, "vector": m.generator, "i": i,
                            "dim_EiW": ranks[i], "dim_EstariW": star, "expected": want}
            if m.t != m.r or m.delta != m.d:
                return {"r": m.r, "vector": m.generator, "t": m.t, "delta": m.delta}
        for i in range(N + 1):
            if sum(rk[i] for rk in eigen_ranks) != gaussian_binomial(N, i, q):
                return {"i": i, "reason": "module eigenspaces do not add up to E_iV"}
        return None

    def tridiagonal_pairs():
        if not coords_ok or len(eigen_ranks) != len(mods):
            return {"reason": "module coordinates unavailable"}
        for k, m in enumerate(mods):
            verdict = verify_tridiagonal_pair(m, ops, summary.restriction(k), eigen_ranks[k])
            if not verdict:
                return {"r": m.r, "vector": m.generator, "clause": verdict.clause}
        return None

    def dual_diagonal():
        if not coords_ok:
            return {"reason": "module coordinates unavailable"}
        for k, m in enumerate(mods):
            want = ExactMatrix.diagonal([Fraction(1, q ** (m.r + j)) for j in range(m.dim)])
            w = residual_witness(summary.block("Astar", k) - want,
                                 r=m.r, vector=m.generator)
            if w:
                return w
        return None

    def isomorphism_classes():
        if not coords_ok:
            return {"reason": "module coordinates unavailable"}
        seen: dict[int, list[Fraction]] = {}
        for k, m in enumerate(mods):
            AW = summary.restriction(k)
            products = [AW[j, j + 1] * AW[j + 1, j] for j in range(m.d)]
            ref = seen.setdefault(m.r, products)
            if products != ref:
                return {"r": m.r, "vector": m.generator, "products": products,
                        "reference": ref}
        return None

    def leonard():
        for r in summary.multiplicities:
            m = next(x for x in mods if x.r == r)
            try:
                lp = leonard_parameters(m, q, N)
            except CrossCheckFailed as exc:
                return {"r": r, "reason": str(exc)}
            if lp.d != N - 2 * r or lp.h_star != lp.theta0_star:
                return {"r": r, "d": lp.d, "h_star": lp.h_star}
            if lp.eigenvalues(q) != list(ops.theta[r:N - r + 1]):
                return {"r": r, "reason": "theta_i(Phi) differ from theta_r..theta_{N-r}"}
            if lp.dual_eigenvalues(q) != list(ops.theta_star[r:N - r + 1]):
                return {"r": r, "reason": "theta*_i(Phi) differ from theta*_r..theta*_{N-r}"}
        return None

    return [
        run_check("modules.lowering-raising", "L + R = A with L lowering and R raising",
                  split_sum),
        run_check("modules.orbit-lengths",
                  "R^k v is nonzero in E*_{r+k}V for k <= N-2r and R^(N-2r+1) v = 0",
                  orbit_lengths),
        run_check("modules.direct-sum", "the module bases together form a basis of V",
                  direct_sum),
        run_check("modules.invariance", "every module is A- and A*-invariant", invariance),
        run_check("modules.multiplicities",
                  "mu_r = [N r]_q - [N r-1]_q and sum mu_r (N-2r+1) = |X|", multiplicities),
        run_check("modules.level-dimensions",
                  "dim E*_iW = dim E_iW = 1 for r <= i <= N-r and 0 otherwise",
                  level_dimensions),
        run_check("modules.tridiagonal-pair",
                  "A|_W is irreducible tridiagonal, bipartite, with minimal polynomial "
                  "prod_{i=r}^{N-r} (x - theta_i)", tridiagonal_pairs),
        run_check("modules.dual-diagonal", "A*|_W = diag(q^-r, ..., q^-(N-r))",
                  dual_diagonal),
        run_check("modules.isomorphism-classes",
                  "modules with the same endpoint have the same tridiagonal data",
                  isomorphism_classes),
        run_check("modules.leonard-parameters",
                  "dual q-Krawtchouk parameters with theta_0(Phi) = theta_r and "
                  "theta*_0(Phi) = theta*_r", leonard),
    ]


__all__ = [
    "CrossCheckFailed",
    "DecompositionSummary",
    "IrreducibleModule",
    "LeonardParameters",
    "PairVerdict",
    "decompose",
    "expected_multiplicity",
    "leonard_parameters",
    "leonard_parameters_for",
    "lowering_raising",
    "module_restriction",
    "verify_modules",
    "verify_tridiagonal_pair",
]
