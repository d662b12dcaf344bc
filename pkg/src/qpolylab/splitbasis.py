"""The four split bases of V, their A/A*/S actions, and the split decompositions."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .checks import CheckResult, run_check
from .exactmat import ExactMatrix, ExactVector, intersection, rank, row_basis, span_equal, vstack
from .gfspace import gaussian_binomial
from .operators import OperatorSet, residual_witness
from .poset import Geometry


class SplitVariant(enum.Enum):
    DD = "dd"  # down-down: sum over z <= y
    DU = "du"  # down-up: z <= y, signed by (-1)^dim z
    UD = "ud"  # up-down: z >= y, weighted powers of q
    UU = "uu"  # up-up: z >= y, weighted and signed

    @property
    def downward(self) -> bool:
        return self in (SplitVariant.DD, SplitVariant.DU)

    @property
    def signed(self) -> bool:
        return self in (SplitVariant.DU, SplitVariant.UU)


DD, DU, UD, UU = SplitVariant.DD, SplitVariant.DU, SplitVariant.UD, SplitVariant.UU

# S exchanges these partners vector by vector
S_PARTNER = {DD: DU, DU: DD, UD: UU, UU: UD}


def _coefficient(g: Geometry, y: int, z: int, variant: SplitVariant) -> int:
    """Coordinate of y^variant at z, assuming z is comparable to y in the right direction."""
    N, q = g.N, g.q
    dy, dz = g.dim(y), g.dim(z)
    c = 1 if variant.downward else q ** (comb(N - dy, 2) + (N - dz) * dy)
    return -c if variant.signed and dz % 2 else c


def _related(g: Geometry, variant: SplitVariant) -> list[list[int]]:
    """related[y] = the z summed over in y^variant (z <= y or z >= y)."""
    down = g.downsets()
    n = g.size
    below = [[z for z in range(n) if down[y] >> z & 1] for y in range(n)]
    if variant.downward:
        return below
    above: list[list[int]] = [[] for _ in range(n)]
    for y in range(n):
        for z in below[y]:
            above[z].append(y)
    return above


def split_vector(g: Geometry, y: int, variant: SplitVariant) -> ExactVector:
    v = [Fraction(0)] * g.size
    for z in _related(g, variant)[y]:
        v[z] = Fraction(_coefficient(g, y, z, variant))
    return tuple(v)


@dataclass(frozen=True)
class SplitBasisFamily:
    variant: SplitVariant
    matrix: ExactMatrix  # column y is the vector y^variant
    as_rows: ExactMatrix  # row y is the vector y^variant

    def vector(self, y: int) -> ExactVector:
        return self.as_rows.row(y)

    def rows_for(self, vertices: list[int]) -> ExactMatrix:
        return self.as_rows.select_rows(vertices)


def build_family(g: Geometry, variant: SplitVariant) -> SplitBasisFamily:
    n = g.size
    entries = [0] * (n * n)
    for y, zs in enumerate(_related(g, variant)):
        for z in zs:
            entries[y * n + z] = _coefficient(g, y, z, variant)
    rows = ExactMatrix.from_flat(n, n, entries)
    return SplitBasisFamily(variant, rows.transpose(), rows)


def build_families(g: Geometry) -> dict[SplitVariant, SplitBasisFamily]:
    return {v: build_family(g, v) for v in SplitVariant}


def verify_split_bases(ops: OperatorSet,
                    families: dict[SplitVariant, SplitBasisFamily]) -> list[CheckResult]:
    g = ops.geometry
    n = g.size
    out = []
    for variant in SplitVariant:
        fam = families[variant]

        def full_rank(fam=fam):
            r = fam.matrix.rank()
            return None if r == n else {"rank": r, "expected": n}

        out.append(run_check(f"split.basis-{variant.value}",
                             f"the {variant.name} split vectors form a basis of V",
                             full_rank))

    def zeta_unitriangular():
        m = families[DD].matrix
        for y in range(n):
            for z in range(n):
                x = m[z, y]
                if (z == y and x != 1) or (z > y and x != 0):
                    return {"row": z, "col": y, "entry": x}
        return None

    def s_swap():
        for variant, partner in S_PARTNER.items():
            w = residual_witness(ops.S @ families[variant].matrix - families[partner].matrix,
                                 variant=variant.name, image=partner.name)
            if w:
                w["vertex"] = w.pop("col")
                return w
        return None

    out.append(run_check("split.zeta-unitriangular",
                         "the DD basis matrix is unitriangular in the canonical order",
                         zeta_unitriangular))
    out.append(run_check("split.s-swap",
                         "S swaps y^DD with y^DU and y^UD with y^UU", s_swap))
    return out


# -- actions of A and A* on the split bases ------------------------------------


def action_coefficients(ops: OperatorSet, variant: SplitVariant,
                        side: str) -> ExactMatrix:
    """Matrix M with B F = F M, as predicted for B = A (side "A") or A* ("Astar")."""
    g = ops.geometry
    N, q, n = ops.N, ops.q, ops.size
    th, ths = ops.theta, ops.theta_star
    entries: list = [0] * (n * n)
    for y in range(n):
        i = g.dim(y)
        if side == "A":
            if variant is DD:
                diag, coeff, targets = th[N - i], 1, g.cover_up[y]
            elif variant is DU:
                diag, coeff, targets = th[i], -1, g.cover_up[y]
            elif variant is UD:
                diag, coeff, targets = th[i], 1, g.cover_down[y]
            else:
                diag, coeff, targets = th[N - i], -1, g.cover_down[y]
        else:
            diag = ths[i]
            if variant.downward:
                coeff, targets = Fraction(q - 1, q**i), g.cover_down[y]
            else:
                coeff, targets = (Fraction(1, q) - 1) / q**i, g.cover_up[y]
        entries[y * n + y] = diag
        for z in targets:
            entries[z * n + y] = coeff
    return ExactMatrix.from_flat(n, n, entries)


def verify_actions(ops: OperatorSet, family: SplitBasisFamily) -> list[CheckResult]:
    variant = family.variant
    out = []
    for side, B in (("A", ops.A), ("Astar", ops.Astar)):
        def witness(side=side, B=B):
            predicted = family.matrix @ action_coefficients(ops, variant, side)
            w = residual_witness(B @ family.matrix - predicted, side=side)
            if w:
                w["vertex"], w["coordinate"] = w.pop("col"), w.pop("row")
            return w

        name = "A" if side == "A" else "A*"
        out.append(run_check(f"actions.{variant.value}-{side.lower()}",
                             f"{name} acts on the {variant.name} split basis as predicted",
                             witness))
    return out


def verify_annihilation(ops: OperatorSet,
                        families: dict[SplitVariant, SplitBasisFamily]) -> CheckResult:
    """(A - theta_0)...(A - theta_{N-j}) y^DD = 0 and (A - theta_0)...(A - theta_j) y^UD = 0
    for dim y = j."""
    g = ops.geometry
    N = ops.N
    eye = ops.identity()
    shifted = [ops.A - eye * t for t in ops.theta]

    def witness():
        prefix = [eye]
        for k in range(N + 1):
            prefix.append(prefix[-1] @ shifted[k])  # prefix[m] = prod_{k < m}
        for j in range(N + 1):
            level = g.level(j)
            for variant, m in ((DD, N - j + 1), (UD, j + 1)):
                cols = families[variant].matrix.select_columns(level)
                w = residual_witness(prefix[m] @ cols, variant=variant.name, j=j)
                if w:
                    w["vertex"] = level[w.pop("col")]
                    return w
        return None

    return run_check("actions.annihilation",
                     "products of (A - theta_k I) annihilate the DD and UD vectors",
                     witness)


# -- split decompositions --------------------------------------------------------


@dataclass(frozen=True)
class SplitDecomposition:
    variant: SplitVariant
    subspaces: tuple[ExactMatrix, ...]  # U_i as a matrix whose rows span it

    def partial_sum(self, indices) -> ExactMatrix:
        n = self.subspaces[0].cols
        mats = [self.subspaces[k] for k in indices]
        return vstack(mats) if mats else ExactMatrix.zeros(0, n)


class SpanOracle:
    """Row bases for sums of the subconstituents E*_kV and eigenspaces E_kV."""

    def __init__(self, ops: OperatorSet):
        self.ops = ops
        self.n = ops.size
        g = ops.geometry
        self._levels = [g.level(k) for k in range(ops.N + 1)]
        self._eig = [row_basis(e.transpose()) for e in ops.E]

    def estar(self, indices) -> ExactMatrix:
        coords = sorted(y for k in indices for y in self._levels[k])
        if not coords:
            return ExactMatrix.zeros(0, self.n)
        return ExactMatrix.identity(self.n).select_rows(coords)

    def e(self, indices) -> ExactMatrix:
        mats = [self._eig[k] for k in indices]
        return vstack(mats) if mats else ExactMatrix.zeros(0, self.n)

    def eigenspace_dim(self, k: int) -> int:
        return self._eig[k].rows


def _definition_spaces(oracle: SpanOracle, variant: SplitVariant, i: int, N: int):
    """The two flags intersected to define U_i^variant."""
    star = range(0, i + 1) if variant.downward else range(N - i, N + 1)
    eig = range(0, N - i + 1) if variant in (DD, UD) else range(i, N + 1)
    return oracle.estar(star), oracle.e(eig)


def build_split_decomposition(ops: OperatorSet, family: SplitBasisFamily) -> SplitDecomposition:
    """U_i from the split vectors of dimension i (DD, DU) or N - i (UD, UU)."""
    g = ops.geometry
    N = ops.N
    subspaces = []
    for i in range(N + 1):
        level = g.level(i if family.variant.downward else N - i)
        subspaces.append(family.rows_for(level))
    return SplitDecomposition(family.variant, tuple(subspaces))


def verify_definition(ops: OperatorSet, decomp: SplitDecomposition,
                      oracle: SpanOracle) -> CheckResult:
    """Compare U_i computed as an intersection of flags against the split-vector basis."""
    N, q = ops.N, ops.q

    def witness():
        for i, U in enumerate(decomp.subspaces):
            expected = gaussian_binomial(N, i, q)
            star, eig = _definition_spaces(oracle, decomp.variant, i, N)
            meet = intersection(star, eig)
            if rank(U) != expected or meet.rows != expected:
                return {"i": i, "rank_basis": rank(U), "dim_intersection": meet.rows,
                        "expected": expected}
            if not span_equal(meet, U):
                return {"i": i, "reason": "intersection differs from split-vector span"}
        return None

    return run_check(f"decomp.definition-{decomp.variant.value}",
                     f"U_i^{decomp.variant.name} = flag intersection, spanned by split "
                     "vectors, of dimension [N choose i]_q", witness)


def verify_split_decompositions(ops: OperatorSet,
                    families: dict[SplitVariant, SplitBasisFamily],
                    decomps: dict[SplitVariant, SplitDecomposition],
                    oracle: SpanOracle | None = None) -> list[CheckResult]:
    g = ops.geometry
    N, n = ops.N, ops.size
    oracle = oracle or SpanOracle(ops)
    out: list[CheckResult] = []

    def vertices(pred):
        return [y for y in range(n) if pred(g.dim(y))]

    # vectors of a family filtered by dimension, against the flag they should span
    triangular = [
        (DD, "estar", lambda i: vertices(lambda d: d <= i), lambda i: oracle.estar(range(i + 1))),
        (DD, "e", lambda i: vertices(lambda d: d >= i), lambda i: oracle.e(range(N - i + 1))),
        (DU, "estar", lambda i: vertices(lambda d: d <= i), lambda i: oracle.estar(range(i + 1))),
        (DU, "e", lambda i: vertices(lambda d: d >= i), lambda i: oracle.e(range(i, N + 1))),
        (UD, "estar", lambda i: vertices(lambda d: d >= i), lambda i: oracle.estar(range(i, N + 1))),
        (UD, "e", lambda i: vertices(lambda d: d <= i), lambda i: oracle.e(range(i + 1))),
        (UU, "estar", lambda i: vertices(lambda d: d >= i), lambda i: oracle.estar(range(i, N + 1))),
        (UU, "e", lambda i: vertices(lambda d: d <= i), lambda i: oracle.e(range(N - i, N + 1))),
    ]
    for variant, kind, select, target in triangular:
        def witness(variant=variant, select=select, target=target):
            for i in range(N + 1):
                vecs = families[variant].rows_for(select(i))
                if rank(vecs) != vecs.rows:
                    return {"i": i, "reason": "vectors are dependent"}
                if not span_equal(vecs, target(i)):
                    return {"i": i, "reason": "span differs from the flag"}
            return None

        flag = "E*_kV" if kind == "estar" else "E_kV"
        out.append(run_check(f"decomp.triangular-{variant.value}-{kind}",
                             f"filtered {variant.name} vectors form a basis of a sum of {flag}",
                             witness))

    for variant in SplitVariant:
        out.append(verify_definition(ops, decomps[variant], oracle))

    def direct_sums():
        for variant, d in decomps.items():
            dims = [u.rows for u in d.subspaces]
            if sum(dims) != n or rank(d.partial_sum(range(N + 1))) != n:
                return {"variant": variant.name, "dims": dims}
        return None

    def s_swap():
        for variant, partner in S_PARTNER.items():
            for i in range(N + 1):
                image = decomps[variant].subspaces[i] @ ops.S
                if not span_equal(image, decomps[partner].subspaces[i]):
                    return {"variant": variant.name, "i": i}
        return None

    out.append(run_check("decomp.direct-sums",
                         "each split decomposition is a direct sum equal to V", direct_sums))
    out.append(run_check("decomp.s-swap", "S U_i^DD = U_i^DU and S U_i^UD = U_i^UU (and back)",
                         s_swap))

    dd, du, ud, uu = (decomps[v] for v in (DD, DU, UD, UU))
    flags = [
        ("estar-lower", lambda i: oracle.estar(range(i + 1)),
         lambda i: range(i + 1), (dd, du)),
        ("estar-upper", lambda i: oracle.estar(range(N - i, N + 1)),
         lambda i: range(i + 1), (ud, uu)),
        ("e-lower", lambda i: oracle.e(range(i + 1)),
         lambda i: range(N - i, N + 1), (dd, ud)),
        ("e-upper", lambda i: oracle.e(range(N - i, N + 1)),
         lambda i: range(N - i, N + 1), (du, uu)),
    ]
    for name, flag, idx, pair in flags:
        def witness(flag=flag, idx=idx, pair=pair):
            for i in range(N + 1):
                f = flag(i)
                for d in pair:
                    if not span_equal(f, d.partial_sum(idx(i))):
                        return {"i": i, "variant": d.variant.name}
            return None

        out.append(run_check(f"decomp.flag-{name}",
                             f"the {name} flag equals the matching partial sums of split subspaces",
                             witness))

    out.extend(verify_inclusions(ops, decomps))
    return out


def verify_inclusions(ops: OperatorSet,
                      decomps: dict[SplitVariant, SplitDecomposition]) -> list[CheckResult]:
    """(B - shift_i I) U_i lies in U_{i+1} (B = A) or U_{i-1} (B = A*)."""
    N, n = ops.N, ops.size
    eye = ops.identity()
    th, ths = ops.theta, ops.theta_star
    shifts = {
        (DD, "A"): lambda i: th[N - i], (DD, "Astar"): lambda i: ths[i],
        (DU, "A"): lambda i: th[i], (DU, "Astar"): lambda i: ths[i],
        (UD, "A"): lambda i: th[N - i], (UD, "Astar"): lambda i: ths[N - i],
        (UU, "A"): lambda i: th[i], (UU, "Astar"): lambda i: ths[N - i],
    }
    out = []
    for (variant, side), shift in shifts.items():
        d = decomps[variant]
        B = ops.A if side == "A" else ops.Astar
        step = 1 if side == "A" else -1

        def witness(d=d, B=B, step=step, shift=shift):
            for i in range(N + 1):
                image = d.subspaces[i] @ (B - eye * shift(i)).transpose()
                k = i + step
                if 0 <= k <= N:
                    target = d.subspaces[k]
                    if rank(vstack([target, image])) != rank(target):
                        return {"i": i, "reason": f"image leaves U_{k}"}
                elif not image.is_zero():
                    row, col, entry = image.first_nonzero()
                    return {"i": i, "row": row, "col": col, "entry": entry}
            return None

        name, target = ("A", "i+1") if side == "A" else ("A*", "i-1")
        out.append(run_check(f"decomp.inclusion-{variant.value}-{side.lower()}",
                             f"({name} - shift) U_i^{variant.name} lies in U_{target}^{variant.name}",
                             witness))
    return out
