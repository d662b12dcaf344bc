"""The vertex set X of L_N(q), its Hasse diagram, and distances from 0."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import TextIO

from .checks import CheckResult, run_check
from .gfspace import (
    DEFAULT_SIZE_LIMIT,
    FieldSpec,
    Subspace,
    covers,
    enumerate_subspaces,
    gaussian_binomial,
    q_integer,
)


@dataclass(frozen=True)
class Geometry:
    field: FieldSpec
    N: int
    vertices: tuple[Subspace, ...]
    cover_up: tuple[tuple[int, ...], ...]
    cover_down: tuple[tuple[int, ...], ...]
    index: dict[Subspace, int] = field(repr=False, compare=False)
    zero_index: int = 0

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def size(self) -> int:
        return len(self.vertices)

    def dim(self, v: int) -> int:
        return self.vertices[v].dim

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(s.dim for s in self.vertices)

    def level(self, i: int) -> list[int]:
        return [v for v, s in enumerate(self.vertices) if s.dim == i]

    def neighbours(self, v: int) -> tuple[int, ...]:
        return self.cover_down[v] + self.cover_up[v]

    def edges(self) -> list[tuple[int, int]]:
        """Hasse edges as (lower, upper) index pairs, in canonical order."""
        return [(y, z) for y in range(self.size) for z in self.cover_up[y]]

    def downsets(self) -> list[int]:
        """Bitmask of {z : z <= y} for every vertex y (transitive closure)."""
        down = [0] * self.size
        for y in range(self.size):  # canonical order is by ascending dimension
            mask = 1 << y
            for z in self.cover_down[y]:
                mask |= down[z]
            down[y] = mask
        return down


def build_geometry(fld: FieldSpec, N: int,
                   size_limit: int | None = DEFAULT_SIZE_LIMIT) -> Geometry:
    vertices = enumerate_subspaces(fld, N, size_limit)
    by_dim: dict[int, list[int]] = {}
    for v, s in enumerate(vertices):
        by_dim.setdefault(s.dim, []).append(v)
    up: list[list[int]] = [[] for _ in vertices]
    down: list[list[int]] = [[] for _ in vertices]
    for i in range(N):
        for y in by_dim[i]:
            for z in by_dim[i + 1]:
                if covers(vertices[z], vertices[y]):
                    up[y].append(z)
                    down[z].append(y)
    index = {s: v for v, s in enumerate(vertices)}
    return Geometry(
        field=fld,
        N=N,
        vertices=tuple(vertices),
        cover_up=tuple(map(tuple, up)),
        cover_down=tuple(map(tuple, down)),
        index=index,
        zero_index=by_dim[0][0],
    )


def subconstituent(g: Geometry, i: int) -> list[int]:
    if not 0 <= i <= g.N:
        raise IndexError(f"subconstituent index {i} outside [0, {g.N}]")
    return g.level(i)


def bfs_distances(g: Geometry, source: int | None = None) -> list[int | None]:
    source = g.zero_index if source is None else source
    dist: list[int | None] = [None] * g.size
    dist[source] = 0
    queue = deque([source])
    while queue:
        y = queue.popleft()
        for z in g.neighbours(y):
            if dist[z] is None:
                dist[z] = dist[y] + 1
                queue.append(z)
    return dist


def _distance_witness(g: Geometry):
    dist = bfs_distances(g)
    for v, d in enumerate(dist):
        if d != g.dim(v):
            return {"vertex": v, "dim": g.dim(v), "distance": d}
    return None


def _bipartite_witness(g: Geometry):
    for y, z in g.edges():
        if (g.dim(y) + g.dim(z)) % 2 != 1:
            return {"edge": [y, z]}
    return None


def verify_distance_equals_dimension(g: Geometry) -> CheckResult:
    """BFS distance from 0 equals dimension, and every edge joins the
    even-dimension and odd-dimension parts."""

    def witness():
        return _distance_witness(g) or _bipartite_witness(g)

    return run_check("poset.distance-equals-dimension",
                     "d(0,y) = dim y and the dimension parity bipartitions X", witness)


def verify_local_valencies(g: Geometry) -> CheckResult:
    def witness():
        for v in range(g.size):
            i = g.dim(v)
            down, up = len(g.cover_down[v]), len(g.cover_up[v])
            if (down, up) != (q_integer(i, g.q), q_integer(g.N - i, g.q)):
                return {"vertex": v, "dim": i, "down": down, "up": up}
        return None

    return run_check("poset.local-valencies",
                     "dim y = i has [i]_q neighbours below and [N-i]_q above", witness)


def verify_poset(g: Geometry) -> list[CheckResult]:
    q, N = g.q, g.N

    def count():
        expected = sum(gaussian_binomial(N, i, q) for i in range(N + 1))
        return None if g.size == expected else {"vertices": g.size, "expected": expected}

    def spheres():
        dist = bfs_distances(g)
        for i in range(N + 1):
            got = sum(1 for d in dist if d == i)
            if got != gaussian_binomial(N, i, q):
                return {"i": i, "size": got, "expected": gaussian_binomial(N, i, q)}
        return None

    def diameter():
        dist = bfs_distances(g)
        if None in dist:
            return {"unreached": dist.index(None)}
        return None if max(dist) == N else {"diameter": max(dist)}

    def symmetric():
        ups = sum(len(u) for u in g.cover_up)
        downs = sum(len(d) for d in g.cover_down)
        if ups != downs:
            return {"edges_up": ups, "edges_down": downs}
        for y in range(g.size):
            for z in g.cover_up[y]:
                if y not in g.cover_down[z]:
                    return {"edge": [y, z]}
        return None

    return [
        run_check("poset.vertex-count", "|X| = sum_i [N choose i]_q", count),
        run_check("poset.sphere-sizes", "|Gamma_i(0)| = [N choose i]_q", spheres),
        run_check("poset.connected-diameter",
                  "Gamma is connected with diameter N from 0", diameter),
        run_check("poset.adjacency-symmetric",
                  "cover lists agree in both directions", symmetric),
        verify_distance_equals_dimension(g),
        verify_local_valencies(g),
    ]


def write_edge_list(g: Geometry, out: TextIO) -> None:
    for y, z in g.edges():
        out.write(f"{y} {z}\n")
