import io

import pytest

from qpolylab.gfspace import gaussian_binomial, q_integer
from qpolylab.poset import (bfs_distances, subconstituent, verify_distance_equals_dimension,
                            verify_local_valencies, verify_poset, write_edge_list)

from conftest import failures, geometry


def test_small_geometries():
    g1 = geometry(2, 1)
    assert g1.size == 2 and g1.edges() == [(0, 1)]
    g2 = geometry(2, 2)
    assert g2.size == 5 and len(g2.edges()) == 6


def test_cover_count_identity():
    g = geometry(2, 4)
    ups = sum(len(u) for u in g.cover_up)
    assert ups == sum(gaussian_binomial(4, i, 2) * q_integer(4 - i, 2) for i in range(5))


def test_subconstituents():
    assert subconstituent(geometry(2, 2), 0) == [geometry(2, 2).zero_index]
    assert len(subconstituent(geometry(2, 2), 1)) == 3
    assert len(subconstituent(geometry(3, 3), 2)) == 13
    with pytest.raises(IndexError):
        subconstituent(geometry(2, 2), 3)


def test_local_valencies_examples():
    g = geometry(2, 3)
    z = g.zero_index
    assert len(g.cover_down[z]) == 0 and len(g.cover_up[z]) == 7
    for y in g.level(1):
        assert (len(g.cover_down[y]), len(g.cover_up[y])) == (1, 3)
    g = geometry(3, 2)
    for y in g.level(1):
        assert (len(g.cover_down[y]), len(g.cover_up[y])) == (1, 1)


@pytest.mark.parametrize("q,N", [(2, 1), (2, 2), (2, 4), (3, 3), (4, 2)])
def test_verify_poset_passes(q, N):
    g = geometry(q, N)
    assert failures(verify_poset(g)) == []
    assert verify_distance_equals_dimension(g).passed
    assert verify_local_valencies(g).passed
    assert bfs_distances(g) == list(g.dims)


def test_edge_list_format():
    out = io.StringIO()
    write_edge_list(geometry(2, 2), out)
    lines = out.getvalue().splitlines()
    assert len(lines) == 6
    assert all(len(line.split()) == 2 for line in lines)


def test_downsets_match_containment():
    from qpolylab.gfspace import contains
    g = geometry(2, 3)
    down = g.downsets()
    for y in range(g.size):
        for z in range(g.size):
            assert bool(down[y] >> z & 1) == contains(g.vertices[y], g.vertices[z])
