from collections import defaultdict
from types import SimpleNamespace

import pytest

from hyperblock.errors import InadmissibleOrder, NotClosedSurface
from hyperblock.group import act_cusp
from hyperblock.surface import (
    build_surface,
    genus,
    oriented_flags,
    verify_flag_transitive,
    verify_surface,
)


@pytest.mark.parametrize(
    "q,v,e,t",
    [(5, 12, 30, 20), (7, 24, 84, 56), (11, 60, 330, 220), (13, 84, 546, 364)],
)
def test_counts(q, v, e, t, surface):
    s = surface(q)
    assert len(s.vertices) == v == (q * q - 1) // 2
    assert len(s.edges) == e == q * (q * q - 1) // 4
    assert len(s.triangles) == t == q * (q * q - 1) // 6
    assert 2 * e == q * v


@pytest.mark.parametrize("q", [5, 7, 11])
def test_verify_surface(q, surface):
    rep = verify_surface(surface(q))
    assert rep.simplicial
    assert rep.links_are_q_cycles
    assert rep.counts_ok
    assert rep.orientable
    assert rep.passed


@pytest.mark.parametrize("q,g", [(5, 0), (7, 3), (13, 50)])
def test_genus(q, g, surface):
    assert genus(surface(q)) == g


def test_edge_graph_regular_connected(surface):
    s = surface(7)
    deg = defaultdict(int)
    for a, b in s.edges:
        deg[a] += 1
        deg[b] += 1
    assert set(deg.values()) == {7}
    adj = defaultdict(set)
    for a, b in s.edges:
        adj[a].add(b)
        adj[b].add(a)
    seen = {0}
    todo = [0]
    while todo:
        u = todo.pop()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                todo.append(w)
    assert len(seen) == len(s.vertices)


def test_base_triangle_stabilizer_order_three(surface):
    s = surface(7)
    base = {s.vertices[i] for i in s.base_order}
    idx = s.vertex_index
    count = sum(
        1 for g in s.table if {act_cusp(g, v) for v in base} == base
    )
    assert count == 3


@pytest.mark.parametrize("q", [5, 7, 11])
def test_flag_transitivity(q, surface):
    s = surface(q)
    assert verify_flag_transitive(s)
    assert len(oriented_flags(s)) == 3 * len(s.triangles) == len(s.table)


def test_duplicate_triangle_fails_simpliciality(surface):
    s = surface(5)
    tris = s.triangles + (s.triangles[0],)
    edge_tris = defaultdict(list)
    for tid, t in enumerate(tris):
        for e in ((t[0], t[1]), (t[0], t[2]), (t[1], t[2])):
            edge_tris[e].append(tid)
    fake = SimpleNamespace(
        q=5,
        vertices=s.vertices,
        triangles=tris,
        edges=s.edges,
        edge_tris=dict(edge_tris),
        orientable=False,
        oriented=None,
    )
    rep = verify_surface(fake)
    assert not rep.simplicial
    assert not rep.passed
    with pytest.raises(NotClosedSurface):
        genus(fake)


@pytest.mark.parametrize("q", [2, 4, 9, 15])
def test_inadmissible_surface_orders(q):
    with pytest.raises(InadmissibleOrder):
        build_surface(q)
