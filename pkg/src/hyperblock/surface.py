"""Quotient surfaces of the ideal-triangle tiling under PSL2(Z/q).

Vertices are the nonzero vectors of F_q^2 modulo sign; triangles are the
orbit of the base triangle {(1,0), (0,1), (1,1)} under the full group. The
surface is oriented by declaring the base cyclic order positive and
propagating across shared edges.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass

import numpy as np

from .arith import PrimeField, is_prime
from .errors import CountMismatch, InadmissibleOrder, NotClosedSurface
from .group import (
    MODE_2D,
    GroupTable,
    act_cusp,
    all_cusps,
    canon_cusp,
    enumerate_group,
    from_int_matrix,
)


def _rotate_min(cyc):
    i = cyc.index(min(cyc))
    return cyc[i:] + cyc[:i]


class SurfaceComplex:
    def __init__(self, q: int, field: PrimeField, table: GroupTable):
        self.q = q
        self.field = field
        self.table = table
        self.vertices = all_cusps(field, MODE_2D)
        self.vertex_index = {c: i for i, c in enumerate(self.vertices)}

        idx = self.vertex_index
        base = tuple(
            idx[canon_cusp(field, u, w, MODE_2D)]
            for u, w in ((field.one, 0), (0, field.one), (field.one, field.one))
        )
        self.base_order = base

        rot = from_int_matrix(field, ((0, 1), (-1, 1)))
        base_set = {self.vertices[i] for i in base}
        if {act_cusp(rot, v) for v in base_set} != base_set:
            raise CountMismatch("order-3 rotation does not stabilize the base triangle")

        tris: set[tuple[int, int, int]] = set()
        for g in table:
            img = tuple(sorted(idx[act_cusp(g, self.vertices[i])] for i in base))
            tris.add(img)
        self.triangles = tuple(sorted(tris))
        self.tri_index = {t: i for i, t in enumerate(self.triangles)}

        edge_tris: dict[tuple[int, int], list[int]] = defaultdict(list)
        for tid, t in enumerate(self.triangles):
            for e in ((t[0], t[1]), (t[0], t[2]), (t[1], t[2])):
                edge_tris[e].append(tid)
        self.edge_tris = dict(edge_tris)
        self.edges = tuple(sorted(edge_tris))

        self.oriented, self.orientable = self._orient()

    def _orient(self):
        """Coherent cyclic orders by propagation from the base triangle."""
        t = len(self.triangles)
        oriented: list[tuple[int, int, int] | None] = [None] * t
        base_tid = self.tri_index[tuple(sorted(self.base_order))]
        oriented[base_tid] = _rotate_min(self.base_order)
        queue = deque([base_tid])
        ok = True
        while queue:
            tid = queue.popleft()
            a, b, c = oriented[tid]
            for u, v in ((a, b), (b, c), (c, a)):
                key = (u, v) if u < v else (v, u)
                for other in self.edge_tris.get(key, ()):
                    if other == tid:
                        continue
                    w = next(x for x in self.triangles[other] if x != u and x != v)
                    cand = _rotate_min((v, u, w))
                    if oriented[other] is None:
                        oriented[other] = cand
                        queue.append(other)
                    elif oriented[other] != cand:
                        ok = False
        if any(o is None for o in oriented):
            ok = False
        return (tuple(o for o in oriented) if ok else None), ok


def build_surface(q: int) -> SurfaceComplex:
    """Build S_q for an odd prime q."""
    if not isinstance(q, int) or not is_prime(q) or q == 2:
        raise InadmissibleOrder(f"surface order must be an odd prime, got {q!r}")
    field = PrimeField(q)
    table = enumerate_group(field)
    return SurfaceComplex(q, field, table)


@dataclass
class SurfaceReport:
    simplicial: bool
    links_are_q_cycles: bool
    counts_ok: bool
    orientable: bool
    details: dict

    @property
    def passed(self) -> bool:
        return self.simplicial and self.links_are_q_cycles and self.counts_ok and self.orientable


def _vertex_link_is_cycle(s: SurfaceComplex, vi: int) -> bool:
    """The opposite edges of the triangles at vi must form one q-cycle."""
    nbrs: dict[int, set[int]] = defaultdict(set)
    count = 0
    for t in s.triangles:
        if vi in t:
            a, b = (x for x in t if x != vi)
            nbrs[a].add(b)
            nbrs[b].add(a)
            count += 1
    if count != s.q or len(nbrs) != s.q:
        return False
    if any(len(v) != 2 for v in nbrs.values()):
        return False
    start = next(iter(nbrs))
    seen = {start}
    cur, prev = next(iter(nbrs[start])), start
    while cur != start:
        seen.add(cur)
        nxt = next(x for x in nbrs[cur] if x != prev)
        prev, cur = cur, nxt
    return len(seen) == s.q


def verify_surface(s: SurfaceComplex, links_all: bool = True) -> SurfaceReport:
    q = s.q
    v = len(s.vertices)
    e = len(s.edges)
    t = len(s.triangles)

    simplicial = all(len(set(tri)) == 3 for tri in s.triangles)
    simplicial &= all(len(tids) == 2 for tids in s.edge_tris.values())

    vs = range(v) if links_all else range(min(v, 8))
    links_ok = all(_vertex_link_is_cycle(s, vi) for vi in vs)

    counts_ok = (
        v == (q * q - 1) // 2
        and e == q * (q * q - 1) // 4
        and t == q * (q * q - 1) // 6
        and 2 * e == q * v
    )

    orientable = s.orientable
    if orientable:
        directed = set()
        for a, b, c in s.oriented:
            for de in ((a, b), (b, c), (c, a)):
                if de in directed:
                    orientable = False
                directed.add(de)
        orientable = orientable and len(directed) == 2 * e

    details = {"v": v, "e": e, "t": t, "euler": v - e + t}
    return SurfaceReport(bool(simplicial), bool(links_ok), bool(counts_ok), bool(orientable), details)


def genus(s: SurfaceComplex) -> int:
    """(2 - euler)/2 for a verified closed oriented surface."""
    rep = verify_surface(s)
    if not rep.passed:
        raise NotClosedSurface(f"surface checks failed: {rep}")
    chi = rep.details["euler"]
    return (2 - chi) // 2


def oriented_flags(s: SurfaceComplex) -> frozenset[tuple[int, int]]:
    """Coherent flags encoded as directed edges (3t of them)."""
    out = set()
    for a, b, c in s.oriented:
        out.update(((a, b), (b, c), (c, a)))
    return frozenset(out)


def verify_flag_transitive(s: SurfaceComplex, table: GroupTable | None = None) -> bool:
    """Single group orbit on coherent flags, of size 3t."""
    if not s.orientable:
        return False
    table = table or s.table
    flags = oriented_flags(s)
    idx = s.vertex_index
    u0, v0 = s.base_order[0], s.base_order[1]
    cu, cv = s.vertices[u0], s.vertices[v0]
    orbit = set()
    for g in table:
        f = (idx[act_cusp(g, cu)], idx[act_cusp(g, cv)])
        if f not in flags:
            return False
        orbit.add(f)
    return orbit == flags and len(orbit) == 3 * len(s.triangles)


def surface_adjacency(s: SurfaceComplex) -> np.ndarray:
    n = len(s.vertices)
    A = np.zeros((n, n), dtype=np.float64)
    for i, j in s.edges:
        A[i, j] = A[j, i] = 1.0
    return A
