"""The octahedral block complex X_q and its combinatorial verification.

X_q is built as the orbit of one base block under PSL2(F_q): a block is a
6-cusp octahedron carrying its 3 antipodal (diagonal) pairs; the 12 other
vertex pairs are its edges and the 8 transversals (one endpoint per pair)
are its triangles. Everything downstream (design parameters, strong
regularity, cusp links) is derived from this one orbit.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, product

import numpy as np

from . import _kernels
from .arith import GaussianInt, I, ONE, ZERO
from .errors import (
    ClosureSizeMismatch,
    CountMismatch,
    DegenerateBlock,
    NotApplicable,
    WrongOrder,
)
from .group import (
    Cusp,
    GroupTable,
    ProjMatrix,
    act_cusp,
    all_cusps,
    base_cusp,
    compose,
    cusp_from_rational,
    enumerate_group,
    from_int_matrix,
    identity,
    transversal_map,
)

# Ideal vertices of the base octahedron as projective pairs over Z[i]:
# infinity, 0, 1, i, 1+i, (1+i)/2.
BASE_IDEAL_VERTICES = (
    (ONE, ZERO),
    (ZERO, ONE),
    (ONE, ONE),
    (I, ONE),
    (ONE + I, ONE),
    (ONE + I, GaussianInt(2, 0)),
)

# Diagonals of the base octahedron, as index pairs into BASE_IDEAL_VERTICES:
# {infinity, (1+i)/2}, {0, 1+i}, {1, i}.
BASE_DIAGONAL_INDICES = ((0, 5), (1, 4), (2, 3))

# The order-3 rotation z -> 1/(1-z) cycles (inf 0 1) and (i, (1+i)/2, 1+i).
_ROTATION_CYCLES = {0: 1, 1: 2, 2: 0, 3: 5, 5: 4, 4: 3}


@dataclass(frozen=True, order=True)
class Block:
    """Six distinct cusps plus a perfect matching of antipodal pairs."""

    verts: tuple[Cusp, ...]
    pairing: tuple[tuple[Cusp, Cusp], ...]


def make_block(verts, pairs) -> Block:
    """Canonicalize: sort vertices, sort each pair, sort the pairing."""
    vs = tuple(sorted(verts))
    if len(set(vs)) != 6 or len(vs) != 6:
        raise DegenerateBlock(f"expected 6 distinct cusps, got {vs}")
    pairing = tuple(sorted(tuple(sorted(p)) for p in pairs))
    covered = [c for p in pairing for c in p]
    if len(pairing) != 3 or sorted(covered) != list(vs):
        raise DegenerateBlock(f"pairing {pairing} is not a perfect matching on {vs}")
    return Block(vs, pairing)


def block_edges(block: Block):
    """The 12 non-paired 2-subsets."""
    diag = set(block.pairing)
    return tuple(p for p in combinations(block.verts, 2) if p not in diag)


def block_triangles(block: Block):
    """The 8 transversals choosing one endpoint from each pair."""
    return tuple(
        tuple(sorted(choice)) for choice in product(*block.pairing)
    )


def act_block(g: ProjMatrix, block: Block) -> Block:
    imgs = {v: act_cusp(g, v) for v in block.verts}
    return make_block(
        (imgs[v] for v in block.verts),
        ((imgs[a], imgs[b]) for a, b in block.pairing),
    )


def _mobius_exact(rows, vert):
    """Apply an integer 2x2 matrix to a projective pair over Z[i]."""
    (a, b), (c, d) = rows
    num, den = vert
    ga = GaussianInt(a, 0)
    gb = GaussianInt(b, 0)
    gc = GaussianInt(c, 0)
    gd = GaussianInt(d, 0)
    return (ga * num + gb * den, gc * num + gd * den)


def _proj_eq(v, w) -> bool:
    return (v[0] * w[1]) == (w[0] * v[1])


def _validate_rotation_generator(rows) -> None:
    """Check the second generator's exact action on the six ideal vertices."""
    for src, dst in _ROTATION_CYCLES.items():
        img = _mobius_exact(rows, BASE_IDEAL_VERTICES[src])
        if not _proj_eq(img, BASE_IDEAL_VERTICES[dst]):
            raise ClosureSizeMismatch(
                f"rotation generator maps vertex {src} to {img}, expected vertex {dst}"
            )


def octahedral_subgroup(field) -> tuple[ProjMatrix, ...]:
    """The 12 reduced symmetries of the base octahedron.

    Closure of {psi, g3} with psi = [[-i, i-1], [0, i]] and
    g3 = [[0, 1], [-1, 1]]; g3's Mobius action on the six ideal vertices is
    validated exactly over Q(i) before reduction.
    """
    g3_rows = ((0, 1), (-1, 1))
    _validate_rotation_generator(g3_rows)
    psi = from_int_matrix(field, ((-I, I - ONE), (ZERO, I)))
    g3 = from_int_matrix(field, g3_rows)
    elems = {identity(field), psi, g3}
    frontier = list(elems)
    while frontier:
        nxt = []
        for g in frontier:
            for h in (psi, g3):
                prod = compose(g, h)
                if prod not in elems:
                    elems.add(prod)
                    nxt.append(prod)
        frontier = nxt
        if len(elems) > 48:
            break
    if len(elems) != 12:
        raise ClosureSizeMismatch(f"closure has {len(elems)} elements, expected 12")
    return tuple(sorted(elems))


def base_block(field) -> Block:
    """The base octahedron reduced into F_q."""
    cusps = [cusp_from_rational(field, num, den) for num, den in BASE_IDEAL_VERTICES]
    if len(set(cusps)) != 6:
        raise DegenerateBlock(f"base vertices collide at q={field.q}")
    pairs = [(cusps[i], cusps[j]) for i, j in BASE_DIAGONAL_INDICES]
    return make_block(cusps, pairs)


class Cellulation:
    """X_q: cusps, blocks, and the derived edge/diagonal/triangle sets.

    Vertex-pair and cell data are index-based (positions in the sorted cusp
    tuple); `blocks` keeps the cusp-level Block objects.
    """

    def __init__(self, field, table: GroupTable, blocks: tuple[Block, ...]):
        self.field = field
        self.q = field.q
        self.table = table
        self.cusps = all_cusps(field)
        self.cusp_index = {c: i for i, c in enumerate(self.cusps)}
        self.blocks = blocks

        q = self.q
        if len(self.blocks) != q * (q * q - 1) // 24:
            raise CountMismatch(
                f"{len(self.blocks)} blocks, expected {q * (q * q - 1) // 24}"
            )
        if len(self.cusps) != (q * q - 1) // 4:
            raise CountMismatch(
                f"{len(self.cusps)} cusps, expected {(q * q - 1) // 4}"
            )

        idx = self.cusp_index
        self.block_verts = tuple(
            tuple(idx[v] for v in b.verts) for b in blocks
        )
        self.block_pairs = tuple(
            tuple(tuple(sorted((idx[a], idx[b]))) for a, b in b.pairing)
            for b in blocks
        )

        pair_block: dict[tuple[int, int], int] = {}
        pair_edge: dict[tuple[int, int], int] = {}
        pair_diag: dict[tuple[int, int], int] = {}
        triangles: set[tuple[int, int, int]] = set()
        blocks_at: list[list[int]] = [[] for _ in self.cusps]
        for bid, (verts, pairs) in enumerate(zip(self.block_verts, self.block_pairs)):
            for v in verts:
                blocks_at[v].append(bid)
            diag = set(pairs)
            for pair in combinations(verts, 2):
                pair_block[pair] = pair_block.get(pair, 0) + 1
                if pair in diag:
                    pair_diag[pair] = pair_diag.get(pair, 0) + 1
                else:
                    pair_edge[pair] = pair_edge.get(pair, 0) + 1
            for choice in product(*pairs):
                triangles.add(tuple(sorted(choice)))

        self.pair_block_count = pair_block
        self.pair_edge_count = pair_edge
        self.pair_diag_count = pair_diag
        self.edges = frozenset(pair_edge)
        self.diagonals = frozenset(pair_diag)
        self.triangles = frozenset(triangles)
        self.blocks_at = tuple(tuple(b) for b in blocks_at)
        for i, bs in enumerate(self.blocks_at):
            if len(bs) != q:
                raise CountMismatch(
                    f"cusp {self.cusps[i]} lies in {len(bs)} blocks, expected r={q}"
                )

        adj: list[set[int]] = [set() for _ in self.cusps]
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        self.neighbors = tuple(frozenset(a) for a in adj)

    @cached_property
    def transversal(self) -> dict[Cusp, ProjMatrix]:
        """For each cusp x, a group element t with t*x = the infinity cusp."""
        return transversal_map(self.table, base_cusp(self.field))


def build_cellulation(field) -> Cellulation:
    """Orbit of the base block under the full group, deduplicated."""
    table = enumerate_group(field)
    base = base_block(field)
    blocks = tuple(sorted({act_block(g, base) for g in table}))
    return Cellulation(field, table, blocks)


@dataclass(frozen=True)
class TilingLemmaReport:
    """Results of the four combinatorial tiling checks.

    part1: every block has 6 distinct cusps.
    part2: every edge pair lies in exactly 4 blocks, as an edge in all of them.
    part3: every diagonal pair is a diagonal of exactly 1 block.
    part4: no pair is both an edge and a diagonal.
    At q=5 parts 2 and 4 fail by design (the edge graph is complete and the
    diagonals sweep out all 15 pairs); `ok` compares the observed failures
    against that expected exception set.
    """

    q: int
    part1: bool
    part2: bool
    part3: bool
    part4: bool
    details: dict

    @property
    def parts(self) -> tuple[bool, bool, bool, bool]:
        return (self.part1, self.part2, self.part3, self.part4)

    @property
    def failed_parts(self) -> tuple[int, ...]:
        return tuple(i + 1 for i, okay in enumerate(self.parts) if not okay)

    @property
    def expected_failed_parts(self) -> tuple[int, ...]:
        return (2, 4) if self.q == 5 else ()

    @property
    def ok(self) -> bool:
        return self.failed_parts == self.expected_failed_parts


def verify_tiling_lemma(cell: Cellulation) -> TilingLemmaReport:
    part1 = all(len(set(v)) == 6 for v in cell.block_verts)
    part2 = all(
        cell.pair_block_count[e] == 4 and cell.pair_edge_count[e] == 4
        for e in cell.edges
    )
    part3 = all(cell.pair_diag_count[d] == 1 for d in cell.diagonals)
    common = cell.edges & cell.diagonals
    part4 = not common
    details = {
        "n_edges": len(cell.edges),
        "n_diagonals": len(cell.diagonals),
        "n_pairs_both_edge_and_diagonal": len(common),
        "block_count_values_on_edges": sorted(
            {cell.pair_block_count[e] for e in cell.edges}
        ),
        "diagonal_multiplicity_values": sorted(
            {cell.pair_diag_count[d] for d in cell.diagonals}
        ),
    }
    return TilingLemmaReport(cell.q, part1, part2, part3, part4, details)


def _strong_regularity_inputs(cell: Cellulation):
    """Cells as bitmasks plus face lists, vertex incidence, and lookups."""
    v = len(cell.cusps)
    cells: list[tuple[int, ...]] = [(i,) for i in range(v)]
    cells += [e for e in sorted(cell.edges)]
    cells += [t for t in sorted(cell.triangles)]
    cells += list(cell.block_verts)

    key_to_id: dict[tuple[int, ...], int] = {}
    for cid, cv in enumerate(cells):
        if cv in key_to_id:
            return None, (key_to_id[cv], cid)
        key_to_id[cv] = cid

    faces: list[list[int]] = []
    for cid, cv in enumerate(cells):
        fl = [cid]
        if len(cv) >= 2:
            fl += [key_to_id[(a,)] for a in cv]
        if len(cv) == 3:
            fl += [key_to_id[p] for p in combinations(cv, 2)]
        if len(cv) == 6:
            bid = cid - (len(cells) - len(cell.block_verts))
            pairs = set(cell.block_pairs[bid])
            for p in combinations(cv, 2):
                if p not in pairs:
                    fl.append(key_to_id[p])
            for choice in product(*cell.block_pairs[bid]):
                fl.append(key_to_id[tuple(sorted(choice))])
        faces.append(fl)

    n = len(cells)
    K = (v + 63) // 64
    masks = np.zeros((n, K), dtype=np.uint64)
    for cid, cv in enumerate(cells):
        for a in cv:
            masks[cid, a >> 6] |= np.uint64(1) << np.uint64(a & 63)

    vert_cells: list[list[int]] = [[] for _ in range(v)]
    for cid, cv in enumerate(cells):
        for a in cv:
            vert_cells[a].append(cid)
    vc_ptr = np.zeros(v + 1, dtype=np.int64)
    for a in range(v):
        vc_ptr[a + 1] = vc_ptr[a] + len(vert_cells[a])
    vc_ids = np.fromiter(
        (cid for lst in vert_cells for cid in lst), dtype=np.int64, count=int(vc_ptr[-1])
    )

    order = np.lexsort(tuple(masks[:, k] for k in reversed(range(K))))
    sorted_masks = np.ascontiguousarray(masks[order])
    sorted_ids = order.astype(np.int64)

    face_codes = np.sort(
        np.fromiter(
            (cid * n + f for cid, fl in enumerate(faces) for f in fl),
            dtype=np.int64,
        )
    )
    return (masks, vc_ptr, vc_ids, sorted_masks, sorted_ids, face_codes), None


def verify_strongly_regular(cell: Cellulation, backend: str | None = None) -> bool:
    """True iff any two cells meet in a common face (as vertex sets).

    Vertex-set uniqueness across all cells is checked first; a duplicate is
    a strong-regularity failure.
    """
    if cell.q == 5:
        raise NotApplicable("strong regularity is undefined at q=5")
    inputs, dup = _strong_regularity_inputs(cell)
    if dup is not None:
        return False
    ok, _, _ = _kernels.strong_regularity_scan(*inputs, backend=backend)
    return bool(ok)


def one_factorization_k6(cell: Cellulation):
    """At q=5 the 5 block pairings partition the 15 pairs of K6."""
    if cell.q != 5:
        raise WrongOrder(f"1-factorization requires q=5, got q={cell.q}")
    matchings = [tuple(pairs) for pairs in cell.block_pairs]
    if len(matchings) != 5:
        raise CountMismatch(f"{len(matchings)} matchings, expected 5")
    seen: set[tuple[int, int]] = set()
    for m in matchings:
        verts = [x for p in m for x in p]
        if len(m) != 3 or len(set(verts)) != 6:
            raise CountMismatch(f"{m} is not a perfect matching on 6 vertices")
        for p in m:
            if p in seen:
                raise CountMismatch(f"pair {p} appears in two matchings")
            seen.add(p)
    if len(seen) != 15:
        raise CountMismatch(f"matchings cover {len(seen)} pairs, expected 15")
    return matchings


def setwise_block_stabilizer(cell: Cellulation, block: Block) -> tuple[ProjMatrix, ...]:
    """All group elements mapping the block (with pairing) to itself."""
    return tuple(g for g in cell.table if act_block(g, block) == block)


def axis_stabilizer_intersection(cell: Cellulation) -> tuple[ProjMatrix, ...]:
    """Elements fixing both the infinity cusp and the (1+i)/2 cusp."""
    inf = base_cusp(cell.field)
    half = cusp_from_rational(cell.field, ONE + I, GaussianInt(2, 0))
    return tuple(
        g
        for g in cell.table
        if act_cusp(g, inf) == inf and act_cusp(g, half) == half
    )
