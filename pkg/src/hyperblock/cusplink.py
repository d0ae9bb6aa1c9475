"""Cusp links as square-tiled tori and their three-cylinder sphere split.

The link of a cusp is the torus tiled by q unit squares with vertices
labeled by the residues of Z[i] mod the ideal; it is extracted from the
cellulation (squares = blocks at the cusp) and verified against that flat
model. The split construction cuts the flat torus along three circles
parallel to the meridian at half-integer transverse levels, groups the
clipped pieces into three cylinders, and cones each cylinder's two boundary
circles with the neighboring cylinders' vertices; each of the three
resulting complexes must be a closed connected surface with euler
characteristic 2. All clipping is exact rational arithmetic.

Meridian: the pi-direction of the flat torus in both modes (for inert
fields pi = p, whose primitive direction is horizontal). Cut circles are
closed geodesics of the lattice (pi), so the transverse coordinate is
well-defined only modulo q in split mode and modulo p in inert mode: split
tori have q transverse unit levels with one vertex each, inert tori have p
transverse lines of p vertices each. Levels are therefore the transverse
coordinate itself in split mode (Im(v * conj(pi)) mod q) and the refinement
y*p + x in inert mode; both are bijections onto {0, ..., q-1} with
level // (vertices per line) equal to the geometric transverse unit. Band
sizes count vertices and must be whole numbers of transverse lines (any
sizes in split mode, multiples of p in inert mode).
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from math import floor

from .arith import GaussianInt
from .errors import BadSizes, CountMismatch, LinkNotTorus, NotACircle, NotASphere
from .group import Cusp, act_cusp, base_cusp

BAND_NAMES = ("a", "b", "c")

Point = tuple[Fraction, Fraction]


def meridian_direction(field) -> GaussianInt:
    """Primitive vector of the pi-direction: pi itself, or 1 for inert pi=p."""
    if field.mode == "split":
        return field.pi
    return GaussianInt(1, 0)


def vertices_per_line(field) -> int:
    """Link vertices on each transverse lattice line: 1 (split) or p (inert)."""
    return 1 if field.mode == "split" else field.p


def level_of(field, e: int) -> int:
    """Bijective level; level // vertices_per_line is the transverse unit."""
    lift = field.canonical_lift(e)
    if field.mode == "split":
        pi = field.pi
        return (lift.y * pi.x - lift.x * pi.y) % field.q
    return lift.y * field.p + lift.x


@dataclass(frozen=True)
class Banding:
    q: int
    sizes: tuple[int, int, int]
    unit_sizes: tuple[int, int, int]
    period: int

    @property
    def cuts(self) -> tuple[Fraction, Fraction, Fraction]:
        u1, u2, _ = self.unit_sizes
        h = Fraction(1, 2)
        return (-h, u1 - h, u1 + u2 - h)

    def band_of_level(self, level: int) -> int:
        k1, k2, _ = self.sizes
        if level < k1:
            return 0
        if level < k1 + k2:
            return 1
        return 2


def band_partition(field, sizes=None) -> Banding:
    """Near-balanced default sizes; explicit sizes must be realizable.

    Sizes count vertices per cylinder and must be whole numbers of
    transverse lines: any positive composition of q in split mode,
    multiples of p in inert mode.
    """
    q = field.q
    vpl = vertices_per_line(field)
    period = q // vpl
    if sizes is None:
        u1 = -(-period // 3)
        u2 = -(-(period - u1) // 2)
        units = (u1, u2, period - u1 - u2)
        sizes = tuple(u * vpl for u in units)
    sizes = tuple(int(s) for s in sizes)
    if len(sizes) != 3 or any(s < 1 for s in sizes) or sum(sizes) != q:
        raise BadSizes(f"band sizes {sizes} must be positive and sum to q={q}")
    if any(s % vpl for s in sizes):
        raise BadSizes(
            f"band sizes {sizes} must be multiples of {vpl} "
            f"(each transverse line holds {vpl} vertices)"
        )
    return Banding(q, sizes, tuple(s // vpl for s in sizes), period)


@dataclass
class TorusLink:
    cusp: Cusp
    field: object
    q: int
    labels: tuple[int, ...]
    neighbor_by_label: dict[int, Cusp]
    square_base: tuple[int, ...]
    squares: tuple[tuple[int, int, int, int], ...]
    level: dict[int, int]
    n_vertices: int
    n_sides: int
    n_squares: int
    euler: int
    connected: bool


def _connected(nodes, sides) -> bool:
    if not nodes:
        return False
    adj = defaultdict(set)
    for u, v in sides:
        adj[u].add(v)
        adj[v].add(u)
    seen = {next(iter(nodes))}
    todo = [next(iter(seen))]
    while todo:
        u = todo.pop()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                todo.append(v)
    return len(seen) == len(nodes)


def cusp_link(cell, x: Cusp) -> TorusLink:
    """Extract and verify the square-tiled torus link of a cusp.

    Link vertices are the cusp's neighbors, labeled by residues via a
    transversal to the infinity cusp; the q blocks at the cusp must realize
    squares {z, z+1, z+i, z+1+i} with the block's equator diagonals matching
    the squares' diagonals.
    """
    f = cell.field
    q = f.q
    s = f.s
    xi = cell.cusp_index[x]
    t = cell.transversal[x]
    x0 = base_cusp(f)
    if act_cusp(t, x) != x0:
        raise LinkNotTorus("transversal does not move the cusp to infinity")

    nbrs = sorted(cell.neighbors[xi])
    if len(nbrs) != q:
        raise LinkNotTorus(f"cusp has {len(nbrs)} neighbors, expected q={q}")
    label_of: dict[int, int] = {}
    neighbor_by_label: dict[int, Cusp] = {}
    for yi in nbrs:
        z = act_cusp(t, cell.cusps[yi])
        if z.w == 0:
            raise LinkNotTorus("neighbor transported onto infinity")
        lab = f.mul(z.u, f.inv(z.w))
        label_of[yi] = lab
        neighbor_by_label[lab] = cell.cusps[yi]
    if len(neighbor_by_label) != q:
        raise LinkNotTorus("labels are not distinct")

    one = f.one
    two = f.from_int(2)
    inv4 = f.inv(f.from_int(4))
    squares: dict[int, tuple[int, int, int, int]] = {}
    for bid in cell.blocks_at[xi]:
        pairs = cell.block_pairs[bid]
        equator_pairs = [p for p in pairs if xi not in p]
        if len(equator_pairs) != 2:
            raise LinkNotTorus("cusp is not in exactly one diagonal of its block")
        eq = [v for p in equator_pairs for v in p]
        labs = [label_of.get(v) for v in eq]
        if any(l is None for l in labs):
            raise LinkNotTorus("equator vertex is not a neighbor")
        total = labs[0]
        for l in labs[1:]:
            total = f.add(total, l)
        # corners are {z, z+1, z+s, z+1+s}; their sum is 4z + 2 + 2s
        z = f.mul(f.sub(total, f.add(two, f.mul(two, s))), inv4)
        corners = (z, f.add(z, one), f.add(z, f.add(one, s)), f.add(z, s))
        if set(corners) != set(labs):
            raise LinkNotTorus(f"block corners {sorted(labs)} are not a unit square")
        diag = {frozenset((corners[0], corners[2])), frozenset((corners[1], corners[3]))}
        got = {frozenset((label_of[a], label_of[b])) for a, b in equator_pairs}
        if diag != got:
            raise LinkNotTorus("block equator diagonals do not match square diagonals")
        if z in squares:
            raise LinkNotTorus(f"two blocks realize the square at {z}")
        squares[z] = corners
    if set(squares) != set(f.elements()):
        raise LinkNotTorus("squares do not exhaust the residues")

    side_count: dict[frozenset, int] = defaultdict(int)
    incident: dict[int, int] = defaultdict(int)
    for corners in squares.values():
        for i in range(4):
            side_count[frozenset((corners[i], corners[(i + 1) % 4]))] += 1
        for c in corners:
            incident[c] += 1
    if any(cnt != 2 for cnt in side_count.values()):
        raise LinkNotTorus("a side is not shared by exactly 2 squares")
    if any(incident[l] != 4 for l in neighbor_by_label):
        raise LinkNotTorus("a vertex is not in exactly 4 squares")
    n_sides = len(side_count)
    euler = q - n_sides + q
    if euler != 0 or n_sides != 2 * q:
        raise LinkNotTorus(f"euler characteristic {euler}, sides {n_sides}")
    conn = _connected(set(neighbor_by_label), [tuple(sc) for sc in side_count])
    if not conn:
        raise LinkNotTorus("link is not connected")

    level = {e: level_of(f, e) for e in f.elements()}
    if sorted(level.values()) != list(range(q)):
        raise LinkNotTorus("levels are not a bijection onto 0..q-1")

    square_base = tuple(sorted(squares))
    return TorusLink(
        cusp=x,
        field=f,
        q=q,
        labels=tuple(sorted(neighbor_by_label)),
        neighbor_by_label=neighbor_by_label,
        square_base=square_base,
        squares=tuple(squares[z] for z in square_base),
        level=level,
        n_vertices=q,
        n_sides=n_sides,
        n_squares=q,
        euler=euler,
        connected=conn,
    )


def _tau(w: GaussianInt, pt: Point) -> Fraction:
    return pt[1] * w.x - pt[0] * w.y


def _split_polygon(poly, taus, c: Fraction):
    """Split a convex polygon by the line tau = c (no vertex lies on it)."""
    below, above = [], []
    n = len(poly)
    for i in range(n):
        p, tp = poly[i], taus[i]
        q, tq = poly[(i + 1) % n], taus[(i + 1) % n]
        (below if tp < c else above).append(p)
        if (tp < c) != (tq < c):
            t = (c - tp) / (tq - tp)
            cut = (p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1]))
            below.append(cut)
            above.append(cut)
    return below, above


def _polygon_area2(poly) -> Fraction:
    s = Fraction(0)
    n = len(poly)
    for i in range(n):
        x1, y1 = poly[i]
        x2, y2 = poly[(i + 1) % n]
        s += x1 * y2 - x2 * y1
    return abs(s)


def _canon_point(pi: GaussianInt, pt: Point) -> Point:
    """Canonical representative of a plane point modulo the lattice (pi)."""
    a, b = pi.x, pi.y
    n = a * a + b * b
    alpha = Fraction(a * pt[0] + b * pt[1], n)
    beta = Fraction(a * pt[1] - b * pt[0], n)
    fa, fb = floor(alpha), floor(beta)
    return (pt[0] - fa * a + fb * b, pt[1] - fa * b - fb * a)


def _pieces_of_square(field, w: GaussianInt, cuts, period: int, z: int):
    """Clip the unit square lifted at z by every crossing cut line."""
    lift = field.canonical_lift(z)
    zx, zy = Fraction(lift.x), Fraction(lift.y)
    one = Fraction(1)
    poly = [(zx, zy), (zx + one, zy), (zx + one, zy + one), (zx, zy + one)]
    taus = [_tau(w, p) for p in poly]
    tmin, tmax = min(taus), max(taus)
    crossings = []
    for base in cuts:
        k = math.ceil((tmin - base) / period)
        val = base + period * k
        while val < tmax:
            if val > tmin:
                crossings.append(val)
            val += period
    pieces = [poly]
    for c in sorted(crossings):
        nxt = []
        for piece in pieces:
            ts = [_tau(w, p) for p in piece]
            if min(ts) < c < max(ts):
                lo, hi = _split_polygon(piece, ts, c)
                nxt.extend((lo, hi))
            else:
                nxt.append(piece)
        pieces = nxt
    return pieces


@dataclass
class SplitLinkComplex:
    band: str
    apexes: tuple[str, str]
    n_vertices: int
    n_edges: int
    n_faces: int
    n_pieces: int
    euler: int
    closed: bool
    connected: bool
    boundary_lengths: tuple[int, int]


@dataclass
class SplitLinksResult:
    banding: Banding
    complexes: tuple[SplitLinkComplex, SplitLinkComplex, SplitLinkComplex]
    total_pieces: int
    circle_segments: dict[int, int]
    areas_ok: bool

    @property
    def all_spheres(self) -> bool:
        return all(c.closed and c.connected and c.euler == 2 for c in self.complexes)


def _boundary_cycle(sides) -> int:
    """Length of the single cycle formed by the sides, else NotACircle."""
    adj: dict = defaultdict(list)
    for u, v in sides:
        adj[u].append(v)
        adj[v].append(u)
    if not adj or any(len(x) != 2 for x in adj.values()):
        raise NotACircle("cut polyline is not 2-regular")
    start = next(iter(adj))
    prev, cur = None, start
    seen = 0
    while True:
        seen += 1
        nxt = adj[cur][0] if adj[cur][0] != prev else adj[cur][1]
        prev, cur = cur, nxt
        if cur == start:
            break
    if seen != len(adj):
        raise NotACircle("cut polyline is not a single cycle")
    return len(sides)


def _verify_sphere(band: str, faces) -> tuple[int, int, int, int, bool, bool]:
    side_faces: dict[frozenset, int] = defaultdict(int)
    verts = set()
    for face in faces:
        n = len(face)
        for i in range(n):
            side_faces[frozenset((face[i], face[(i + 1) % n]))] += 1
        verts.update(face)
    closed = all(cnt == 2 for cnt in side_faces.values())
    conn = _connected(verts, [tuple(sf) for sf in side_faces])
    v, e, fc = len(verts), len(side_faces), len(faces)
    euler = v - e + fc
    if not (closed and conn and euler == 2):
        raise NotASphere(
            f"band {band}: V={v} E={e} F={fc} euler={euler} closed={closed} connected={conn}"
        )
    return v, e, fc, euler, closed, conn


def split_links(link: TorusLink, banding: Banding | None = None) -> SplitLinksResult:
    """Cut the flat torus into three cylinders and verify the three sphere links."""
    f = link.field
    q = f.q
    w = meridian_direction(f)
    pi = f.pi
    if banding is None:
        banding = band_partition(f)
    elif banding.q != q:
        raise BadSizes(f"banding is for q={banding.q}, link has q={q}")
    cuts = banding.cuts
    period = banding.period

    def tau_mod(t: Fraction) -> Fraction:
        return (t + Fraction(1, 2)) % period - Fraction(1, 2)

    def band_of_tau(t: Fraction) -> int:
        u = tau_mod(t)
        if u < cuts[1]:
            return 0
        if u < cuts[2]:
            return 1
        return 2

    def circle_of_tau(t: Fraction):
        u = tau_mod(t)
        for j, c in enumerate(cuts):
            if u == c:
                return j
        return None

    band_faces: dict[int, list[tuple]] = {0: [], 1: [], 2: []}
    boundary: dict[tuple[int, int], list[tuple]] = defaultdict(list)
    areas_ok = True
    total_pieces = 0
    for z in f.elements():
        pieces = _pieces_of_square(f, w, cuts, period, z)
        total_pieces += len(pieces)
        if sum(_polygon_area2(p) for p in pieces) != 2:
            areas_ok = False
        for piece in pieces:
            taus = [_tau(w, p) for p in piece]
            mid = (min(taus) + max(taus)) / 2
            band = band_of_tau(mid)
            keyed = tuple(("pt",) + _canon_point(pi, p) for p in piece)
            band_faces[band].append(keyed)
            n = len(piece)
            for i in range(n):
                j1 = circle_of_tau(taus[i])
                j2 = circle_of_tau(taus[(i + 1) % n])
                if j1 is not None and j1 == j2:
                    boundary[(band, j1)].append((keyed[i], keyed[(i + 1) % n]))
    if not areas_ok:
        raise CountMismatch("clipped pieces do not tile their squares")

    circle_segments: dict[int, int] = {}
    complexes = []
    for i, name in enumerate(BAND_NAMES):
        low_j, high_j = i, (i + 1) % 3
        apex_low = BAND_NAMES[(i - 1) % 3]
        apex_high = BAND_NAMES[(i + 1) % 3]
        faces = list(band_faces[i])
        lengths = []
        for j, apex_name in ((low_j, apex_low), (high_j, apex_high)):
            sides = boundary[(i, j)]
            length = _boundary_cycle(sides)
            lengths.append(length)
            seg = circle_segments.setdefault(j, length)
            if seg != length:
                raise NotACircle(f"circle {j} has inconsistent lengths {seg} != {length}")
            apex = ("apex", apex_name)
            for u, v in sides:
                faces.append((apex, u, v))
        v_, e_, fc, euler, closed, conn = _verify_sphere(name, faces)
        complexes.append(
            SplitLinkComplex(
                band=name,
                apexes=(apex_low, apex_high),
                n_vertices=v_,
                n_edges=e_,
                n_faces=fc,
                n_pieces=len(band_faces[i]),
                euler=euler,
                closed=closed,
                connected=conn,
                boundary_lengths=tuple(lengths),
            )
        )
    return SplitLinksResult(
        banding=banding,
        complexes=tuple(complexes),
        total_pieces=total_pieces,
        circle_segments=circle_segments,
        areas_ok=areas_ok,
    )


@dataclass
class ManifoldSummary:
    q: int
    n_vertices: int
    n_blocks: int
    log3_triangulation_choices: int
    ratio_n32_blocks: float
    band_sizes: tuple[int, int, int]


def manifold_summary(cell, banding: Banding | None = None) -> ManifoldSummary:
    """Counts after the three-way vertex split: n = 3(q^2-1)/4 vertices."""
    q = cell.q
    if banding is None:
        banding = band_partition(cell.field)
    n = 3 * (q * q - 1) // 4
    b = len(cell.blocks)
    return ManifoldSummary(
        q=q,
        n_vertices=n,
        n_blocks=b,
        log3_triangulation_choices=b,
        ratio_n32_blocks=n**1.5 / b,
        band_sizes=banding.sizes,
    )
