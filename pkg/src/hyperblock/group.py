"""PSL2 over a finite field: canonical matrices and the cusp action.

A group element is stored as the canonical representative of {M, -M}: the
entry tuple (a, b, c, d) that is lexicographically smaller under the field's
canonical order. A cusp is a nonzero column vector of F_q^2 modulo the unit
group {1, -1, s, -s} (3D mode) or {1, -1} (2D mode), stored as the
lexicographically least vector of its orbit.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Iterator

from .arith import GaussianInt, gauss_gcd, divide_exact
from .errors import CapExceeded, CountMismatch, ModeMismatch, ZeroVector

MODE_3D = "3d"
MODE_2D = "2d"

# |PSL2| <= this by default; q=127 still fits.
DEFAULT_MAX_GROUP_ORDER = 2_000_000


@dataclass(frozen=True, order=True)
class Cusp:
    u: int
    w: int
    mode: str = MODE_3D


@dataclass(frozen=True, order=True)
class ProjMatrix:
    a: int
    b: int
    c: int
    d: int
    field: object = dc_field(compare=False, repr=False, hash=False)

    @property
    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)


def proj_matrix(field, a: int, b: int, c: int, d: int) -> ProjMatrix:
    """Canonical +-representative of a determinant-1 matrix."""
    det = field.sub(field.mul(a, d), field.mul(b, c))
    if det != field.one:
        raise ValueError(f"determinant is not 1: {(a, b, c, d)}")
    neg = (field.neg(a), field.neg(b), field.neg(c), field.neg(d))
    ent = min((a, b, c, d), neg)
    return ProjMatrix(*ent, field=field)


def from_int_matrix(field, rows) -> ProjMatrix:
    """Reduce a 2x2 matrix with int or GaussianInt entries into the field."""
    ent = []
    for row in rows:
        for v in row:
            if isinstance(v, GaussianInt):
                ent.append(field.reduce(v))
            else:
                ent.append(field.from_int(v))
    return proj_matrix(field, *ent)


def identity(field) -> ProjMatrix:
    return proj_matrix(field, field.one, 0, 0, field.one)


def compose(g: ProjMatrix, h: ProjMatrix) -> ProjMatrix:
    f = g.field
    return proj_matrix(
        f,
        f.add(f.mul(g.a, h.a), f.mul(g.b, h.c)),
        f.add(f.mul(g.a, h.b), f.mul(g.b, h.d)),
        f.add(f.mul(g.c, h.a), f.mul(g.d, h.c)),
        f.add(f.mul(g.c, h.b), f.mul(g.d, h.d)),
    )


def invert(g: ProjMatrix) -> ProjMatrix:
    f = g.field
    return proj_matrix(f, g.d, f.neg(g.b), f.neg(g.c), g.a)


def _units(field, mode: str) -> tuple[int, ...]:
    if mode == MODE_3D:
        s = getattr(field, "s", None)
        if s is None:
            raise ModeMismatch("3D cusps need a field with a designated sqrt(-1)")
        return (field.one, field.neg(field.one), s, field.neg(s))
    if mode == MODE_2D:
        return (field.one, field.neg(field.one))
    raise ModeMismatch(f"unknown mode {mode!r}")


def canon_cusp(field, u: int, w: int, mode: str = MODE_3D) -> Cusp:
    """Least vector among the unit multiples of (u, w)."""
    if u == 0 and w == 0:
        raise ZeroVector("cusp representative is the zero vector")
    best = min((field.mul(m, u), field.mul(m, w)) for m in _units(field, mode))
    return Cusp(best[0], best[1], mode)


def act_cusp(g: ProjMatrix, x: Cusp) -> Cusp:
    """Matrix-vector action on a column cusp, re-canonicalized."""
    f = g.field
    u = f.add(f.mul(g.a, x.u), f.mul(g.b, x.w))
    w = f.add(f.mul(g.c, x.u), f.mul(g.d, x.w))
    return canon_cusp(f, u, w, x.mode)


def all_cusps(field, mode: str = MODE_3D) -> tuple[Cusp, ...]:
    """All distinct cusps, canonically sorted."""
    seen = set()
    for u in field.elements():
        for w in field.elements():
            if u == 0 and w == 0:
                continue
            seen.add(canon_cusp(field, u, w, mode))
    return tuple(sorted(seen))


def cusp_from_rational(field, num: GaussianInt, den: GaussianInt) -> Cusp:
    """Cusp of the ideal point num/den: lowest terms, then reduced mod I."""
    g = gauss_gcd(num, den)
    u = field.reduce(divide_exact(num, g))
    w = field.reduce(divide_exact(den, g))
    return canon_cusp(field, u, w, MODE_3D)


class GroupTable:
    """All elements of PSL2(F_q), canonically sorted, with index lookup."""

    def __init__(self, field, elements: tuple[ProjMatrix, ...]):
        self.field = field
        self.elements = elements
        self._index = {g.entries: i for i, g in enumerate(elements)}

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[ProjMatrix]:
        return iter(self.elements)

    def __getitem__(self, i: int) -> ProjMatrix:
        return self.elements[i]

    def __contains__(self, g: ProjMatrix) -> bool:
        return g.entries in self._index

    def index_of(self, g: ProjMatrix) -> int:
        return self._index[g.entries]

    @property
    def identity(self) -> ProjMatrix:
        return identity(self.field)


def group_order(q: int) -> int:
    return q * (q * q - 1) // 2


def enumerate_group(field, max_order: int = DEFAULT_MAX_GROUP_ORDER) -> GroupTable:
    """Direct parameterization of PSL2(F_q).

    c != 0: a, d free and b = (ad - 1)/c; c = 0: a != 0, d = a^(-1), b free.
    Each SL2 element appears once, so each PSL2 element appears as M and -M;
    dedup by canonical form and sort.
    """
    expected = group_order(field.q)
    if expected > max_order:
        raise CapExceeded(f"|PSL2({field.q})| = {expected} exceeds cap {max_order}")
    f = field
    one = f.one
    elems: set[tuple[int, int, int, int]] = set()
    nonzero = [e for e in f.elements() if e != 0]
    for c in nonzero:
        cinv = f.inv(c)
        for a in f.elements():
            for d in f.elements():
                b = f.mul(f.sub(f.mul(a, d), one), cinv)
                neg = (f.neg(a), f.neg(b), f.neg(c), f.neg(d))
                elems.add(min((a, b, c, d), neg))
    for a in nonzero:
        d = f.inv(a)
        for b in f.elements():
            neg = (f.neg(a), f.neg(b), 0, f.neg(d))
            elems.add(min((a, b, 0, d), neg))
    if len(elems) != expected:
        raise CountMismatch(
            f"enumeration produced {len(elems)} elements, expected {expected}"
        )
    table = tuple(ProjMatrix(*e, field=f) for e in sorted(elems))
    return GroupTable(f, table)


def cusp_stabilizer(table: GroupTable, x: Cusp) -> tuple[ProjMatrix, ...]:
    """All group elements fixing the cusp x (filter of the full table)."""
    return tuple(g for g in table if act_cusp(g, x) == x)


def base_cusp(field, mode: str = MODE_3D) -> Cusp:
    """The cusp of the projective point (1 : 0), i.e. infinity."""
    return canon_cusp(field, field.one, 0, mode)


def transversal_map(table: GroupTable, x0: Cusp) -> dict[Cusp, ProjMatrix]:
    """For each cusp x, some t with t*x = x0; deterministic in table order."""
    t: dict[Cusp, ProjMatrix] = {}
    for g in table:
        x = act_cusp(invert(g), x0)
        if x not in t:
            t[x] = g
    return t
