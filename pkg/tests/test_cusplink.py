from fractions import Fraction

import pytest

from hyperblock.cusplink import (
    band_partition,
    cusp_link,
    level_of,
    manifold_summary,
    meridian_direction,
    split_links,
    vertices_per_line,
)
from hyperblock.errors import BadSizes
from hyperblock.group import base_cusp


@pytest.mark.parametrize("q", [5, 9, 13])
def test_torus_invariants_all_cusps(q, cell):
    c = cell(q)
    for x in c.cusps:
        link = cusp_link(c, x)
        assert link.n_vertices == q
        assert link.n_sides == 2 * q
        assert link.n_squares == q
        assert link.euler == 0
        assert link.connected
        assert sorted(link.level.values()) == list(range(q))
        for corners in link.squares:
            assert len(set(corners)) == 4


def test_square_incidence_matches_block_replication(cell):
    # the 4 squares at a link vertex are the 4 blocks around the edge
    c = cell(13)
    x = base_cusp(c.field)
    link = cusp_link(c, x)
    xi = c.cusp_index[x]
    incident = {lab: 0 for lab in link.labels}
    for corners in link.squares:
        for lab in corners:
            incident[lab] += 1
    for lab, y in link.neighbor_by_label.items():
        pair = tuple(sorted((xi, c.cusp_index[y])))
        assert incident[lab] == c.pair_block_count[pair] == 4


def test_level_bijection_modes():
    from hyperblock.arith import make_field

    for q in (5, 9, 13, 17, 49):
        f = make_field(q)
        levels = {level_of(f, e) for e in f.elements()}
        assert levels == set(range(q))
        w = meridian_direction(f)
        vpl = vertices_per_line(f)
        # level // vpl is the geometric transverse unit of the lift
        for e in f.elements():
            lift = f.canonical_lift(e)
            tau = lift.y * w.x - lift.x * w.y
            assert level_of(f, e) // vpl == tau % (q // vpl)


def test_band_partition_defaults():
    from hyperblock.arith import make_field

    assert band_partition(make_field(13)).sizes == (5, 4, 4)
    assert band_partition(make_field(5)).sizes == (2, 2, 1)
    assert band_partition(make_field(9)).sizes == (3, 3, 3)
    assert band_partition(make_field(9)).unit_sizes == (1, 1, 1)


def test_band_partition_explicit():
    from hyperblock.arith import make_field

    f9 = make_field(9)
    b = band_partition(f9, (3, 3, 3))
    assert b.sizes == (3, 3, 3) and b.period == 3
    f13 = make_field(13)
    assert band_partition(f13, (6, 4, 3)).sizes == (6, 4, 3)
    with pytest.raises(BadSizes):
        band_partition(f13, (5, 4, 3))
    with pytest.raises(BadSizes):
        band_partition(f13, (13, 0, 0))
    with pytest.raises(BadSizes):
        band_partition(f9, (1, 1, 7))  # not whole transverse lines


def test_band_of_level():
    from hyperblock.arith import make_field

    b = band_partition(make_field(13), (5, 4, 4))
    assert [b.band_of_level(l) for l in (0, 4, 5, 8, 9, 12)] == [0, 0, 1, 1, 2, 2]
    assert b.cuts == (Fraction(-1, 2), Fraction(9, 2), Fraction(17, 2))


@pytest.mark.parametrize("q", [9, 13])
def test_split_links_all_cusps(q, cell):
    c = cell(q)
    for x in c.cusps:
        res = split_links(cusp_link(c, x))
        assert res.all_spheres
        assert res.areas_ok
        for comp in res.complexes:
            assert comp.euler == 2 and comp.closed and comp.connected
        # face accounting: pieces plus one cone triangle per boundary segment
        total_faces = sum(comp.n_faces for comp in res.complexes)
        total_cones = sum(sum(comp.boundary_lengths) for comp in res.complexes)
        assert total_faces == res.total_pieces + total_cones
        # each cut circle is coned from both sides with the same length
        assert total_cones == 2 * sum(res.circle_segments.values())


def test_split_links_nondefault_bands(cell):
    c = cell(13)
    x = base_cusp(c.field)
    link = cusp_link(c, x)
    for sizes in ((6, 4, 3), (1, 1, 11), (11, 1, 1)):
        res = split_links(link, band_partition(c.field, sizes))
        assert res.all_spheres


def test_split_links_q5(cell):
    c = cell(5)
    for x in c.cusps:
        res = split_links(cusp_link(c, x))
        assert res.all_spheres


def test_split_links_wrong_banding(cell):
    c = cell(13)
    link = cusp_link(c, base_cusp(c.field))
    with pytest.raises(BadSizes):
        split_links(link, band_partition(__import__("hyperblock").make_field(9)))


def test_circle_segment_counts_split(cell):
    # a meridian circle crosses a+b unit squares in split mode
    c = cell(13)
    res = split_links(cusp_link(c, base_cusp(c.field)))
    pi = c.field.pi
    assert set(res.circle_segments.values()) == {pi.x + pi.y}


def test_circle_segment_counts_inert(cell):
    # horizontal circles cross p squares in inert mode
    c = cell(9)
    res = split_links(cusp_link(c, base_cusp(c.field)))
    assert set(res.circle_segments.values()) == {3}


@pytest.mark.parametrize(
    "q,n,b",
    [(13, 126, 91), (17, 216, 204), (29, 630, 1015)],
)
def test_manifold_summary(q, n, b, cell):
    s = manifold_summary(cell(q))
    assert s.n_vertices == n == 3 * (q * q - 1) // 4
    assert s.n_blocks == b
    assert s.log3_triangulation_choices == b
    assert 15.0 <= s.ratio_n32_blocks <= 16.0
