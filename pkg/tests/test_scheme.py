import math
import random
from types import SimpleNamespace

import numpy as np
import pytest

from hyperblock.errors import CapExceeded, NotApplicable, NotAPBIBD, NotConnected, SchemeViolation
from hyperblock.group import act_cusp
from hyperblock.scheme import (
    AssociationScheme,
    edge_adjacency,
    pbibd_report,
    spectral_gap,
    verify_scheme_axioms,
)


def test_diagonal_class_is_zero(scheme):
    s = scheme(13)
    assert np.all(np.diag(s.class_matrix) == 0)
    assert s.valencies[0] == 1


def test_classes_partition(scheme):
    s = scheme(13)
    v = len(s.cusps)
    sizes = [int(np.sum(s.class_matrix == k)) for k in range(s.n_classes)]
    assert all(sz > 0 for sz in sizes)
    assert sum(sizes) == v * v
    assert sum(s.valencies) == v


def test_orbital_invariance(scheme, cell):
    s = scheme(13)
    c = cell(13)
    idx = {cu: i for i, cu in enumerate(s.cusps)}
    rng = random.Random(6)
    for _ in range(200):
        g = rng.choice(c.table.elements)
        x, y = rng.choice(s.cusps), rng.choice(s.cusps)
        gx, gy = act_cusp(g, x), act_cusp(g, y)
        assert s.class_matrix[idx[x], idx[y]] == s.class_matrix[idx[gx], idx[gy]]


def test_transpose_closure(scheme):
    s = scheme(13)
    t = s.transpose_of
    assert sorted(t) == list(range(s.n_classes))
    for k in range(s.n_classes):
        assert t[t[k]] == k
    assert t[0] == 0


@pytest.mark.parametrize("q", [9, 13, 17])
def test_scheme_axioms_exhaustive(q, scheme):
    rep = verify_scheme_axioms(scheme(q), mode="exhaustive")
    assert rep.passed and rep.mode == "exhaustive"
    assert rep.n_pairs_checked == len(scheme(q).cusps) ** 2


def test_p0_transpose_structure(scheme):
    # around a diagonal pair, paths of type (i, j) exist iff j transposes i
    s = scheme(13)
    rep = verify_scheme_axioms(s, mode="exhaustive")
    for i in range(s.n_classes):
        for j in range(s.n_classes):
            expected = s.valencies[i] if j == s.transpose_of[i] else 0
            assert rep.p_table[0, i, j] == expected


def test_backend_agreement(scheme):
    s = scheme(9)
    a = verify_scheme_axioms(s, backend="numpy")
    b = verify_scheme_axioms(s, backend="numba")
    assert np.array_equal(a.p_table, b.p_table)


def test_sampled_mode_matches_exhaustive(scheme):
    s = scheme(13)
    full = verify_scheme_axioms(s, mode="exhaustive")
    samp = verify_scheme_axioms(s, mode="sampled", samples=8)
    assert samp.passed and samp.mode == "sampled"
    assert np.array_equal(samp.p_table, full.p_table)


def test_exhaustive_cap():
    fake = SimpleNamespace(
        class_matrix=np.zeros((300, 300), dtype=np.int32),
        n_classes=1,
        valencies=(300,),
        cusps=tuple(range(300)),
    )
    with pytest.raises(CapExceeded):
        verify_scheme_axioms(fake, mode="exhaustive")


def test_scheme_violation_on_corruption(scheme):
    s = scheme(9)
    C = s.class_matrix.copy()
    x, y = 1, 2
    C[x, y] = (C[x, y] + 1) % s.n_classes or 1
    broken = AssociationScheme(
        field=s.field,
        x0=s.x0,
        cusps=s.cusps,
        class_matrix=C,
        n_classes=s.n_classes,
        valencies=s.valencies,
        suborbits=s.suborbits,
        transpose_of=s.transpose_of,
    )
    with pytest.raises(SchemeViolation):
        verify_scheme_axioms(broken, mode="exhaustive")


@pytest.mark.parametrize(
    "q,v,b",
    [(9, 20, 30), (13, 42, 91), (17, 72, 204)],
)
def test_pbibd_parameters(q, v, b, cell, scheme):
    rep = pbibd_report(cell(q), scheme(q))
    assert rep.passed
    assert (rep.v, rep.b, rep.r, rep.k) == (v, b, q, 6)
    assert rep.v * rep.r == rep.b * rep.k
    assert set(rep.lambda_by_class.values()) <= {0, 1, 4}
    assert all(rep.lambda_by_class[k] == 4 for k in rep.class_of_edges)
    assert all(rep.lambda_by_class[k] == 1 for k in rep.class_of_diagonals)
    assert rep.m >= math.ceil(q / 8)


@pytest.mark.parametrize("q", [9, 13, 17, 29])
def test_m_lower_bound(q, scheme):
    assert scheme(q).m >= math.ceil(q / 8)


def test_pbibd_base_vertex_identity(cell, scheme):
    rep = pbibd_report(cell(13), scheme(13))
    assert rep.details["base_vertex_pair_sum"] == 13 * 5
    lam_dot_c = sum(
        rep.lambda_by_class[k] * scheme(13).valencies[k] for k in range(1, scheme(13).n_classes)
    )
    assert lam_dot_c == 13 * 5


def test_pbibd_not_applicable_q5(cell, scheme):
    with pytest.raises(NotApplicable):
        pbibd_report(cell(5), scheme(5))


def test_pbibd_detects_nonconstant_counts(cell, scheme):
    c = cell(9)
    counts = dict(c.pair_block_count)
    some_edge = next(iter(c.edges))
    counts[some_edge] = 3
    fake = SimpleNamespace(
        q=c.q,
        blocks=c.blocks,
        pair_block_count=counts,
        edges=c.edges,
        diagonals=c.diagonals,
    )
    with pytest.raises(NotAPBIBD):
        pbibd_report(fake, scheme(9))


def test_q49_sampled_scale(cell):
    # v = 600 exceeds the exhaustive cap, so the sampled mode carries q=49
    from hyperblock import build_scheme, cusp_link, split_links
    from hyperblock.group import base_cusp

    c = cell(49)
    s = build_scheme(c.table, c.cusps, c.transversal)
    with pytest.raises(CapExceeded):
        verify_scheme_axioms(s, mode="exhaustive")
    rep = verify_scheme_axioms(s, mode="sampled", samples=16)
    assert rep.passed and rep.mode == "sampled"
    assert s.m >= math.ceil(49 / 8)
    design = pbibd_report(c, s, rep)
    assert design.passed
    assert (design.v, design.b, design.r, design.k) == (600, 4900, 49, 6)
    # inert link machinery at scale: one representative cusp
    res = split_links(cusp_link(c, base_cusp(c.field)))
    assert res.all_spheres
    assert res.banding.sizes == (21, 14, 14)


def test_spectral_k6(cell):
    rep = spectral_gap(cell(5))
    assert abs(rep.lambda_max - 5.0) < 1e-8
    assert abs(rep.lambda_2 - (-1.0)) < 1e-8
    assert rep.agreement < 1e-6


@pytest.mark.parametrize("q", [9, 13])
def test_spectral_regular_graphs(q, cell):
    rep = spectral_gap(cell(q))
    assert abs(rep.lambda_max - q) < 1e-8
    assert abs(rep.lambda_2) < q
    assert rep.agreement < 1e-6
    assert rep.ramanujan == pytest.approx(2.0 * math.sqrt(q - 1))


@pytest.mark.parametrize("q", [5, 9, 13])
def test_spectral_against_numpy_oracle(q, cell):
    # numpy.linalg is a test-only oracle for the in-repo solvers
    rep = spectral_gap(cell(q))
    w = np.linalg.eigvalsh(edge_adjacency(cell(q)))
    assert rep.lambda_max == pytest.approx(w[-1], abs=1e-8)
    assert rep.lambda_2 == pytest.approx(w[-2], abs=1e-8)


def test_spectral_not_connected():
    # two disjoint triangles: top eigenvalue 2 has multiplicity 2
    fake = SimpleNamespace(
        q=2,
        cusps=tuple(range(6)),
        edges=frozenset({(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)}),
    )
    with pytest.raises(NotConnected):
        spectral_gap(fake)
