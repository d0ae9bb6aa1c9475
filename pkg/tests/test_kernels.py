import numpy as np
import pytest

from hyperblock import _kernels


def test_backend_dispatch(monkeypatch):
    monkeypatch.setenv("HYPERBLOCK_KERNELS", "numpy")
    assert _kernels.backend_name() == "numpy"
    monkeypatch.setenv("HYPERBLOCK_KERNELS", "auto")
    assert _kernels.backend_name() in ("numba", "numpy")
    monkeypatch.setenv("HYPERBLOCK_KERNELS", "bogus")
    with pytest.raises(ValueError):
        _kernels.backend_name()
    monkeypatch.delenv("HYPERBLOCK_KERNELS")
    assert _kernels.backend_name("numpy") == "numpy"


def cyclic_class_matrix(n):
    """class(x, y) = y - x mod n: the scheme of the cyclic group Z_n."""
    idx = np.arange(n)
    return ((idx[None, :] - idx[:, None]) % n).astype(np.int32)


def brute_force_p_table(C, n):
    v = C.shape[0]
    p = np.zeros((n, n, n), dtype=np.int64)
    seen = np.zeros(n, dtype=bool)
    for x in range(v):
        for y in range(v):
            k = C[x, y]
            tbl = np.zeros((n, n), dtype=np.int64)
            for z in range(v):
                tbl[C[x, z], C[z, y]] += 1
            if not seen[k]:
                p[k] = tbl
                seen[k] = True
            else:
                assert np.array_equal(p[k], tbl)
    return p


@pytest.mark.parametrize("backend", ["numpy", "numba"])
def test_scheme_tables_cyclic(backend):
    C = cyclic_class_matrix(6)
    ok, p, wx, wy = _kernels.scheme_intersection_tables(C, 6, backend=backend)
    assert ok and (wx, wy) == (-1, -1)
    assert np.array_equal(p, brute_force_p_table(C, 6))


@pytest.mark.parametrize("backend", ["numpy", "numba"])
def test_scheme_tables_detect_violation(backend):
    C = cyclic_class_matrix(6)
    C[2, 3] = 4  # breaks constancy
    ok, _, wx, wy = _kernels.scheme_intersection_tables(C, 6, backend=backend)
    assert not ok
    assert 0 <= wx < 6 and 0 <= wy < 6


def random_symmetric(n, seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(n, n))
    return (a + a.T) / 2


@pytest.mark.parametrize("backend", ["numpy", "numba"])
@pytest.mark.parametrize("n", [3, 10, 40])
def test_jacobi_against_numpy(backend, n):
    A = random_symmetric(n, seed=n)
    w, V = _kernels.jacobi_eigh(A, backend=backend)
    ref = np.linalg.eigvalsh(A)
    assert np.allclose(w, ref, atol=1e-9)
    # V diagonalizes A
    assert np.allclose(V.T @ A @ V, np.diag(w), atol=1e-8)
    assert np.allclose(V.T @ V, np.eye(n), atol=1e-10)


def test_jacobi_backends_agree():
    A = random_symmetric(25, seed=99)
    w1, _ = _kernels.jacobi_eigh(A, backend="numpy")
    w2, _ = _kernels.jacobi_eigh(A, backend="numba")
    assert np.allclose(w1, w2, atol=1e-10)


def _tetrahedron_inputs():
    """All faces of one tetrahedron: a strongly regular mini-complex."""
    from itertools import combinations

    cells = [(i,) for i in range(4)]
    cells += list(combinations(range(4), 2))
    cells += list(combinations(range(4), 3))
    cells.append((0, 1, 2, 3))
    key = {c: i for i, c in enumerate(cells)}
    faces = []
    for cv in cells:
        fl = [key[cv]]
        for r in range(1, len(cv)):
            for sub in combinations(cv, r):
                fl.append(key[sub])
        faces.append(sorted(fl))
    n = len(cells)
    masks = np.zeros((n, 1), dtype=np.uint64)
    for cid, cv in enumerate(cells):
        for a in cv:
            masks[cid, 0] |= np.uint64(1) << np.uint64(a)
    vert_cells = [[] for _ in range(4)]
    for cid, cv in enumerate(cells):
        for a in cv:
            vert_cells[a].append(cid)
    vc_ptr = np.cumsum([0] + [len(x) for x in vert_cells]).astype(np.int64)
    vc_ids = np.array([c for lst in vert_cells for c in lst], dtype=np.int64)
    order = np.argsort(masks[:, 0])
    return (
        masks,
        vc_ptr,
        vc_ids,
        np.ascontiguousarray(masks[order]),
        order.astype(np.int64),
        np.sort(np.array([cid * n + x for cid, fl in enumerate(faces) for x in fl], dtype=np.int64)),
    )


@pytest.mark.parametrize("backend", ["numpy", "numba"])
def test_strong_regularity_scan_tetrahedron(backend):
    inputs = _tetrahedron_inputs()
    ok, a, b = _kernels.strong_regularity_scan(*inputs, backend=backend)
    assert ok and (a, b) == (-1, -1)


@pytest.mark.parametrize("backend", ["numpy", "numba"])
def test_strong_regularity_scan_missing_face(backend):
    # drop the edge (0,1) from the triangle (0,1,2)'s face list: the
    # triangle and the edge cell still intersect in {0,1}, but it is no
    # longer a listed face of the triangle
    masks, vc_ptr, vc_ids, sorted_masks, sorted_ids, face_codes = _tetrahedron_inputs()
    n = masks.shape[0]
    edge01 = 4  # cells: verts 0-3, then (0,1) is the first pair
    tri012 = 10
    assert int(masks[edge01, 0]) == 0b11
    assert int(masks[tri012, 0]) == 0b111
    face_codes = face_codes[face_codes != tri012 * n + edge01]
    ok, a, b = _kernels.strong_regularity_scan(
        masks, vc_ptr, vc_ids, sorted_masks, sorted_ids, face_codes, backend=backend
    )
    assert not ok
    assert {a, b} == {edge01, tri012}


def test_apply_thread_cap(monkeypatch):
    monkeypatch.setenv("HYPERBLOCK_THREADS", "1")
    assert _kernels.apply_thread_cap() == 1
    monkeypatch.delenv("HYPERBLOCK_THREADS")
    assert _kernels.apply_thread_cap() is None
