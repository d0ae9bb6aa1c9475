"""Pure-numpy backends for the hot verification kernels.

These are the reference implementations; the numba backend must agree with
them exactly (integer results) or to roundoff (Jacobi).
"""

from __future__ import annotations

import numpy as np


def scheme_intersection_tables(C: np.ndarray, n_classes: int):
    """Exhaustively verify constancy of the triple-intersection counts.

    For every ordered pair (x, y) in class k, the count of z with
    (x, z) in class i and (z, y) in class j must depend on (i, j, k) only.
    Returns (ok, p_table, witness_x, witness_y).
    """
    v = C.shape[0]
    n = n_classes
    B = np.empty((n, v, v), dtype=np.float64)
    for i in range(n):
        B[i] = C == i
    p = np.zeros((n, n, n), dtype=np.int64)
    masks = [C == k for k in range(n)]
    for i in range(n):
        for j in range(n):
            P = np.rint(B[i] @ B[j]).astype(np.int64)
            for k in range(n):
                vals = P[masks[k]]
                first = int(vals[0])
                if not np.all(vals == first):
                    bad = np.argwhere(masks[k] & (P != first))
                    return False, p, int(bad[0][0]), int(bad[0][1])
                p[k, i, j] = first
    return True, p, -1, -1


def _in_sorted(sorted_arr: np.ndarray, vals: np.ndarray) -> np.ndarray:
    pos = np.searchsorted(sorted_arr, vals)
    pos = np.minimum(pos, len(sorted_arr) - 1)
    return sorted_arr[pos] == vals


def strong_regularity_scan(
    masks: np.ndarray,
    vc_ptr: np.ndarray,
    vc_ids: np.ndarray,
    sorted_masks: np.ndarray,
    sorted_ids: np.ndarray,
    face_codes: np.ndarray,
):
    """Check every intersecting cell pair meets in a common face.

    Cells are vertex-set bitmasks (K uint64 limbs, limb 0 = vertices 0..63).
    Pairs are enumerated per shared vertex (pairs sharing several vertices
    are re-checked; the check is idempotent). Returns (ok, cell_a, cell_b).
    """
    n_cells, K = masks.shape
    key_dtype = f"S{8 * K}"
    skeys = np.ascontiguousarray(sorted_masks.astype(">u8")).view(key_dtype).ravel()
    nv = len(vc_ptr) - 1
    for v in range(nv):
        ids = vc_ids[vc_ptr[v] : vc_ptr[v + 1]]
        if ids.size < 2:
            continue
        M = masks[ids]
        iu, ju = np.triu_indices(ids.size, k=1)
        T = M[iu] & M[ju]
        tb = np.ascontiguousarray(T.astype(">u8")).view(key_dtype).ravel()
        pos = np.minimum(np.searchsorted(skeys, tb), len(skeys) - 1)
        found = skeys[pos] == tb
        tids = sorted_ids[pos]
        a_ids = ids[iu].astype(np.int64)
        b_ids = ids[ju].astype(np.int64)
        ok = found & _in_sorted(face_codes, a_ids * n_cells + tids)
        ok &= _in_sorted(face_codes, b_ids * n_cells + tids)
        if not ok.all():
            bad = int(np.argmin(ok))
            return False, int(a_ids[bad]), int(b_ids[bad])
    return True, -1, -1


def jacobi_eigh(A: np.ndarray, tol: float = 1e-10, max_sweeps: int = 100):
    """Cyclic-by-row Jacobi for a dense symmetric matrix.

    Sweeps until the off-diagonal Frobenius norm drops below tol. Returns
    (eigenvalues ascending, eigenvector columns in matching order).
    """
    a = np.array(A, dtype=np.float64, copy=True)
    n = a.shape[0]
    V = np.eye(n)
    for _ in range(max_sweeps):
        off = np.sqrt(2.0 * np.sum(np.triu(a, 1) ** 2))
        if off < tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = (1.0 if theta >= 0.0 else -1.0) / (
                    abs(theta) + np.sqrt(theta * theta + 1.0)
                )
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                rp = a[p, :].copy()
                rq = a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                cp = a[:, p].copy()
                cq = a[:, q].copy()
                a[:, p] = c * cp - s * cq
                a[:, q] = s * cp + c * cq
                vp = V[:, p].copy()
                vq = V[:, q].copy()
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq
    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order]
