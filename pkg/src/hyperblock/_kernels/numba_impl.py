"""Numba @njit backends for the hot verification kernels.

Same contracts as numpy_impl; compiled with cache=True so repeat runs skip
compilation.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _scheme_scan(C, n):
    v = C.shape[0]
    p = np.zeros((n, n, n), dtype=np.int64)
    filled = np.zeros(n, dtype=np.bool_)
    tmp = np.zeros((n, n), dtype=np.int64)
    for x in range(v):
        for y in range(v):
            k = C[x, y]
            for i in range(n):
                for j in range(n):
                    tmp[i, j] = 0
            for z in range(v):
                tmp[C[x, z], C[z, y]] += 1
            if not filled[k]:
                for i in range(n):
                    for j in range(n):
                        p[k, i, j] = tmp[i, j]
                filled[k] = True
            else:
                for i in range(n):
                    for j in range(n):
                        if p[k, i, j] != tmp[i, j]:
                            return False, p, x, y
    return True, p, -1, -1


def scheme_intersection_tables(C: np.ndarray, n_classes: int):
    ok, p, x, y = _scheme_scan(np.ascontiguousarray(C, dtype=np.int32), n_classes)
    return ok, p, int(x), int(y)


@njit(cache=True)
def _lookup_mask(sorted_masks, sorted_ids, t):
    n = sorted_masks.shape[0]
    K = sorted_masks.shape[1]
    lo = 0
    hi = n
    while lo < hi:
        mid = (lo + hi) >> 1
        below = False
        decided = False
        for k in range(K):
            a = sorted_masks[mid, k]
            b = t[k]
            if a < b:
                below = True
                decided = True
                break
            if a > b:
                decided = True
                break
        if decided and below:
            lo = mid + 1
        else:
            hi = mid
    if lo >= n:
        return -1
    for k in range(K):
        if sorted_masks[lo, k] != t[k]:
            return -1
    return sorted_ids[lo]


@njit(cache=True)
def _has_code(codes, c):
    pos = np.searchsorted(codes, c)
    return pos < codes.shape[0] and codes[pos] == c


@njit(cache=True)
def _sr_scan(masks, vc_ptr, vc_ids, sorted_masks, sorted_ids, face_codes, n_cells):
    K = masks.shape[1]
    nv = vc_ptr.shape[0] - 1
    t = np.zeros(K, dtype=np.uint64)
    one = np.uint64(1)
    zero = np.uint64(0)
    for v in range(nv):
        lo = vc_ptr[v]
        hi = vc_ptr[v + 1]
        kv = v >> 6
        bshift = np.uint64(v & 63)
        for ii in range(lo, hi):
            A = vc_ids[ii]
            for jj in range(ii + 1, hi):
                B = vc_ids[jj]
                for k in range(K):
                    t[k] = masks[A, k] & masks[B, k]
                # process a pair only at its least shared vertex
                lower = False
                for k in range(kv):
                    if t[k] != zero:
                        lower = True
                        break
                if not lower and bshift > zero:
                    low_mask = (one << bshift) - one
                    if t[kv] & low_mask != zero:
                        lower = True
                if lower:
                    continue
                tid = _lookup_mask(sorted_masks, sorted_ids, t)
                if tid < 0:
                    return False, A, B
                if not _has_code(face_codes, A * n_cells + tid):
                    return False, A, B
                if not _has_code(face_codes, B * n_cells + tid):
                    return False, A, B
    return True, -1, -1


def strong_regularity_scan(masks, vc_ptr, vc_ids, sorted_masks, sorted_ids, face_codes):
    ok, a, b = _sr_scan(
        np.ascontiguousarray(masks),
        np.ascontiguousarray(vc_ptr, dtype=np.int64),
        np.ascontiguousarray(vc_ids, dtype=np.int64),
        np.ascontiguousarray(sorted_masks),
        np.ascontiguousarray(sorted_ids, dtype=np.int64),
        np.ascontiguousarray(face_codes, dtype=np.int64),
        masks.shape[0],
    )
    return ok, int(a), int(b)


@njit(cache=True)
def _jacobi(A, tol, max_sweeps):
    n = A.shape[0]
    a = A.copy()
    V = np.eye(n)
    for _ in range(max_sweeps):
        off = 0.0
        for i in range(n):
            for j in range(i + 1, n):
                off += a[i, j] * a[i, j]
        if np.sqrt(2.0 * off) < tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                sign = 1.0 if theta >= 0.0 else -1.0
                t = sign / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    rp = a[p, k]
                    rq = a[q, k]
                    a[p, k] = c * rp - s * rq
                    a[q, k] = s * rp + c * rq
                for k in range(n):
                    cp = a[k, p]
                    cq = a[k, q]
                    a[k, p] = c * cp - s * cq
                    a[k, q] = s * cp + c * cq
                for k in range(n):
                    vp = V[k, p]
                    vq = V[k, q]
                    V[k, p] = c * vp - s * vq
                    V[k, q] = s * vp + c * vq
    w = np.empty(n)
    for i in range(n):
        w[i] = a[i, i]
    order = np.argsort(w, kind="mergesort")
    return w[order], V[:, order]


def jacobi_eigh(A: np.ndarray, tol: float = 1e-10, max_sweeps: int = 100):
    w, V = _jacobi(np.ascontiguousarray(A, dtype=np.float64), tol, max_sweeps)
    return w, V
