"""Kernel backend dispatch.

The hot verification loops (scheme intersection numbers, strong-regularity
scan, Jacobi eigensolver) have a numba @njit backend and a pure-numpy
fallback. Selection order: explicit argument, then the HYPERBLOCK_KERNELS
env var ("numba", "numpy", or "auto"), then auto (numba when importable).
"""

from __future__ import annotations

import os

from . import numpy_impl

_numba_impl = None
_numba_checked = False
_numba_ok = False


def numba_available() -> bool:
    global _numba_checked, _numba_ok
    if not _numba_checked:
        try:
            import numba  # noqa: F401

            _numba_ok = True
        except ImportError:
            _numba_ok = False
        _numba_checked = True
    return _numba_ok


def _numba():
    global _numba_impl
    if _numba_impl is None:
        from . import numba_impl

        _numba_impl = numba_impl
    return _numba_impl


def backend_name(explicit: str | None = None) -> str:
    name = explicit or os.environ.get("HYPERBLOCK_KERNELS", "auto")
    if name == "auto":
        return "numba" if numba_available() else "numpy"
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown kernel backend {name!r}")
    if name == "numba" and not numba_available():
        raise RuntimeError("numba backend requested but numba is not importable")
    return name


def _impl(backend: str | None):
    return _numba() if backend_name(backend) == "numba" else numpy_impl


def apply_thread_cap() -> int | None:
    """Honor HYPERBLOCK_THREADS as a cap on numba's thread pool."""
    raw = os.environ.get("HYPERBLOCK_THREADS")
    if not raw:
        return None
    cap = max(1, int(raw))
    if numba_available():
        import numba

        numba.set_num_threads(min(cap, numba.config.NUMBA_NUM_THREADS))
    return cap


def scheme_intersection_tables(C, n_classes: int, backend: str | None = None):
    return _impl(backend).scheme_intersection_tables(C, n_classes)


def strong_regularity_scan(
    masks, vc_ptr, vc_ids, sorted_masks, sorted_ids, face_codes, backend: str | None = None
):
    return _impl(backend).strong_regularity_scan(
        masks, vc_ptr, vc_ids, sorted_masks, sorted_ids, face_codes
    )


def jacobi_eigh(A, tol: float = 1e-10, max_sweeps: int = 100, backend: str | None = None):
    return _impl(backend).jacobi_eigh(A, tol=tol, max_sweeps=max_sweeps)
