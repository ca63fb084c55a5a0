"""Hot numeric kernels: cosine mode sums and series evaluation.

Two interchangeable backends:

* ``numba``: ``@njit`` scalar loops (default when numba imports cleanly),
* ``numpy``: chunked matrix products, used as a pure-numpy fallback.

Selection is controlled by the environment variable ``COSADMIT_BACKEND``
(``"numba"`` or ``"numpy"``) read once at import time.  Both backends
produce the same values to rounding; ``benchmarks/bench_kernels.py``
compares their speed.
"""

from __future__ import annotations

import math
import os

import numpy as np

# Keep chunked cosine matrices around this many elements (~32 MB of f64).
_CHUNK_ELEMS = 4_000_000


def _numpy_cosine_mode_sums(wf, t, phase, n_modes):
    """out[k] = sum_i wf[i] * cos(k * phase * t[i]) for k in [0, n_modes)."""
    out = np.empty(n_modes)
    ks = np.arange(n_modes, dtype=np.float64) * phase
    chunk = max(16, _CHUNK_ELEMS // max(t.size, 1))
    for lo in range(0, n_modes, chunk):
        hi = min(lo + chunk, n_modes)
        out[lo:hi] = np.cos(np.outer(ks[lo:hi], t)) @ wf
    return out


def _numpy_cosine_mode_sums_parity(s_even, s_odd, t, phase, n_modes):
    """Mode sums where even k use s_even and odd k use s_odd."""
    out = np.empty(n_modes)
    ks = np.arange(n_modes)
    chunk = max(16, _CHUNK_ELEMS // max(t.size, 1))
    for lo in range(0, n_modes, chunk):
        hi = min(lo + chunk, n_modes)
        mat = np.cos(np.outer(ks[lo:hi] * phase, t))
        out[lo:hi] = np.where(ks[lo:hi] % 2 == 0, mat @ s_even, mat @ s_odd)
    return out


def _numpy_cos_series_sum(coeffs, phase, t):
    """vals[j] = coeffs[0]/2 + sum_{k>=1} coeffs[k] * cos(k * phase * t[j])."""
    n = coeffs.shape[0]
    vals = np.full(t.shape[0], 0.5 * coeffs[0])
    ks = np.arange(1, n, dtype=np.float64) * phase
    chunk = max(16, _CHUNK_ELEMS // max(t.size, 1))
    for lo in range(0, n - 1, chunk):
        hi = min(lo + chunk, n - 1)
        vals += coeffs[1 + lo:1 + hi] @ np.cos(np.outer(ks[lo:hi], t))
    return vals


def _numpy_box_complement_sum_2d(a1, a2, b1, b2):
    """sum over (k1,k2) of (a1[k1]a2[k2] - b1[k1]b2[k2])**2."""
    diff = np.outer(a1, a2) - np.outer(b1, b2)
    return float(np.sum(diff * diff))


def _numpy_box_complement_sum_3d(a1, a2, a3, b1, b2, b3):
    acc = 0.0
    pa = np.outer(a2, a3)
    pb = np.outer(b2, b3)
    for k1 in range(a1.shape[0]):
        diff = a1[k1] * pa - b1[k1] * pb
        acc += float(np.sum(diff * diff))
    return acc


_NUMPY_IMPL = {
    "cosine_mode_sums": _numpy_cosine_mode_sums,
    "cosine_mode_sums_parity": _numpy_cosine_mode_sums_parity,
    "cos_series_sum": _numpy_cos_series_sum,
    "box_complement_sum_2d": _numpy_box_complement_sum_2d,
    "box_complement_sum_3d": _numpy_box_complement_sum_3d,
}


def _build_numba_impl():
    from numba import njit

    @njit(cache=True, nogil=True)
    def cosine_mode_sums(wf, t, phase, n_modes):
        out = np.empty(n_modes)
        n = t.shape[0]
        for k in range(n_modes):
            w = k * phase
            acc = 0.0
            for i in range(n):
                acc += wf[i] * math.cos(w * t[i])
            out[k] = acc
        return out

    @njit(cache=True, nogil=True)
    def cosine_mode_sums_parity(s_even, s_odd, t, phase, n_modes):
        out = np.empty(n_modes)
        n = t.shape[0]
        for k in range(n_modes):
            w = k * phase
            acc = 0.0
            if k % 2 == 0:
                for i in range(n):
                    acc += s_even[i] * math.cos(w * t[i])
            else:
                for i in range(n):
                    acc += s_odd[i] * math.cos(w * t[i])
            out[k] = acc
        return out

    @njit(cache=True, nogil=True)
    def cos_series_sum(coeffs, phase, t):
        npts = t.shape[0]
        n = coeffs.shape[0]
        vals = np.empty(npts)
        for j in range(npts):
            theta = phase * t[j]
            acc = 0.5 * coeffs[0]
            for k in range(1, n):
                acc += coeffs[k] * math.cos(k * theta)
            vals[j] = acc
        return vals

    @njit(cache=True, nogil=True)
    def box_complement_sum_2d(a1, a2, b1, b2):
        acc = 0.0
        for k1 in range(a1.shape[0]):
            x1 = a1[k1]
            y1 = b1[k1]
            for k2 in range(a2.shape[0]):
                diff = x1 * a2[k2] - y1 * b2[k2]
                acc += diff * diff
        return acc

    @njit(cache=True, nogil=True)
    def box_complement_sum_3d(a1, a2, a3, b1, b2, b3):
        acc = 0.0
        for k1 in range(a1.shape[0]):
            x1 = a1[k1]
            y1 = b1[k1]
            for k2 in range(a2.shape[0]):
                x12 = x1 * a2[k2]
                y12 = y1 * b2[k2]
                for k3 in range(a3.shape[0]):
                    diff = x12 * a3[k3] - y12 * b3[k3]
                    acc += diff * diff
        return acc

    return {
        "cosine_mode_sums": cosine_mode_sums,
        "cosine_mode_sums_parity": cosine_mode_sums_parity,
        "cos_series_sum": cos_series_sum,
        "box_complement_sum_2d": box_complement_sum_2d,
        "box_complement_sum_3d": box_complement_sum_3d,
    }


def available_backends() -> list[str]:
    names = ["numpy"]
    try:
        import numba  # noqa: F401

        names.insert(0, "numba")
    except ImportError:
        pass
    return names


def _select_backend() -> tuple[str, dict]:
    requested = os.environ.get("COSADMIT_BACKEND", "").strip().lower()
    if requested not in ("", "numba", "numpy"):
        raise RuntimeError(
            f"COSADMIT_BACKEND={requested!r} not understood; use 'numba' or 'numpy'"
        )
    if requested == "numpy":
        return "numpy", _NUMPY_IMPL
    try:
        return "numba", _build_numba_impl()
    except ImportError:
        if requested == "numba":
            raise RuntimeError("COSADMIT_BACKEND=numba but numba is not importable")
        return "numpy", _NUMPY_IMPL


_BACKEND_NAME, _IMPL = _select_backend()

cosine_mode_sums = _IMPL["cosine_mode_sums"]
cosine_mode_sums_parity = _IMPL["cosine_mode_sums_parity"]
cos_series_sum = _IMPL["cos_series_sum"]
box_complement_sum_2d = _IMPL["box_complement_sum_2d"]
box_complement_sum_3d = _IMPL["box_complement_sum_3d"]


def active_backend() -> str:
    """Name of the kernel backend selected at import time."""
    return _BACKEND_NAME


def implementations(backend: str) -> dict:
    """Expose a specific backend's kernels (for tests and benchmarks)."""
    if backend == "numpy":
        return dict(_NUMPY_IMPL)
    if backend == "numba":
        return _build_numba_impl()
    raise ValueError(f"unknown backend {backend!r}")
