"""Hot numerical kernels with a compiled core and a pure-NumPy fallback.

The three O(N^2) kernels that dominate runtime live here:

* the Gagliardo double sum over node pairs,
* per-level Poisson convolution by direct quadrature,
* the bucketed ball averages of the discrete maximal operator.

A Cython extension (``tracelab._speedups``) provides the fast path; the
NumPy implementations below are the reference fallback, selected at import
when the extension is missing or ``TRACELAB_PURE_PYTHON=1``.  Both paths
share the same deterministic reduction contract: per-row-tile partial sums
in fixed tile order, combined by ``pairwise_tree_sum``, so results do not
depend on thread count.
"""

from __future__ import annotations

import os

import numpy as np
from scipy.signal import convolve2d as _convolve2d

__all__ = [
    "backend_name",
    "pairwise_tree_sum",
    "seminorm_row_partials",
    "convolve_same",
    "maximal_means",
]

try:  # pragma: no cover - exercised via the compiled build
    if os.environ.get("TRACELAB_PURE_PYTHON") == "1":
        _speedups = None
    else:
        from tracelab import _speedups
except ImportError:
    _speedups = None


def backend_name() -> str:
    return "compiled" if _speedups is not None else "python"


def thread_count() -> int:
    env = os.environ.get("TRACELAB_THREADS")
    if env:
        return max(1, int(env))
    return min(8, os.cpu_count() or 1)


def pairwise_tree_sum(parts: np.ndarray) -> float:
    """Sum an array by a fixed balanced pairwise tree.

    The combination order depends only on len(parts), never on how the
    partials were produced, so serial and parallel runs agree.
    """
    parts = np.asarray(parts, dtype=float).copy()
    n = parts.size
    if n == 0:
        return 0.0
    while n > 1:
        half = n // 2
        parts[:half] = parts[:half] + parts[half : 2 * half]
        if n % 2:
            parts[half] = parts[2 * half]
            n = half + 1
        else:
            n = half
    return float(parts[0])


# -- Gagliardo double sum ----------------------------------------------------


def _seminorm_row_partials_np(values, coords, weights, kexp, p, tile):
    n = values.size
    ntiles = (n + tile - 1) // tile
    partials = np.empty(ntiles)
    for t in range(ntiles):
        lo, hi = t * tile, min((t + 1) * tile, n)
        diff = np.abs(values[lo:hi, None] - values[None, :]) ** p
        dist = np.linalg.norm(coords[lo:hi, None, :] - coords[None, :, :], axis=2)
        with np.errstate(divide="ignore", invalid="ignore"):
            contrib = diff / dist**kexp
        rows = np.arange(lo, hi)
        contrib[rows - lo, rows] = 0.0  # exact diagonal omission
        contrib *= weights[None, :]
        contrib *= weights[lo:hi, None]
        partials[t] = float(np.sum(contrib))
    return partials


def seminorm_row_partials(
    values: np.ndarray,
    coords: np.ndarray,
    weights: np.ndarray,
    kexp: float,
    p: float,
    tile: int = 256,
) -> np.ndarray:
    """Per-row-tile partials of sum_{i != j} |f_i-f_j|^p / |x_i-x_j|^kexp w_i w_j.

    Tile t covers rows [t*tile, (t+1)*tile); combine with pairwise_tree_sum.
    """
    values = np.ascontiguousarray(values, dtype=float)
    coords = np.ascontiguousarray(coords, dtype=float)
    weights = np.ascontiguousarray(weights, dtype=float)
    if _speedups is not None:
        return np.asarray(
            _speedups.seminorm_row_partials(
                values, coords, weights, float(kexp), float(p), int(tile), thread_count()
            )
        )
    return _seminorm_row_partials_np(values, coords, weights, kexp, p, tile)


# -- Poisson convolution (direct quadrature, not FFT) -------------------------


def _convolve_same_np(fw, kern):
    if fw.ndim == 1:
        m = fw.size
        full = np.convolve(fw, kern, mode="full")
        return full[m - 1 : 2 * m - 1]
    m0, m1 = fw.shape
    full = _convolve2d(fw, kern, mode="full")
    return full[m0 - 1 : 2 * m0 - 1, m1 - 1 : 2 * m1 - 1]


def convolve_same(fw: np.ndarray, kern: np.ndarray) -> np.ndarray:
    """Direct-quadrature convolution of weighted data with a centered kernel.

    ``kern`` is sampled on the (2m-1) difference offsets per axis and is
    even per axis, so convolution equals the correlation sum
    v(x_i) = sum_j K(x_i - y_j) f(y_j) w_j.
    """
    fw = np.ascontiguousarray(fw, dtype=float)
    kern = np.ascontiguousarray(kern, dtype=float)
    if kern.ndim != fw.ndim or any(k != 2 * s - 1 for k, s in zip(kern.shape, fw.shape)):
        raise ValueError("kernel must be sampled on the (2m-1) difference grid")
    if _speedups is not None:
        if fw.ndim == 1:
            return np.asarray(_speedups.convolve_same_1d(fw, kern, thread_count()))
        return np.asarray(_speedups.convolve_same_2d(fw, kern, thread_count()))
    return _convolve_same_np(fw, kern)


# -- Maximal ball averages -----------------------------------------------------


MEMBERSHIP_GUARD = 1.0 + 1e-9


def _maximal_means_np(absf, coords, radii, block=512):
    n = absf.size
    nr = radii.size
    out = np.empty(n)
    for lo in range(0, n, block):
        hi = min(lo + block, n)
        d = np.linalg.norm(coords[lo:hi, None, :] - coords[None, :, :], axis=2)
        # bucket k = first radius index with d < radii[k]; the relative guard
        # keeps nodes at distance exactly r out despite fp noise in d
        d = d * MEMBERSHIP_GUARD
        idx = np.searchsorted(radii, d, side="right")  # d < radii[k] iff idx <= k
        best = np.full(hi - lo, -np.inf)
        for c in range(hi - lo):
            sums = np.bincount(idx[c], weights=absf, minlength=nr + 1)[:nr]
            counts = np.bincount(idx[c], minlength=nr + 1)[:nr]
            csum = np.cumsum(sums)
            ccnt = np.cumsum(counts)
            ok = ccnt > 0
            means = csum[ok] / ccnt[ok]
            best[c] = means.max()
        out[lo:hi] = best
    return out


def maximal_means(absf: np.ndarray, coords: np.ndarray, radii: np.ndarray) -> np.ndarray:
    """max over ladder radii of the mean of absf over {|x_j - x_i| < r}.

    Strict ball membership: the smallest admissible radius h captures only
    the center node, which keeps Mf >= |f| exact.
    """
    absf = np.ascontiguousarray(absf, dtype=float)
    coords = np.ascontiguousarray(coords, dtype=float)
    radii = np.ascontiguousarray(radii, dtype=float)
    if _speedups is not None:
        return np.asarray(_speedups.maximal_means(absf, coords, radii, thread_count()))
    return _maximal_means_np(absf, coords, radii)
