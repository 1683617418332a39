"""Poisson kernel and extension on the truncated half-space.

K_P(x', x_n) = c_n x_n / (x_n^2 + |x'|^2)^{n/2} with c_n = Gamma(n/2)/pi^{n/2},
normalized so each horizontal slice integrates to 1.  The extension is a
per-level discrete convolution by direct quadrature (O(N^2) per level, no
FFT); kernel contributions beyond the difference grid (|x' - y'| > 2L) are
dropped, so test data must decay inside the box.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from tracelab import kernels
from tracelab.grids import BoundaryGrid, BoundaryGridFunction, HalfSpaceField
from tracelab.maximal import RadiusLadder, default_ladder, maximal_function
from tracelab.norms import lp_norm

__all__ = [
    "PoissonKernelParams",
    "poisson_kernel",
    "poisson_extend",
    "kernel_slice_mass",
    "check_maximal_domination",
    "MaximalDominationReport",
    "divergence_experiment",
    "DivergenceTable",
]


@dataclass(frozen=True)
class PoissonKernelParams:
    """Dimension and the analytic normalization constant c_n."""

    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("need n >= 2")

    @property
    def c_n(self) -> float:
        return math.gamma(self.n / 2.0) / math.pi ** (self.n / 2.0)


def poisson_kernel(x_prime, x_n: float, params: PoissonKernelParams):
    """K_P at offsets x' (array of shape (..., n-1) or scalar for n=2)."""
    if x_n <= 0:
        raise ValueError(f"Poisson kernel needs x_n > 0, got {x_n}")
    x_prime = np.asarray(x_prime, dtype=float)
    if x_prime.ndim and x_prime.shape[-1] == params.n - 1 and x_prime.ndim > 1:
        sq = np.sum(x_prime**2, axis=-1)
    else:
        sq = x_prime**2 if params.n == 2 else np.sum(x_prime**2, axis=-1)
    return params.c_n * x_n / (x_n**2 + sq) ** (params.n / 2.0)


def _kernel_on_difference_grid(grid: BoundaryGrid, x_n: float) -> np.ndarray:
    m = grid.points_per_axis
    offs = grid.h * np.arange(-(m - 1), m)
    params = PoissonKernelParams(grid.n)
    if grid.dim == 1:
        return poisson_kernel(offs, x_n, params)
    sq = offs[:, None] ** 2 + offs[None, :] ** 2
    return params.c_n * x_n / (x_n**2 + sq) ** (grid.n / 2.0)


def kernel_slice_mass(grid: BoundaryGrid, x_n: float) -> float:
    """Quadrature mass of one kernel slice over the difference grid.

    Approaches 1 once x_n resolves the grid (x_n >~ 2h) and the tail
    deficit ~ x_n/(2L) is small; the normalization invariant is checked
    against this quantity.
    """
    kern = _kernel_on_difference_grid(grid, x_n)
    return float(kern.sum() * grid.h**grid.dim)


def poisson_extend(f: BoundaryGridFunction, levels: np.ndarray) -> HalfSpaceField:
    """Per-level convolution v(., x_n) = (K_P(., x_n) * f) by trapezoid quadrature."""
    levels = np.asarray(levels, dtype=float)
    if np.any(levels <= 0):
        raise ValueError("Poisson extension needs strictly positive levels")
    grid = f.grid
    fw = f.values * grid.trapezoid_weights()
    out = np.empty((levels.size,) + grid.shape)
    for k, t in enumerate(levels):
        kern = _kernel_on_difference_grid(grid, t)
        out[k] = kernels.convolve_same(fw, kern)
    return HalfSpaceField(grid, levels, out)


@dataclass(frozen=True)
class MaximalDominationReport:
    """Outcome of the pointwise check |v| <= Mf + tol on the grid."""

    max_gap: float
    argmax_level: float
    argmax_node: tuple
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_gap <= self.tol


def check_maximal_domination(
    v: HalfSpaceField,
    f: BoundaryGridFunction,
    ladder: RadiusLadder | None = None,
    tol: float = 1e-2,
) -> MaximalDominationReport:
    """Verify the maximal estimate |v(x', x_n)| <= Mf(x') at every sample.

    Reports the largest signed gap max(|v| - Mf); the only error source is
    the ladder-discretized maximal operator, so the gap shrinks when the
    ladder is refined.
    """
    mf = maximal_function(f, ladder).values
    gaps = np.abs(v.values) - mf[None, ...]
    flat = int(np.argmax(gaps))
    idx = np.unravel_index(flat, gaps.shape)
    return MaximalDominationReport(
        max_gap=float(gaps[idx]),
        argmax_level=float(v.levels[idx[0]]),
        argmax_node=tuple(int(i) for i in idx[1:]),
        tol=tol,
    )


# -- Remark-2.4 divergence experiment -----------------------------------------


def power_decay_data(grid: BoundaryGrid, alpha: float) -> BoundaryGridFunction:
    """f(x') = (1 + |x'|)^{-alpha}, the fat-tailed family of the experiment."""
    coords = grid.coords()
    rr = np.linalg.norm(coords, axis=1).reshape(grid.shape)
    return BoundaryGridFunction(grid, (1.0 + rr) ** (-alpha))


@dataclass(frozen=True)
class DivergenceTable:
    """Strip norms over x_n in (x_lo, H] per H, plus a log-log slope fit."""

    heights: np.ndarray
    strip_norms: np.ndarray
    fitted_exponent: float
    x_lo: float

    @property
    def growth_ratio(self) -> float:
        return float(self.strip_norms[-1] / self.strip_norms[0])

    def rows(self):
        for H, s in zip(self.heights, self.strip_norms):
            yield float(H), float(s), self.fitted_exponent


def strip_levels(x_lo: float, x_hi: float, per_octave: int = 12) -> np.ndarray:
    """Geometric levels on (x_lo, x_hi] with fixed resolution per octave."""
    n_oct = math.log2(x_hi / x_lo)
    count = max(2, int(round(n_oct * per_octave)))
    return x_lo * (x_hi / x_lo) ** (np.arange(count + 1) / count)


def divergence_experiment(
    f: BoundaryGridFunction,
    p: float,
    heights,
    alpha: float | None = None,
    per_octave: int = 12,
) -> DivergenceTable:
    """Strip norms ||v||_{L^p(grid x (x_lo, H])} for increasing H.

    For the Remark's data f = (1+|x'|)^{-alpha} the window
    (n-1)/p < alpha <= n/p is enforced and the norms grow without bound
    (the strip starts at x_lo = 2^{1/(n-1)}, the Remark's own region);
    compactly supported control data yields bounded norms instead.
    """
    n = f.grid.n
    if alpha is not None and not (n - 1) / p < alpha <= n / p:
        raise ValueError(
            f"alpha = {alpha} outside the divergence window "
            f"(({n - 1}/{p}, {n}/{p}] = ({(n - 1) / p}, {n / p}])"
        )
    heights = np.asarray(sorted(float(H) for H in heights))
    x_lo = 2.0 ** (1.0 / (n - 1))
    if heights[0] <= x_lo:
        raise ValueError(f"strip heights must exceed x_lo = {x_lo}")
    levels = strip_levels(x_lo, heights[-1], per_octave)
    levels = np.unique(np.concatenate([levels, heights]))
    v = poisson_extend(f, levels)
    norms = []
    for H in heights:
        keep = levels <= H * (1 + 1e-12)
        sub = HalfSpaceField(f.grid, levels[keep], v.values[keep])
        norms.append(lp_norm(sub, p))
    norms = np.asarray(norms)
    slope = float(np.polyfit(np.log(heights), np.log(norms), 1)[0])
    return DivergenceTable(heights, norms, slope, x_lo)
