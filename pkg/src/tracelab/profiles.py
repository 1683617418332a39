"""Shared smooth profiles: the cutoff eta, smoothstep ramps, mollifiers.

The constructions only constrain these profiles (plateau, support,
derivative bound); concrete choices are conventions recorded here so
alternates can be swapped in.  Defaults: quintic smoothstep ramp (max
slope 15/8) and the polynomial bump (1 - |x|^2)^3 normalized to unit
mass.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from tracelab.grids import BoundaryGrid, BoundaryGridFunction

__all__ = [
    "smoothstep",
    "smoothstep_deriv",
    "SmoothCutoff",
    "smooth_cutoff",
    "bump_profile",
    "mollify_boundary",
]


def smoothstep(s):
    """Quintic ramp S(s) = 6s^5 - 15s^4 + 10s^3 clamped to [0, 1]."""
    s = np.clip(s, 0.0, 1.0)
    return s * s * s * (s * (6.0 * s - 15.0) + 10.0)


def smoothstep_deriv(s):
    """S'(s) = 30 s^2 (1-s)^2 on [0,1], zero outside; max 15/8 at s=1/2."""
    s = np.asarray(s, dtype=float)
    inside = (s > 0) & (s < 1)
    out = np.zeros_like(s)
    si = s[inside]
    out[inside] = 30.0 * si * si * (1.0 - si) ** 2
    return out


@dataclass(frozen=True)
class SmoothCutoff:
    """Cutoff eta: 1 on [0, lo], 0 on [hi, inf), quintic ramp between.

    With the default (lo, hi) = (1, 2) the slope bound |eta'| <= 15/8 <= 2
    holds, as the truncation lifting requires.
    """

    lo: float = 1.0
    hi: float = 2.0

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return 1.0 - smoothstep((t - self.lo) / (self.hi - self.lo))

    def deriv(self, t):
        t = np.asarray(t, dtype=float)
        return -smoothstep_deriv((t - self.lo) / (self.hi - self.lo)) / (self.hi - self.lo)


def smooth_cutoff() -> SmoothCutoff:
    """The module-shared cutoff eta (plateau [0,1], support [0,2])."""
    return SmoothCutoff()


def bump_profile(rho):
    """Radial bump (1 - rho^2)^3 on [0, 1), 0 outside (not normalized)."""
    rho = np.asarray(rho, dtype=float)
    out = np.zeros_like(rho)
    inside = np.abs(rho) < 1.0
    out[inside] = (1.0 - rho[inside] ** 2) ** 3
    return out


def mollifier_weights(grid: BoundaryGrid, width: float) -> np.ndarray:
    """Discrete mollifier stencil on the difference grid, unit discrete mass.

    Renormalizing on the grid (rather than using the continuum constant)
    keeps mollification an exact convex average for any width, so constants
    are preserved and sup norms never grow.
    """
    if width <= 0:
        raise ValueError("mollifier width must be positive")
    m = grid.points_per_axis
    offs = grid.h * np.arange(-(m - 1), m)
    if grid.dim == 1:
        w = bump_profile(offs / width)
    else:
        rho = np.sqrt(offs[:, None] ** 2 + offs[None, :] ** 2) / width
        w = bump_profile(rho)
    total = w.sum()
    if total <= 0:  # width below grid resolution: identity stencil
        w = np.zeros_like(w)
        center = tuple(m - 1 for _ in range(grid.dim))
        w[center] = 1.0
        total = 1.0
    return w / total


def mollify_boundary(f: BoundaryGridFunction, width: float) -> BoundaryGridFunction:
    """Convolve with the discrete bump, renormalized per node.

    Per-node renormalization keeps the stencil a convex combination even
    where it is clipped by the domain edge.
    """
    from tracelab import kernels

    w = mollifier_weights(f.grid, width)
    num = kernels.convolve_same(f.values, w)
    den = kernels.convolve_same(np.ones_like(f.values), w)
    return BoundaryGridFunction(f.grid, num / den)
