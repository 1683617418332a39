"""Discrete Hardy-Littlewood maximal operator on the boundary grid.

Mf(x') = max over ladder radii r of the average of |f| over the discrete
ball {nodes y' : |y' - x'| < r}.  Balls are Euclidean balls intersected
with the node set under *strict* membership (with a 1e-9 relative guard
against floating-point distance noise), so the smallest radius h captures
only the center cell and Mf >= |f|, sublinearity and absolute homogeneity
all hold exactly.  Averages divide by the number-weighted cell measure
(a plain arithmetic mean), not the continuum ball volume.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from tracelab import kernels
from tracelab.grids import BoundaryGrid, BoundaryGridFunction

__all__ = ["RadiusLadder", "default_ladder", "maximal_function"]


@dataclass(frozen=True)
class RadiusLadder:
    """Finite increasing radii; the only approximation knob of M."""

    radii: np.ndarray

    def __post_init__(self):
        r = np.asarray(self.radii, dtype=float)
        if r.size == 0:
            raise ValueError("empty radius ladder")
        if np.any(r <= 0) or np.any(np.diff(r) <= 0):
            raise ValueError("radii must be positive and strictly increasing")
        object.__setattr__(self, "radii", r)

    def refined(self, factor: int = 2) -> "RadiusLadder":
        """Superset ladder with factor-times denser radii (same maximum)."""
        step = self.radii[0] / factor
        count = int(round(self.radii[-1] / step))
        return RadiusLadder(step * np.arange(1, count + 1))


def default_ladder(grid: BoundaryGrid) -> RadiusLadder:
    """All integer multiples of h up to 2L (the truncated-domain diameter
    scale); the continuum sup over r > 0 is approached from below."""
    count = int(round(2 * grid.L / grid.h))
    return RadiusLadder(grid.h * np.arange(1, count + 1))


def maximal_function(
    f: BoundaryGridFunction, ladder: RadiusLadder | None = None
) -> BoundaryGridFunction:
    """Discrete maximal function Mf on the same grid."""
    if ladder is None:
        ladder = default_ladder(f.grid)
    absf = np.abs(f.values.ravel())
    coords = f.grid.coords()
    out = kernels.maximal_means(absf, coords, ladder.radii)
    return BoundaryGridFunction(f.grid, out.reshape(f.grid.shape))
