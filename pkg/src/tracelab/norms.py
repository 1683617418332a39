"""Discrete norms and seminorms: the measurement instruments.

L^p norms use composite-trapezoid quadrature (exact for constants);
gradients are central differences, one-sided at domain faces, with the
3-point nonuniform formula in the x_n direction; the fractional
Gagliardo seminorm is the O(N^2) double sum

    [f]_{s,p}^p = sum_{i != j} |f_i - f_j|^p / |x_i - x_j|^{(n-1) + s p} w_i w_j

with trapezoid weights w and the diagonal omitted exactly (midpoint-type
quadrature of the double integral; no singularity regularization).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from tracelab import kernels
from tracelab.grids import BoundaryGrid, BoundaryGridFunction, HalfSpaceField

__all__ = [
    "SeminormParams",
    "lp_norm",
    "discrete_gradient",
    "gradient_magnitude",
    "gagliardo_seminorm",
    "intersection_norm",
]

#: Default cap on boundary nodes fed to the O(N^2) seminorm kernel.
SEMINORM_NODE_CAP = 4096


@dataclass(frozen=True)
class SeminormParams:
    """Gagliardo smoothness s in (0,1) and integrability p >= 1."""

    s: float
    p: float

    def __post_init__(self):
        if not 0 < self.s < 1:
            raise ValueError(f"need 0 < s < 1, got s={self.s}")
        if self.p < 1:
            raise ValueError(f"need p >= 1, got p={self.p}")


def _level_weights(levels: np.ndarray) -> np.ndarray:
    """Trapezoid weights for a (possibly nonuniform) level set."""
    if levels.size == 1:
        return np.ones(1)
    w = np.empty(levels.size)
    d = np.diff(levels)
    w[0] = d[0] / 2
    w[-1] = d[-1] / 2
    w[1:-1] = (d[:-1] + d[1:]) / 2
    return w


def lp_norm(u: BoundaryGridFunction | HalfSpaceField, p: float) -> float:
    """Trapezoid-quadrature L^p norm; p = inf gives the sample max."""
    if isinstance(u, BoundaryGridFunction):
        vals = u.values
        weights = u.grid.trapezoid_weights()
    else:
        vals = u.values
        wl = _level_weights(u.levels)
        wg = u.grid.trapezoid_weights()
        weights = wl.reshape((-1,) + (1,) * u.grid.dim) * wg
    if not np.all(np.isfinite(vals)):
        raise ValueError("non-finite values in lp_norm")
    if math.isinf(p):
        return float(np.max(np.abs(vals)))
    if p < 1:
        raise ValueError(f"need p >= 1 or inf, got {p}")
    return float(np.sum(np.abs(vals) ** p * weights) ** (1.0 / p))


def _axis_gradient(values: np.ndarray, axis: int, h: float) -> np.ndarray:
    """Central differences along one uniformly spaced axis, one-sided at faces."""
    if values.shape[axis] < 3:
        raise ValueError("need >= 3 nodes per axis for gradients")
    g = np.gradient(values, h, axis=axis, edge_order=1)
    return g


def _level_gradient(values: np.ndarray, levels: np.ndarray) -> np.ndarray:
    """3-point nonuniform differences along the level axis (axis 0)."""
    if levels.size < 3:
        raise ValueError("need >= 3 levels for x_n gradients")
    return np.gradient(values, levels, axis=0, edge_order=1)


def discrete_gradient(u: BoundaryGridFunction | HalfSpaceField) -> np.ndarray:
    """Per-node gradient, O(h^2) in the interior on smooth fields.

    Boundary functions return shape (dim,) + grid.shape (tangential
    gradient); half-space fields return (n,) + (levels,) + grid.shape with
    the x_n component last.
    """
    if isinstance(u, BoundaryGridFunction):
        comps = [
            _axis_gradient(u.values, ax, u.grid.h) for ax in range(u.grid.dim)
        ]
        return np.stack(comps)
    comps = [
        _axis_gradient(u.values, 1 + ax, u.grid.h) for ax in range(u.grid.dim)
    ]
    comps.append(_level_gradient(u.values, u.levels))
    return np.stack(comps)


def gradient_magnitude(u: BoundaryGridFunction | HalfSpaceField) -> np.ndarray:
    return np.sqrt(np.sum(discrete_gradient(u) ** 2, axis=0))


def _as_norm_container(u, mag):
    if isinstance(u, BoundaryGridFunction):
        return BoundaryGridFunction(u.grid, mag)
    return HalfSpaceField(u.grid, u.levels, mag)


def gradient_lp_norm(u: BoundaryGridFunction | HalfSpaceField, p: float) -> float:
    """|| |grad u| ||_p with the same quadrature as lp_norm."""
    return lp_norm(_as_norm_container(u, gradient_magnitude(u)), p)


def gagliardo_seminorm(
    f: BoundaryGridFunction,
    params: SeminormParams,
    node_cap: int = SEMINORM_NODE_CAP,
    tile: int = 256,
) -> float:
    """Fractional (s,p)-Gagliardo seminorm of boundary data.

    Tiled deterministic double sum; the node cap guards the O(N^2) cost
    and is overridable per call.
    """
    grid = f.grid
    n_nodes = grid.node_count
    if n_nodes > node_cap:
        raise ValueError(
            f"{n_nodes} nodes exceeds the seminorm cap {node_cap}; "
            "pass node_cap explicitly to override"
        )
    kexp = grid.dim + params.s * params.p
    values = f.values.ravel()
    weights = grid.trapezoid_weights().ravel()
    coords = grid.coords()
    partials = kernels.seminorm_row_partials(
        values, coords, weights, kexp, params.p, tile
    )
    total = kernels.pairwise_tree_sum(partials)
    return float(total ** (1.0 / params.p))


def intersection_norm(f: BoundaryGridFunction, s: float, p: float, r: float) -> float:
    """[f]_{s,p} + ||f||_r, the norm the trace theorem is stated in."""
    return gagliardo_seminorm(f, SeminormParams(s, p)) + lp_norm(f, r)
