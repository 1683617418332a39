"""Uniform tensor grids on the truncated boundary [-L, L]^{n-1} and the
half-space above it.

The boundary of R^n_+ is identified with R^{n-1}; we discretize the
truncated box [-L, L]^{n-1} with spacing h (L/h integral) in boundary
dimension dim = n - 1 in {1, 2}.  Half-space samples live on the tensor
product of that grid with an ordered set of positive levels x_n
(optionally including 0 when a field carries its own boundary values).
Grids and grid functions are immutable; every operation builds new values.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "BoundaryGrid",
    "BoundaryGridFunction",
    "HalfSpaceField",
    "geometric_levels",
    "uniform_levels",
    "sample_boundary",
    "restrict_to_boundary",
    "refine",
    "write_grid_csv",
    "read_grid_csv",
]

#: Hard cap on nodes per grid (resource guard for refine()).
MAX_NODES = 2**24


@dataclass(frozen=True)
class BoundaryGrid:
    """Uniform grid h*Z^dim intersected with [-L, L]^dim, dim in {1, 2}."""

    dim: int
    L: float
    h: float

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ValueError(f"boundary dim must be 1 or 2, got {self.dim}")
        if self.L <= 0 or self.h <= 0:
            raise ValueError("need L > 0 and h > 0")
        ratio = self.L / self.h
        if abs(ratio - round(ratio)) > 1e-9 * max(1.0, ratio):
            raise ValueError(f"L/h = {ratio} must be an integer")
        if self.node_count > MAX_NODES:
            raise ValueError(f"node count {self.node_count} exceeds cap {MAX_NODES}")

    @property
    def n(self) -> int:
        """Ambient dimension n = dim + 1."""
        return self.dim + 1

    @property
    def points_per_axis(self) -> int:
        return 2 * int(round(self.L / self.h)) + 1

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.points_per_axis,) * self.dim

    @property
    def node_count(self) -> int:
        return self.points_per_axis**self.dim

    @property
    def axis(self) -> np.ndarray:
        m = int(round(self.L / self.h))
        return self.h * np.arange(-m, m + 1)

    def coords(self) -> np.ndarray:
        """All node coordinates, shape (node_count, dim), row-major order."""
        if self.dim == 1:
            return self.axis[:, None]
        x, y = np.meshgrid(self.axis, self.axis, indexing="ij")
        return np.stack([x.ravel(), y.ravel()], axis=1)

    def trapezoid_weights(self) -> np.ndarray:
        """Composite-trapezoid quadrature weights, shape = grid shape."""
        w1 = np.full(self.points_per_axis, self.h)
        w1[0] = w1[-1] = self.h / 2.0
        if self.dim == 1:
            return w1
        return np.outer(w1, w1)

    def center_index(self) -> tuple[int, ...]:
        mid = self.points_per_axis // 2
        return (mid,) * self.dim


@dataclass(frozen=True)
class BoundaryGridFunction:
    """Real samples on a BoundaryGrid.

    ``level`` records the height a restriction was taken from (0 for true
    boundary data).
    """

    grid: BoundaryGrid
    values: np.ndarray
    level: float = 0.0

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != self.grid.shape:
            raise ValueError(f"values shape {v.shape} != grid shape {self.grid.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("non-finite boundary values")
        object.__setattr__(self, "values", v)

    def with_values(self, values: np.ndarray) -> "BoundaryGridFunction":
        return BoundaryGridFunction(self.grid, values, self.level)


def geometric_levels(h_min: float, t_max: float, rho: float = 1.25) -> np.ndarray:
    """Levels h_min * rho^k up to t_max (t_max appended if overshot).

    Geometric spacing resolves the near-boundary region where the lifting
    constructions concentrate their structure.
    """
    if h_min <= 0 or t_max <= h_min or rho <= 1:
        raise ValueError("need 0 < h_min < t_max and rho > 1")
    levels = [h_min]
    while levels[-1] * rho < t_max * (1 - 1e-12):
        levels.append(levels[-1] * rho)
    if levels[-1] < t_max:
        levels.append(t_max)
    return np.asarray(levels)


def uniform_levels(h_min: float, t_max: float, count: int | None = None) -> np.ndarray:
    """Uniformly spaced levels h_min, 2 h_min, ..., up to t_max."""
    if count is None:
        count = int(round(t_max / h_min))
    return h_min * np.arange(1, count + 1)


@dataclass(frozen=True)
class HalfSpaceField:
    """Samples u(node, x_n) on boundary-grid x levels.

    Levels are strictly increasing and positive, except that the first may
    be 0 (a field carrying its own boundary values).  values has shape
    (len(levels),) + grid.shape.
    """

    grid: BoundaryGrid
    levels: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        lv = np.asarray(self.levels, dtype=float)
        if lv.ndim != 1 or lv.size == 0:
            raise ValueError("need a non-empty 1-D level set")
        if np.any(np.diff(lv) <= 0):
            raise ValueError("levels must be strictly increasing")
        if lv[0] < 0 or (lv[0] == 0 and lv.size == 1):
            raise ValueError("levels must be positive (a single leading 0 is allowed)")
        v = np.asarray(self.values, dtype=float)
        if v.shape != (lv.size,) + self.grid.shape:
            raise ValueError(
                f"values shape {v.shape} != {(lv.size,) + self.grid.shape}"
            )
        object.__setattr__(self, "levels", lv)
        object.__setattr__(self, "values", v)

    @property
    def has_boundary_level(self) -> bool:
        return self.levels[0] == 0.0

    def slice_at(self, level: float) -> np.ndarray:
        i = int(np.searchsorted(self.levels, level))
        if i >= self.levels.size or self.levels[i] != level:
            raise KeyError(f"level {level} not in field")
        return self.values[i]

    def min_positive_level(self) -> float:
        return float(self.levels[1] if self.has_boundary_level else self.levels[0])


def sample_boundary(func, grid: BoundaryGrid) -> BoundaryGridFunction:
    """Sample an analytic function at the grid nodes.

    ``func`` takes an (N, dim) coordinate array and returns N values (or
    accepts unpacked per-axis arrays; both conventions are tried).
    """
    coords = grid.coords()
    try:
        vals = np.asarray(func(coords), dtype=float).reshape(grid.shape)
    except TypeError:
        vals = np.asarray(func(*coords.T), dtype=float).reshape(grid.shape)
    if not np.all(np.isfinite(vals)):
        raise ValueError("sampled function produced non-finite values")
    return BoundaryGridFunction(grid, vals)


def restrict_to_boundary(u: HalfSpaceField, positive_only: bool = False) -> BoundaryGridFunction:
    """Discrete trace-by-restriction: the slice at level 0 if present,
    otherwise at the smallest (positive) level, recorded in ``level``."""
    if u.has_boundary_level and not positive_only:
        return BoundaryGridFunction(u.grid, u.values[0], level=0.0)
    idx = 1 if u.has_boundary_level else 0
    return BoundaryGridFunction(u.grid, u.values[idx], level=float(u.levels[idx]))


def refine(grid: BoundaryGrid, factor: int) -> BoundaryGrid:
    """Same extent, spacing h/factor.  Every coarse node is a fine node."""
    if not (isinstance(factor, (int, np.integer)) and factor >= 1):
        raise ValueError(f"refinement factor must be a positive integer, got {factor}")
    new = BoundaryGrid(grid.dim, grid.L, grid.h / factor)
    return new


# ---------------------------------------------------------------------------
# CSV serialization: header row `# n,dim,L,h[,levels...]`, then one row per
# node `x1,...,x_dim,value[,value_per_level...]`.  repr() formatting keeps
# round trips exact and output byte-deterministic.
# ---------------------------------------------------------------------------


def _fmt(x: float) -> str:
    return repr(float(x))


def write_grid_csv(path, obj: BoundaryGridFunction | HalfSpaceField) -> None:
    grid = obj.grid
    if isinstance(obj, HalfSpaceField):
        levels = list(obj.levels)
        cols = obj.values.reshape(len(levels), grid.node_count).T
    else:
        levels = []
        cols = obj.values.reshape(grid.node_count, 1)
    header = [str(grid.n), str(grid.dim), _fmt(grid.L), _fmt(grid.h)]
    header += [_fmt(t) for t in levels]
    coords = grid.coords()
    lines = ["# " + ",".join(header)]
    for x, row in zip(coords, cols):
        lines.append(",".join([_fmt(c) for c in x] + [_fmt(v) for v in row]))
    with open(path, "w") as f:
        f.write("\n".join(lines) + "\n")


def read_grid_csv(path) -> BoundaryGridFunction | HalfSpaceField:
    with open(path) as f:
        lines = [ln.strip() for ln in f if ln.strip()]
    if not lines or not lines[0].startswith("#"):
        raise ValueError(f"{path}: missing `# n,dim,L,h` header row")
    head = lines[0][1:].strip().split(",")
    if len(head) < 4:
        raise ValueError(f"{path}: header needs at least n,dim,L,h")
    dim, L, h = int(head[1]), float(head[2]), float(head[3])
    levels = [float(t) for t in head[4:]]
    grid = BoundaryGrid(dim, L, h)
    ncols = dim + max(1, len(levels))
    rows = []
    for lineno, ln in enumerate(lines[1:], start=2):
        parts = ln.split(",")
        if len(parts) != ncols:
            raise ValueError(f"{path}:{lineno}: expected {ncols} fields, got {len(parts)}")
        rows.append([float(p) for p in parts])
    if len(rows) != grid.node_count:
        raise ValueError(
            f"{path}: {len(rows)} node rows but grid has {grid.node_count} nodes"
        )
    data = np.asarray(rows)
    if not np.all(np.isfinite(data)):
        raise ValueError(f"{path}: non-finite values")
    vals = data[:, dim:]
    if levels:
        values = vals.T.reshape((len(levels),) + grid.shape)
        return HalfSpaceField(grid, np.asarray(levels), values)
    return BoundaryGridFunction(grid, vals[:, 0].reshape(grid.shape))
