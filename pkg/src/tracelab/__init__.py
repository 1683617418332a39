"""tracelab: a numerical laboratory for half-space trace and extension
operators - exponent algebra, Poisson and truncation liftings, the
Gagliardo staircase, and projection-based traces for C-elliptic operators.
"""

__version__ = "0.1.0"

from tracelab.exponents import (
    ExponentSet,
    InterpolationExponents,
    beta_exponent,
    interpolation_exponents,
    sobolev_conjugate,
    trace_exponent,
)
from tracelab.grids import (
    BoundaryGrid,
    BoundaryGridFunction,
    HalfSpaceField,
    geometric_levels,
    refine,
    restrict_to_boundary,
    sample_boundary,
    uniform_levels,
)

__all__ = [
    "ExponentSet",
    "InterpolationExponents",
    "beta_exponent",
    "interpolation_exponents",
    "sobolev_conjugate",
    "trace_exponent",
    "BoundaryGrid",
    "BoundaryGridFunction",
    "HalfSpaceField",
    "geometric_levels",
    "refine",
    "restrict_to_boundary",
    "sample_boundary",
    "uniform_levels",
]
