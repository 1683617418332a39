"""The nonlinear truncation lifting u = eta(x_n |v|^beta) v.

v is the Poisson extension of boundary data f; the cutoff switches the
extension off wherever x_n |v|^beta exceeds 2, which is exactly what
trades the datum's L^r integrability for interior L^q integrability at
the sharp exponent r = q - beta.  Everything here verifies the chain of
estimates behind that trade on the grid: the support condition, the
pointwise min{Mf, (2/x_n)^{1/beta}} bound, the per-node L^q level
integral against Mf^r, the assembled norm bound, trace recovery, and the
multiplicative trace inequality with its explicit constant r.

Gradients of the assembled u are always discrete finite differences; the
chain-rule expression with |v|^{beta-1} near v = 0 is proof machinery and
is never evaluated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from tracelab.exponents import ExponentSet, trace_exponent
from tracelab.grids import BoundaryGrid, BoundaryGridFunction, HalfSpaceField
from tracelab.maximal import RadiusLadder, maximal_function
from tracelab.norms import (
    SeminormParams,
    gagliardo_seminorm,
    gradient_lp_norm,
    lp_norm,
)
from tracelab.poisson import check_maximal_domination, poisson_extend
from tracelab.profiles import SmoothCutoff, mollifier_weights, smooth_cutoff

__all__ = [
    "TruncationExtension",
    "nonlinear_extend",
    "support_check",
    "pointwise_bound_check",
    "step1_bound_check",
    "chief_bound_check",
    "trace_recovery_check",
    "multiplicative_trace_inequality",
    "linf_extend",
    "collapse_measure",
]


@dataclass(frozen=True)
class TruncationExtension:
    """The assembled lifting with everything its checks need.

    u carries a leading level 0 holding f itself (gamma v = f for bounded
    data, and u = v near the boundary); v has positive levels only.
    ``tol`` is twice the observed maximal-domination gap of v on this
    grid - the only discretization slack in the pointwise bound.
    """

    exponents: ExponentSet
    f: BoundaryGridFunction
    v: HalfSpaceField
    u: HalfSpaceField
    mf: BoundaryGridFunction
    tol: float
    cutoff: SmoothCutoff

    def psi(self) -> np.ndarray:
        """Psi = x_n |v|^beta on the positive levels of v."""
        t = self.v.levels.reshape((-1,) + (1,) * self.v.grid.dim)
        return t * np.abs(self.v.values) ** self.exponents.beta


def nonlinear_extend(
    f: BoundaryGridFunction,
    exponents: ExponentSet,
    levels: np.ndarray,
    ladder: RadiusLadder | None = None,
) -> TruncationExtension:
    """Build u = eta(x_n |v|^beta) v over the given positive levels."""
    exponents.require_finite_q("truncation lifting")
    if exponents.n != f.grid.n:
        raise ValueError(
            f"exponent set is for n={exponents.n}, grid has n={f.grid.n}"
        )
    levels = np.asarray(levels, dtype=float)
    if np.any(levels <= 0):
        raise ValueError("levels must be positive; level 0 is added internally")
    eta = smooth_cutoff()
    v = poisson_extend(f, levels)
    t = levels.reshape((-1,) + (1,) * f.grid.dim)
    uvals = eta(t * np.abs(v.values) ** exponents.beta) * v.values
    u = HalfSpaceField(
        f.grid,
        np.concatenate([[0.0], levels]),
        np.concatenate([f.values[None, ...], uvals], axis=0),
    )
    dom = check_maximal_domination(v, f, ladder)
    mf = maximal_function(f, ladder)
    tol = 2.0 * max(dom.max_gap, 0.0) + 1e-12
    return TruncationExtension(exponents, f, v, u, mf, tol, eta)


@dataclass(frozen=True)
class CheckReport:
    """One verified inequality: value against bound, margin = bound - value."""

    name: str
    value: float
    bound: float

    @property
    def margin(self) -> float:
        return self.bound - self.value

    @property
    def passed(self) -> bool:
        return self.value <= self.bound


def support_check(ext: TruncationExtension) -> CheckReport:
    """Support condition: u != 0 implies x_n |v|^beta <= 2, exactly."""
    psi = ext.psi()
    nonzero = ext.u.values[1:] != 0.0
    value = float(psi[nonzero].max()) if nonzero.any() else 0.0
    return CheckReport("support_xnbeta", value, 2.0)


def pointwise_bound_check(ext: TruncationExtension) -> CheckReport:
    """|u| <= min{Mf, (2/x_n)^{1/beta}} + tol at every sample.

    The Mf branch carries the documented ladder tolerance; the algebraic
    branch is exact on the support of u.
    """
    beta = ext.exponents.beta
    t = ext.v.levels.reshape((-1,) + (1,) * ext.v.grid.dim)
    alg = (2.0 / t) ** (1.0 / beta)
    bound = np.minimum(ext.mf.values[None, ...] + ext.tol, alg + 1e-12)
    excess = np.abs(ext.u.values[1:]) - bound
    # level 0 carries f itself: |f| <= Mf exactly by the one-cell ball
    excess0 = np.abs(ext.u.values[0]) - ext.mf.values
    value = float(max(excess.max(), excess0.max()))
    return CheckReport("pointwise_bound", value, 0.0)


def step1_bound_check(ext: TruncationExtension) -> CheckReport:
    """Per-node integral of |u|^q over x_n against c (Mf)^r.

    The proof constant is 2 + 2 beta/(q - beta); the report records the
    measured worst ratio, which must stay below that with ladder slack.
    """
    q, r, beta = ext.exponents.q, ext.exponents.r, ext.exponents.beta
    lv = ext.u.levels
    w = np.empty(lv.size)
    d = np.diff(lv)
    w[0] = d[0] / 2
    w[-1] = d[-1] / 2
    w[1:-1] = (d[:-1] + d[1:]) / 2
    integral = np.tensordot(w, np.abs(ext.u.values) ** q, axes=(0, 0))
    mf = ext.mf.values
    mask = mf > 0
    ratio = float((integral[mask] / mf[mask] ** r).max()) if mask.any() else 0.0
    c_proof = 2.0 + 2.0 * beta / (q - beta)
    return CheckReport("step1_levelwise_lq", ratio, c_proof * (1.0 + ext.tol) ** q)


@dataclass(frozen=True)
class ChiefBoundReport:
    """Ratio of ||u||_q + ||grad u||_p to the f-side of the norm bound."""

    lhs_lq: float
    lhs_grad: float
    rhs: float
    trivial: bool

    @property
    def ratio(self) -> float:
        return math.nan if self.trivial else (self.lhs_lq + self.lhs_grad) / self.rhs


def chief_bound_check(
    ext: TruncationExtension, seminorm_node_cap: int = 65536
) -> ChiefBoundReport:
    """LHS = ||u||_q + ||grad u||_p vs RHS = ||f||_r^{r/q} + ||f||_r^{r/p} + [f]_{1-1/p,p}."""
    ex = ext.exponents
    fr = lp_norm(ext.f, ex.r)
    sem = gagliardo_seminorm(
        ext.f, SeminormParams(ex.s, ex.p), node_cap=seminorm_node_cap
    )
    rhs = fr ** (ex.r / ex.q) + fr ** (ex.r / ex.p) + sem
    if rhs == 0.0:
        return ChiefBoundReport(0.0, 0.0, 0.0, trivial=True)
    lhs_lq = lp_norm(ext.u, ex.q)
    lhs_grad = gradient_lp_norm(ext.u, ex.p)
    return ChiefBoundReport(lhs_lq, lhs_grad, rhs, trivial=False)


def trace_recovery_check(ext: TruncationExtension) -> tuple[float, float]:
    """(h_min, L^1 error): ||u(., h_min) - f||_1 at the smallest positive level."""
    h_min = ext.u.min_positive_level()
    diff = BoundaryGridFunction(ext.f.grid, ext.u.slice_at(h_min) - ext.f.values)
    return h_min, lp_norm(diff, 1.0)


@dataclass(frozen=True)
class MultiplicativeTraceReport:
    """||u(.,0)||_r^r <= r ||grad u||_p ||u||_q^{r-1}, constant r explicit."""

    lhs: float
    rhs: float
    p: float
    q: float
    r: float

    @property
    def margin(self) -> float:
        """Relative slack (rhs - lhs)/rhs; nonnegative means the bound holds."""
        return (self.rhs - self.lhs) / self.rhs if self.rhs > 0 else 0.0

    @property
    def passed(self) -> bool:
        return self.lhs <= self.rhs * (1.0 + 1e-12)


def multiplicative_trace_inequality(
    u: HalfSpaceField, p: float, q: float
) -> MultiplicativeTraceReport:
    """Check the boundary-interior multiplicative inequality on a field.

    The field must carry its boundary values (level 0).
    """
    if not u.has_boundary_level:
        raise ValueError("field needs a level-0 slice to evaluate the trace side")
    r = trace_exponent(p, q)
    trace = BoundaryGridFunction(u.grid, u.values[0])
    lhs = lp_norm(trace, r) ** r
    rhs = r * gradient_lp_norm(u, p) * lp_norm(u, q) ** (r - 1.0)
    return MultiplicativeTraceReport(lhs, rhs, p, q, r)


def linf_extend(f: BoundaryGridFunction, levels: np.ndarray) -> HalfSpaceField:
    """The q = infinity lifting E f(., x_n) = eta(x_n) (psi_{x_n} * f).

    psi is the fixed radial bump supported in the unit ball, dilated to
    width x_n and renormalized on the grid, so ||Ef||_inf <= ||f||_inf
    exactly and Ef vanishes for x_n >= 2.
    """
    from tracelab import kernels

    levels = np.asarray(levels, dtype=float)
    eta = smooth_cutoff()
    grid = f.grid
    out = np.empty((levels.size,) + grid.shape)
    ones = np.ones_like(f.values)
    for k, t in enumerate(levels):
        if t == 0.0:
            out[k] = f.values
            continue
        scale = float(eta(t))
        if scale == 0.0:
            out[k] = 0.0
            continue
        w = mollifier_weights(grid, t)
        num = kernels.convolve_same(f.values, w)
        den = kernels.convolve_same(ones, w)
        out[k] = scale * num / den
    return HalfSpaceField(grid, levels, out)


def collapse_measure(ext: TruncationExtension) -> float:
    """Quadrature measure of {x': u(x', h_min) = 0 != f(x')}.

    Probes the support-collapse scenario: for bounded data it is zero; a
    positive value flags boundary values lost to the truncation.
    """
    h_min = ext.u.min_positive_level()
    collapsed = (ext.u.slice_at(h_min) == 0.0) & (ext.f.values != 0.0)
    w = ext.f.grid.trapezoid_weights()
    return float(np.sum(w * collapsed))
