"""Gagliardo staircase lifting for p = 1 (interior L^q, q > n/(n-1)).

Smooth approximants f_j with ||f - f_j||_1 <= 2^{-j} ||f||_1 are stacked
on shrinking layers t_j, the field interpolating linearly in x_n between
consecutive approximants:

    u(x', x_n) = ((t_j - x_n) f_{j+1}(x') + (x_n - t_{j+1}) f_j(x')) / s_j

on [t_{j+1}, t_j], u = 0 above t_0, u = f_J below the last realized layer.
Layer widths s_j = 2^{-j-1} ||f||_1^q / (1 + gamma_j + gamma_{j+1} + ||f||_1^q)
with gamma_j = ||f_j||_q^q + ||grad' f_j||_1 (for q = inf, ||f||_1^q is
replaced by ||f||_1 and gamma_j by ||f_j||_inf + ||grad' f_j||_1).

Because u is piecewise linear in x_n, every norm the bounds need has an
exact per-strip closed form; no level quadrature error enters the checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from tracelab.grids import BoundaryGrid, BoundaryGridFunction, HalfSpaceField
from tracelab.norms import discrete_gradient, lp_norm
from tracelab.profiles import mollify_boundary, smoothstep

__all__ = [
    "ApproximatingSequence",
    "LayerSchedule",
    "StaircaseField",
    "build_approximants",
    "build_schedule",
    "staircase_extend",
    "staircase_bounds_check",
    "exact_strip_lq",
]


@dataclass(frozen=True)
class ApproximatingSequence:
    """f_0 = 0, f_1, ..., f_J with geometric L^1 errors e_j <= 2^{-j}||f||_1."""

    f: BoundaryGridFunction
    members: tuple[BoundaryGridFunction, ...]
    errors: tuple[float, ...]
    widths: tuple[float, ...]

    @property
    def J(self) -> int:
        return len(self.members) - 1

    def check_error_targets(self) -> bool:
        norm = lp_norm(self.f, 1.0)
        return all(e <= 2.0**-j * norm + 1e-15 for j, e in enumerate(self.errors))


def _support_cutoff(grid: BoundaryGrid, radius: float) -> np.ndarray:
    """Smooth radial cutoff, 1 inside `radius`, 0 at the domain edge."""
    rr = np.linalg.norm(grid.coords(), axis=1).reshape(grid.shape)
    edge = grid.L
    ramp = np.clip((rr - radius) / max(edge - radius, grid.h), 0.0, 1.0)
    return 1.0 - smoothstep(ramp)


def build_approximants(
    f: BoundaryGridFunction,
    J: int,
    q: float,
    width0: float | None = None,
    max_halvings: int = 60,
) -> ApproximatingSequence:
    """Mollify at adaptive widths until each e_j = ||f - f_j||_1 hits target.

    f_j = cutoff_j * mollify(f, delta_j), the cutoff's plateau growing with
    j; for q = inf the construction automatically keeps ||f_j||_inf <=
    ||f||_inf (mollification is a convex average, the cutoff is <= 1).
    """
    if J < 1:
        raise ValueError("need J >= 1")
    norm1 = lp_norm(f, 1.0)
    if norm1 == 0.0:
        zero = f.with_values(np.zeros_like(f.values))
        return ApproximatingSequence(
            f, tuple([zero] * (J + 1)), tuple([0.0] * (J + 1)), tuple([0.0] * (J + 1))
        )
    grid = f.grid
    width = width0 if width0 is not None else grid.L / 4.0
    members = [f.with_values(np.zeros_like(f.values))]
    errors = [norm1]
    widths = [math.inf]
    for j in range(1, J + 1):
        target = 2.0**-j * norm1
        radius = grid.L * (1.0 - 2.0 ** -(j + 1))
        for _ in range(max_halvings):
            cand = mollify_boundary(f, width)
            cand = cand.with_values(cand.values * _support_cutoff(grid, radius))
            err = lp_norm(f.with_values(f.values - cand.values), 1.0)
            if err <= target:
                break
            width /= 2.0
        else:
            raise RuntimeError(
                f"approximant {j}: could not reach e_j <= {target} "
                f"within the width-halving budget (achieved {err})"
            )
        members.append(cand)
        errors.append(err)
        widths.append(width)
    return ApproximatingSequence(f, tuple(members), tuple(errors), tuple(widths))


@dataclass(frozen=True)
class LayerSchedule:
    """Widths s_j and layer heights t_0 > t_1 > ... > t_J > 0."""

    q: float
    gammas: tuple[float, ...]
    widths: tuple[float, ...]
    levels: tuple[float, ...]

    @property
    def J(self) -> int:
        return len(self.widths)

    def rows(self):
        for j, (s, t) in enumerate(zip(self.widths, self.levels[:-1])):
            yield j, self.gammas[j], s, t


def _gamma(fj: BoundaryGridFunction, q: float) -> float:
    grad = discrete_gradient(fj)
    w = fj.grid.trapezoid_weights()
    grad_l1 = float(np.sum(np.sqrt(np.sum(grad**2, axis=0)) * w))
    if math.isinf(q):
        return float(np.max(np.abs(fj.values))) + grad_l1
    return lp_norm(fj, q) ** q + grad_l1


def build_schedule(seq: ApproximatingSequence, q: float) -> LayerSchedule:
    """Layer widths from the gamma weights; heights accumulated top-down.

    The unrealized tail sum_{j > J-1} s_j is closed in geometric form with
    gamma frozen at gamma_J, giving a positive bottom layer t_J below
    which the field stays at f_J.
    """
    norm1 = lp_norm(seq.f, 1.0)
    if norm1 == 0.0:
        raise ValueError("staircase schedule needs nonzero data")
    scale = norm1 if math.isinf(q) else norm1**q
    gammas = [_gamma(m, q) for m in seq.members]
    J = seq.J
    widths = [
        2.0 ** -(j + 1) * scale / (1.0 + gammas[j] + gammas[j + 1] + scale)
        for j in range(J)
    ]
    # geometric tail with gamma frozen at gamma_J: sum_{j>=J} 2^{-j-1} c = 2^{-J} c
    t_tail = 2.0**-J * scale / (1.0 + 2.0 * gammas[J] + scale)
    # compensated top-down accumulation of t_j = tail + sum_{i>=j} s_i
    levels = [t_tail]
    carry = 0.0
    total = t_tail
    for s in reversed(widths):
        y = s - carry
        t = total + y
        carry = (t - total) - y
        total = t
        levels.append(total)
    levels.reverse()  # levels[j] = t_j, levels[J] = t_tail
    return LayerSchedule(q, tuple(gammas), tuple(widths), tuple(levels))


@dataclass(frozen=True)
class StaircaseField:
    """The staircase with its schedule; u sampled exactly at the layers."""

    sequence: ApproximatingSequence
    schedule: LayerSchedule
    u: HalfSpaceField

    def layer_values(self, j: int) -> np.ndarray:
        return self.u.slice_at(self.schedule.levels[j])


def staircase_extend(
    f: BoundaryGridFunction, q: float, J: int, width0: float | None = None
) -> StaircaseField:
    """Build the staircase for q in (n/(n-1), inf]; p = 1 throughout."""
    n = f.grid.n
    q_min = n / (n - 1)
    if not q > q_min:
        raise ValueError(f"staircase needs q > n/(n-1) = {q_min}, got q={q}")
    seq = build_approximants(f, J, q, width0=width0)
    sched = build_schedule(seq, q)
    # levels ascending: 0, t_J, t_{J-1}, ..., t_0 carrying f_J, f_J, ..., f_0
    lv = [0.0] + list(reversed(sched.levels))
    vals = [seq.members[seq.J].values, seq.members[seq.J].values] + [
        seq.members[j].values for j in reversed(range(seq.J))
    ]
    u = HalfSpaceField(f.grid, np.asarray(lv), np.stack(vals))
    return StaircaseField(seq, sched, u)


def exact_strip_lq(a: np.ndarray, b: np.ndarray, q: float) -> np.ndarray:
    """Exact unit-interval integral of |(1-theta) a + theta b|^q d theta.

    Uses the global antiderivative G(x) = sign(x)|x|^{q+1}/(q+1) of |x|^q,
    valid across sign changes; the a = b limit is |a|^q.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    d = b - a
    tiny = np.abs(d) <= 1e-300 + 1e-14 * np.maximum(np.abs(a), np.abs(b))
    G = lambda x: np.sign(x) * np.abs(x) ** (q + 1.0) / (q + 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = (G(b) - G(a)) / d
    out = np.where(tiny, np.abs(a) ** q, out)
    return out


@dataclass(frozen=True)
class StaircaseBounds:
    """The three estimate ratios plus the exact layer/trace checks."""

    lq_power: float
    lq_bound: float
    dn_l1: float
    dn_bound: float
    tangential: float
    tangential_bound: float
    trace_defects: tuple[float, ...]
    data_l1: float

    @property
    def all_passed(self) -> bool:
        ok = self.lq_power <= self.lq_bound and self.dn_l1 <= self.dn_bound
        ok = ok and self.tangential <= self.tangential_bound
        targets = [2.0**-j * self.data_l1 + 1e-15 for j in range(len(self.trace_defects))]
        return ok and all(e <= t for e, t in zip(self.trace_defects, targets))


def staircase_bounds_check(field: StaircaseField) -> StaircaseBounds:
    """Verify the L^q, normal-gradient and tangential-gradient estimates.

    All strip integrals are closed-form in x_n (the field is piecewise
    linear there), so these are exact statements about the construction:

    * ||u||_q^q <= (2^q + 1) ||f||_1^q,
    * ||d_n u||_1 = sum_j ||f_{j+1} - f_j||_1 <= 3 ||f||_1,
    * per-axis integral of |d_l u| <= ||f||_1^q (the schedule's design).
    """
    q = field.schedule.q
    if math.isinf(q):
        raise ValueError("bounds check is for finite q; use the sup-norm check at q=inf")
    seq, sched = field.sequence, field.schedule
    grid = seq.f.grid
    w = grid.trapezoid_weights()
    norm1 = lp_norm(seq.f, 1.0)
    J = seq.J

    lq = 0.0
    dn = 0.0
    tangential = np.zeros(grid.dim)
    grads = [discrete_gradient(m) for m in seq.members]
    for j in range(J):
        s_j = sched.widths[j]
        top, bot = seq.members[j].values, seq.members[j + 1].values
        lq += s_j * float(np.sum(exact_strip_lq(bot, top, q) * w))
        dn += float(np.sum(np.abs(bot - top) * w))
        for ax in range(grid.dim):
            tangential[ax] += s_j * float(
                np.sum(exact_strip_lq(grads[j + 1][ax], grads[j][ax], 1.0) * w)
            )
    t_tail = sched.levels[-1]
    fJ = seq.members[J]
    lq += t_tail * lp_norm(fJ, q) ** q
    for ax in range(grid.dim):
        tangential[ax] += t_tail * float(np.sum(np.abs(grads[J][ax]) * w))

    defects = tuple(
        lp_norm(seq.f.with_values(field.layer_values(j) - seq.f.values), 1.0)
        for j in range(J + 1)
    )
    return StaircaseBounds(
        lq_power=lq,
        lq_bound=(2.0**q + 1.0) * norm1**q,
        dn_l1=dn,
        dn_bound=3.0 * norm1,
        tangential=float(tangential.max()),
        tangential_bound=norm1**q,
        trace_defects=defects,
        data_l1=norm1,
    )
