"""Experiment runners behind the CLI: build, check, emit CSV.

Every runner is a pure function of its config (all randomness flows from
the config seed), so reruns produce byte-identical CSV artifacts.  Each
emits one CSV per check family plus rows for ``summary.csv``; a nonzero
exit status means a hard invariant failed.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from tracelab import celliptic as ce
from tracelab import staircase as st
from tracelab.config import ConfigError, ExperimentConfig
from tracelab.exponents import ExponentSet, interpolation_exponents, sobolev_conjugate
from tracelab.grids import (
    BoundaryGrid,
    BoundaryGridFunction,
    geometric_levels,
    read_grid_csv,
)
from tracelab.maximal import default_ladder
from tracelab.norms import SeminormParams, gagliardo_seminorm, lp_norm
from tracelab.poisson import (
    check_maximal_domination,
    divergence_experiment,
    kernel_slice_mass,
    poisson_extend,
    power_decay_data,
)
from tracelab.truncation import (
    chief_bound_check,
    collapse_measure,
    nonlinear_extend,
    pointwise_bound_check,
    step1_bound_check,
    support_check,
    trace_recovery_check,
)

__all__ = ["run_experiment", "SummaryRow", "load_boundary_data", "make_data"]


@dataclass(frozen=True)
class SummaryRow:
    check: str
    hard: bool
    passed: bool
    value: float
    bound: float


def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(x)
    return str(x)


def write_csv(path, header: list[str], rows: list[tuple]) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    with open(path, "w") as f:
        f.write("\n".join(lines) + "\n")


def load_boundary_data(path) -> BoundaryGridFunction:
    """Read boundary data in the grid CSV schema, rejecting field files."""
    obj = read_grid_csv(path)
    if not isinstance(obj, BoundaryGridFunction):
        raise ConfigError(f"{path} holds a half-space field, not boundary data")
    return obj


def make_data(cfg: ExperimentConfig, grid: BoundaryGrid) -> BoundaryGridFunction:
    """Data selector: gaussian | indicator | plateau | power-decay | dipole | file."""
    kind = cfg.get("data.kind", "gaussian")
    amp = cfg.get_float("data.amplitude", 1.0)
    width = cfg.get_float("data.width", 1.0)
    coords = grid.coords()
    rr = np.linalg.norm(coords, axis=1).reshape(grid.shape)
    if kind == "gaussian":
        vals = amp * np.exp(-((rr / width) ** 2))
    elif kind == "indicator":
        vals = amp * (rr <= width).astype(float)
    elif kind == "plateau":
        from tracelab.profiles import smoothstep

        vals = amp * (1.0 - smoothstep(rr / width - 1.0))
    elif kind == "power-decay":
        alpha = cfg.get_float("exp.alpha")
        vals = amp * (1.0 + rr) ** (-alpha)
    elif kind == "dipole":
        x1 = coords[:, 0].reshape(grid.shape)
        prof = np.zeros_like(rr)
        inside = rr < width
        prof[inside] = (1.0 - (rr[inside] / width) ** 2) ** 3
        vals = amp * (x1 / width) * prof
    elif kind == "file":
        return load_boundary_data(cfg.get("data.path"))
    else:
        raise ConfigError(f"unknown data.kind {kind!r}")
    return BoundaryGridFunction(grid, vals)


def _grid_from(cfg: ExperimentConfig) -> BoundaryGrid:
    n = cfg.get_int("grid.n")
    if n not in (2, 3):
        raise ConfigError(f"grid.n must be 2 or 3, got {n}")
    return BoundaryGrid(n - 1, cfg.get_float("grid.L"), cfg.get_float("grid.h"))


def _levels_from(cfg: ExperimentConfig, grid: BoundaryGrid) -> np.ndarray:
    kind = cfg.get("grid.levels", "geometric")
    t_max = cfg.get_float("grid.t_max", 8.0)
    if kind == "geometric":
        return geometric_levels(grid.h, t_max, cfg.get_float("grid.level_rho", 1.25))
    if kind == "uniform":
        return grid.h * np.arange(1, int(round(t_max / grid.h)) + 1)
    raise ConfigError(f"unknown grid.levels {kind!r}")


# -- individual experiments ----------------------------------------------------


def run_exponents(cfg: ExperimentConfig, out: str) -> list[SummaryRow]:
    n_list = [int(v) for v in cfg.get_list("exponents.n_list", "2,3")]
    p_list = cfg.get_list("exponents.p_list", "1.25,1.5,2,2.5")
    q_factors = cfg.get_list("exponents.q_factors", "1.25,1.5,2,3,4")
    header = [
        "n", "p", "q", "p_star", "p_bar", "r", "beta", "s",
        "theta", "r_tilde", "max_identity_residual",
    ]
    rows = []
    worst = 0.0
    for n in n_list:
        for p in p_list:
            if not 1 < p < n:
                continue
            p_star = sobolev_conjugate(p, n)
            for fac in q_factors:
                q = fac * p_star
                ex = ExponentSet(n, p, q)
                interp = interpolation_exponents(n, p, q)
                res = max(ex.identity_residuals().values())
                limit_gap = abs(
                    1.0 + p_star * (1.0 - 1.0 / p) - ex.p_bar
                )
                worst = max(worst, res, limit_gap)
                rows.append(
                    (n, p, q, p_star, ex.p_bar, ex.r, ex.beta, ex.s,
                     interp.theta, interp.r_tilde, res)
                )
    write_csv(os.path.join(out, "exponents.csv"), header, rows)
    return [SummaryRow("exponent_identities", True, worst <= 1e-12, worst, 1e-12)]


def run_poisson(cfg: ExperimentConfig, out: str) -> list[SummaryRow]:
    grid = _grid_from(cfg)
    f = make_data(cfg, grid)
    levels = _levels_from(cfg, grid)
    v = poisson_extend(f, levels)

    norm_grid = BoundaryGrid(
        grid.dim,
        cfg.get_float("poisson.norm_L", 4.0),
        cfg.get_float("poisson.norm_h", 0.005 if grid.dim == 1 else 0.004),
    )
    norm_level = cfg.get_float("poisson.norm_level", 2 * norm_grid.h)
    mass_err = abs(kernel_slice_mass(norm_grid, norm_level) - 1.0)

    dom_tol = cfg.get_float("tol.domination", 1e-2)
    rep = check_maximal_domination(v, f, tol=dom_tol)
    rep_fine = check_maximal_domination(v, f, default_ladder(grid).refined(2), tol=dom_tol)

    sup_ratio = max(
        lp_norm(BoundaryGridFunction(grid, v.values[k]), math.inf) for k in range(levels.size)
    ) / max(lp_norm(f, math.inf), 1e-300)

    rows = [
        ("kernel_normalization", mass_err, 1e-3),
        ("maximal_domination_gap", rep.max_gap, dom_tol),
        ("maximal_domination_gap_refined", rep_fine.max_gap, rep.max_gap),
        ("sup_bound_ratio", sup_ratio, 1.0 + 1e-3),
    ]
    write_csv(os.path.join(out, "poisson_checks.csv"), ["check", "value", "bound"], rows)
    return [SummaryRow(name, True, val <= bound, val, bound) for name, val, bound in rows]


def run_truncation(cfg: ExperimentConfig, out: str) -> list[SummaryRow]:
    grid = _grid_from(cfg)
    n = grid.n
    p = cfg.get_float("exp.p")
    q = cfg.get_float("exp.q")
    ex = ExponentSet(n, p, q)
    ex.require_finite_q("truncation experiment")
    f = make_data(cfg, grid)
    levels = _levels_from(cfg, grid)
    ext = nonlinear_extend(f, ex, levels)

    sup = support_check(ext)
    ptw = pointwise_bound_check(ext)
    step1 = step1_bound_check(ext)
    chief = chief_bound_check(ext)
    h_min, rec_err = trace_recovery_check(ext)
    collapse = collapse_measure(ext)

    header = ["check_name", "n", "p", "q", "r", "beta", "h", "value", "bound", "margin"]
    meta = (n, p, q, ex.r, ex.beta, grid.h)
    rows = [
        ("support_xnbeta", *meta, sup.value, sup.bound, sup.margin),
        ("pointwise_bound", *meta, ptw.value, ptw.bound, ptw.margin),
        ("step1_levelwise_lq", *meta, step1.value, step1.bound, step1.margin),
        ("chief_ratio", *meta, chief.ratio, math.nan, math.nan),
        ("trace_recovery_l1", *meta, rec_err, math.nan, math.nan),
        ("collapse_measure", *meta, collapse, 0.0, -collapse),
    ]
    write_csv(os.path.join(out, "truncation_report.csv"), header, rows)
    return [
        SummaryRow("support_xnbeta", True, sup.passed, sup.value, sup.bound),
        SummaryRow("pointwise_bound", True, ptw.passed, ptw.value, ptw.bound),
        SummaryRow("step1_levelwise_lq", True, step1.passed, step1.value, step1.bound),
        SummaryRow("chief_ratio_finite", True, math.isfinite(chief.ratio), chief.ratio, math.inf),
        SummaryRow("collapse_measure", False, collapse == 0.0, collapse, 0.0),
    ]


def run_staircase(cfg: ExperimentConfig, out: str) -> list[SummaryRow]:
    grid = _grid_from(cfg)
    q = cfg.get_float("staircase.q")
    J = cfg.get_int("staircase.J", 6)
    f = make_data(cfg, grid)
    field = st.staircase_extend(f, q, J)
    seq, sched = field.sequence, field.schedule
    header = ["j", "e_j", "gamma_j", "s_j", "t_j"]
    rows = []
    for j in range(J + 1):
        s_j = sched.widths[j] if j < J else math.nan
        rows.append((j, seq.errors[j], sched.gammas[j], s_j, sched.levels[j]))
    write_csv(os.path.join(out, "schedule.csv"), header, rows)

    summary = []
    if math.isinf(q):
        sup_u = float(np.max(np.abs(field.u.values)))
        sup_f = lp_norm(f, math.inf)
        summary.append(SummaryRow("staircase_sup_bound", True, sup_u <= sup_f, sup_u, sup_f))
    else:
        bounds = st.staircase_bounds_check(field)
        crows = [
            ("lq_power", bounds.lq_power, bounds.lq_bound),
            ("dn_l1", bounds.dn_l1, bounds.dn_bound),
            ("tangential_l1", bounds.tangential, bounds.tangential_bound),
        ]
        write_csv(
            os.path.join(out, "staircase_report.csv"),
            ["check", "value", "bound"],
            crows,
        )
        for name, val, bnd in crows:
            summary.append(SummaryRow(f"staircase_{name}", True, val <= bnd, val, bnd))
        defect_ok = all(
            e <= 2.0**-j * bounds.data_l1 + 1e-15
            for j, e in enumerate(bounds.trace_defects)
        )
        summary.append(
            SummaryRow(
                "staircase_trace_defects", True, defect_ok,
                max(bounds.trace_defects), bounds.data_l1,
            )
        )
    return summary


def run_celliptic(cfg: ExperimentConfig, out: str) -> list[SummaryRow]:
    opname = cfg.get("celliptic.operator", "gradient")
    grid = _grid_from(cfg)
    ops = {
        "gradient": ce.gradient_operator(grid.n),
        "symmetric_gradient": ce.symmetric_gradient_2d(),
        "cauchy_riemann": ce.cauchy_riemann_2d(),
    }
    if opname not in ops:
        raise ConfigError(f"unknown celliptic.operator {opname!r}")
    op = ops[opname]
    verdict = ce.is_c_elliptic(op, cfg.get_int("celliptic.samples", 10_000), cfg.seed)

    summary = [
        SummaryRow(
            "ellipticity_verdict",
            False,
            True,
            verdict.min_sigma,
            math.nan,
        )
    ]
    if not verdict.is_elliptic:
        write_csv(
            os.path.join(out, "celliptic_report.csv"),
            ["check", "value"],
            [("verdict", verdict.verdict), ("min_sigma", verdict.min_sigma)],
        )
        return summary

    j_max = cfg.get_int("celliptic.j_max", 6)
    t_top = 1.75 * 2.0**-1
    count = int(math.ceil(t_top / grid.h)) + 1
    levels = grid.h * np.arange(0, count + 1)
    f = make_data(cfg, grid)
    psi = np.exp(-(levels**2))
    if op.N == 1:
        vals = psi.reshape((1, -1) + (1,) * grid.dim) * f.values[None, None]
    else:
        vals = np.stack(
            [psi.reshape((-1,) + (1,) * grid.dim) * f.values[None]] * op.N
        )
    field = ce.VectorField(grid, levels, vals)
    run = ce.replacement_trace(field, op, range(1, j_max + 1))
    incs = run.increments()
    header = ["j", "cube_count", "l1_increment", "l1_trace_norm", "linf_ratio"]
    rows = []
    for k, j in enumerate(run.js):
        inc = math.nan if k == 0 else incs[k - 1]
        rows.append((j, run.cube_counts[k], inc, run.trace_l1(k), run.linf_ratios[k]))
    write_csv(os.path.join(out, "trace_run.csv"), header, rows)

    exact = field.boundary_values()
    errs = [
        ce._vector_l1(tr - exact, grid) for tr in run.traces
    ]
    decreasing = all(a > b for a, b in zip(errs, errs[1:]))
    summary.append(SummaryRow("trace_l1_decreasing", True, decreasing, errs[-1], errs[0]))
    ratio_span = max(run.linf_ratios) / max(min(run.linf_ratios), 1e-300)
    summary.append(SummaryRow("linf_ratio_stable", False, ratio_span < 10.0, ratio_span, 10.0))
    return summary


def run_divergence(cfg: ExperimentConfig, out: str) -> list[SummaryRow]:
    grid = _grid_from(cfg)
    p = cfg.get_float("exp.p")
    heights = cfg.get_list("divergence.heights", "4,8,16,32")
    kind = cfg.get("data.kind", "power-decay")
    if kind == "power-decay":
        alpha = cfg.get_float("exp.alpha")
        f = power_decay_data(grid, alpha)
        table = divergence_experiment(f, p, heights, alpha=alpha)
        min_ratio = cfg.get_float("divergence.min_ratio", 2.0)
        monotone = bool(np.all(np.diff(table.strip_norms) > 0))
        ok = monotone and table.growth_ratio >= min_ratio
        summary = [
            SummaryRow("divergence_monotone", True, monotone, table.growth_ratio, min_ratio),
            SummaryRow("divergence_ratio", True, table.growth_ratio >= min_ratio,
                       table.growth_ratio, min_ratio),
        ]
    else:
        f = make_data(cfg, grid)
        table = divergence_experiment(f, p, heights)
        max_ratio = cfg.get_float("divergence.max_ratio", 1.2)
        summary = [
            SummaryRow("control_plateau", True, table.growth_ratio <= max_ratio,
                       table.growth_ratio, max_ratio),
        ]
    write_csv(
        os.path.join(out, "growth.csv"),
        ["H", "strip_norm", "fitted_exponent"],
        list(table.rows()),
    )
    return summary


def run_sweep(cfg: ExperimentConfig, out: str) -> list[SummaryRow]:
    n_list = [int(v) for v in cfg.get_list("sweep.n_list", "2,3")]
    p_list = cfg.get_list("sweep.p_list", "1.5")
    q_factors = cfg.get_list("sweep.q_factors", "1.5")
    h_list = cfg.get_list("sweep.h_list", "0.2,0.1")
    header = ["n", "p", "q", "h", "support_ok", "pointwise_ok", "chief_ratio"]
    rows = []
    all_ok = True
    for n in n_list:
        for p in p_list:
            if not 1 < p < n:
                continue
            for fac in q_factors:
                q = fac * sobolev_conjugate(p, n)
                ex = ExponentSet(n, p, q)
                for h in h_list:
                    grid = BoundaryGrid(n - 1, cfg.get_float("grid.L", 2.0), h)
                    f = make_data(cfg, grid)
                    levels = geometric_levels(h, cfg.get_float("grid.t_max", 4.0), 1.3)
                    ext = nonlinear_extend(f, ex, levels)
                    sup = support_check(ext)
                    ptw = pointwise_bound_check(ext)
                    chief = chief_bound_check(ext)
                    all_ok = all_ok and sup.passed and ptw.passed
                    rows.append(
                        (n, p, q, h, int(sup.passed), int(ptw.passed), chief.ratio)
                    )
    write_csv(os.path.join(out, "sweep.csv"), header, rows)
    return [SummaryRow("sweep_invariants", True, all_ok, float(all_ok), 1.0)]


RUNNERS = {
    "exponents": run_exponents,
    "poisson": run_poisson,
    "truncation": run_truncation,
    "staircase": run_staircase,
    "celliptic": run_celliptic,
    "divergence": run_divergence,
    "sweep": run_sweep,
}


def run_experiment(cfg: ExperimentConfig, out_dir: str) -> int:
    """Run one experiment, write its CSVs plus summary.csv, return exit status."""
    os.makedirs(out_dir, exist_ok=True)
    summary = RUNNERS[cfg.experiment](cfg, out_dir)
    explicit_hard = cfg.hard_checks()
    rows = []
    failed = False
    for row in summary:
        hard = row.check in explicit_hard if explicit_hard else row.hard
        rows.append((cfg.experiment, row.check, int(hard), int(row.passed), row.value, row.bound))
        failed = failed or (hard and not row.passed)
    write_csv(
        os.path.join(out_dir, "summary.csv"),
        ["experiment", "check", "hard", "passed", "value", "bound"],
        rows,
    )
    return 1 if failed else 0
