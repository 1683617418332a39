import math

import numpy as np
import pytest
from scipy.integrate import quad

from tracelab.exponents import sobolev_conjugate
from tracelab.grids import BoundaryGrid, BoundaryGridFunction, geometric_levels
from tracelab.maximal import default_ladder
from tracelab.norms import SeminormParams, gagliardo_seminorm, gradient_lp_norm, lp_norm
from tracelab.poisson import (
    PoissonKernelParams,
    check_maximal_domination,
    divergence_experiment,
    kernel_slice_mass,
    poisson_extend,
    poisson_kernel,
    power_decay_data,
)


def test_kernel_normalization_constant_against_quadrature():
    # c_2 = 1/pi: the continuum slice integral at x_n = 1 must be 1
    params = PoissonKernelParams(2)
    val, _ = quad(lambda t: poisson_kernel(np.asarray(t), 1.0, params), -np.inf, np.inf)
    assert val == pytest.approx(1.0, abs=1e-10)
    assert poisson_kernel(np.asarray(0.0), 1.0, params) == pytest.approx(1 / math.pi, rel=1e-14)
    # n = 3 normalization via polar quadrature
    p3 = PoissonKernelParams(3)
    val3, _ = quad(
        lambda rho: 2 * math.pi * rho * p3.c_n * 0.5 / (0.25 + rho**2) ** 1.5,
        0.0,
        np.inf,
    )
    assert val3 == pytest.approx(1.0, abs=1e-10)


def test_kernel_symmetry_and_scaling():
    params = PoissonKernelParams(3)
    x = np.array([0.3, -0.7])
    assert poisson_kernel(x, 0.5, params) == poisson_kernel(-x, 0.5, params)
    lam = 2.0
    got = poisson_kernel(lam * x, lam * 0.5, params)
    assert got == pytest.approx(lam ** (-2) * poisson_kernel(x, 0.5, params), rel=1e-13)
    with pytest.raises(ValueError):
        poisson_kernel(x, 0.0, params)


def test_discrete_slice_mass_near_one():
    assert abs(kernel_slice_mass(BoundaryGrid(1, 4.0, 0.005), 0.01) - 1) <= 1e-3
    assert abs(kernel_slice_mass(BoundaryGrid(2, 4.0, 0.004), 0.006) - 1) <= 1e-3


def test_extension_linearity_positivity_sup(grid_1d, gaussian_1d):
    levels = geometric_levels(grid_1d.h, 2.0, 1.4)
    g2 = BoundaryGridFunction(grid_1d, np.cos(grid_1d.axis) * np.exp(-(grid_1d.axis**2)))
    va = poisson_extend(gaussian_1d, levels)
    vb = poisson_extend(g2, levels)
    combo = BoundaryGridFunction(grid_1d, 2.0 * gaussian_1d.values - 0.5 * g2.values)
    vc = poisson_extend(combo, levels)
    assert np.allclose(vc.values, 2.0 * va.values - 0.5 * vb.values, atol=1e-12)
    assert np.all(va.values >= 0.0)  # positivity
    assert np.max(np.abs(va.values)) <= 1.0 * (1 + 1e-3)  # sup bound
    zero = poisson_extend(BoundaryGridFunction(grid_1d, np.zeros(grid_1d.shape)), levels)
    assert np.all(zero.values == 0.0)
    with pytest.raises(ValueError):
        poisson_extend(gaussian_1d, np.array([-0.1, 0.5]))


def test_plateau_recovers_unit_value():
    g = BoundaryGrid(1, 8.0, 0.05)
    f = BoundaryGridFunction(g, (np.abs(g.axis) <= 6.0).astype(float))
    v = poisson_extend(f, np.array([0.05, 0.1]))
    center = g.center_index()[0]
    assert v.values[0, center] == pytest.approx(1.0, abs=5e-3)


def test_trace_recovery_first_order():
    errs = []
    for h in (0.1, 0.05, 0.025):
        g = BoundaryGrid(1, 4.0, h)
        f = BoundaryGridFunction(g, np.exp(-(g.axis**2)))
        v = poisson_extend(f, np.array([h]))
        err = lp_norm(BoundaryGridFunction(g, v.values[0] - f.values), 1.0)
        errs.append(err)
    assert errs[2] < errs[1] < errs[0]
    assert 1.5 <= errs[0] / errs[1] <= 3.0
    assert 1.5 <= errs[1] / errs[2] <= 3.0


def test_maximal_domination_decreases_under_ladder_refinement(grid_1d, gaussian_1d):
    levels = geometric_levels(grid_1d.h, 2.0, 1.3)
    v = poisson_extend(gaussian_1d, levels)
    rep = check_maximal_domination(v, gaussian_1d)
    assert rep.max_gap <= 1e-2
    rep_fine = check_maximal_domination(v, gaussian_1d, default_ladder(grid_1d).refined(2))
    assert rep_fine.max_gap <= rep.max_gap + 1e-15


def test_lemma_constants_recorded_and_stable(grid_1d):
    # ||grad v||_p <= C [f]_{1-1/p,p} and ||sup_levels v||_r <= C ||f||_r
    p = 2.0
    consts, sup_consts = [], []
    for h in (0.1, 0.05):
        g = BoundaryGrid(1, 4.0, h)
        f = BoundaryGridFunction(g, np.exp(-(g.axis**2)))
        levels = geometric_levels(h, 4.0, 1.2)
        v = poisson_extend(f, levels)
        sem = gagliardo_seminorm(f, SeminormParams(1 - 1 / p, p), node_cap=10**4)
        consts.append(gradient_lp_norm(v, p) / sem)
        sup_v = BoundaryGridFunction(g, np.max(np.abs(v.values), axis=0))
        for r in (2.0, 3.0):
            sup_consts.append(lp_norm(sup_v, r) / lp_norm(f, r))
    assert all(np.isfinite(consts)) and max(consts) < 5.0
    assert abs(consts[0] - consts[1]) / consts[0] < 0.25
    assert max(sup_consts) < 2.0


def test_divergence_window_enforced():
    g = BoundaryGrid(1, 8.0, 0.1)
    f = power_decay_data(g, 0.9)
    with pytest.raises(ValueError, match="window"):
        divergence_experiment(f, 2.0, [4, 8], alpha=0.4)  # below (n-1)/p
    with pytest.raises(ValueError, match="window"):
        divergence_experiment(f, 2.0, [4, 8], alpha=1.2)  # above n/p
    with pytest.raises(ValueError, match="x_lo"):
        divergence_experiment(f, 2.0, [1, 2], alpha=0.9)


def test_divergence_growth_and_control():
    g = BoundaryGrid(1, 40.0, 0.1)
    tab = divergence_experiment(power_decay_data(g, 0.9), 2.0, [4, 8, 16, 32], alpha=0.9)
    assert np.all(np.diff(tab.strip_norms) > 0)
    assert tab.growth_ratio >= 2.0
    # zero-mean compactly supported control stays bounded
    gc = BoundaryGrid(1, 4.0, 0.05)
    x = gc.axis
    prof = np.where(np.abs(x) < 1.0, (1.0 - np.minimum(x**2, 1.0)) ** 3, 0.0)
    control = BoundaryGridFunction(gc, x * prof)
    tabc = divergence_experiment(control, 2.0, [4, 8, 16, 32])
    assert tabc.growth_ratio <= 1.2
