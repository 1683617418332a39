import math

import numpy as np
import pytest

from oracles import strip_lq_quadrature
from tracelab.grids import BoundaryGrid, BoundaryGridFunction
from tracelab.norms import lp_norm
from tracelab.staircase import (
    build_approximants,
    build_schedule,
    exact_strip_lq,
    staircase_bounds_check,
    staircase_extend,
)


def indicator_1d(h=0.05, L=6.0, width=1.0):
    g = BoundaryGrid(1, L, h)
    return BoundaryGridFunction(g, (np.abs(g.axis) <= width).astype(float))


def test_exact_strip_lq_against_quadrature():
    rng = np.random.default_rng(0)
    for q in (1.0, 2.0, 3.5):
        for _ in range(20):
            a, b = rng.uniform(-2, 2, size=2)
            got = float(exact_strip_lq(np.array(a), np.array(b), q))
            want = strip_lq_quadrature(a, b, q)
            assert got == pytest.approx(want, rel=5e-4, abs=1e-6)
    assert float(exact_strip_lq(np.array(1.5), np.array(1.5), 2.0)) == pytest.approx(2.25)


def test_approximants_hit_error_targets():
    f = indicator_1d()
    seq = build_approximants(f, J=4, q=4.0)
    norm1 = lp_norm(f, 1.0)
    for j, e in enumerate(seq.errors):
        assert e <= 2.0**-j * norm1 + 1e-14
    # e_3 <= ||f||_1 / 8, verified by direct quadrature
    diff = BoundaryGridFunction(f.grid, f.values - seq.members[3].values)
    assert lp_norm(diff, 1.0) <= norm1 / 8 + 1e-14
    assert seq.members[0].values.max() == 0.0


def test_approximants_preserve_sup_for_q_inf():
    f = indicator_1d()
    seq = build_approximants(f, J=4, q=math.inf)
    sup_f = lp_norm(f, math.inf)
    for m in seq.members:
        assert lp_norm(m, math.inf) <= sup_f + 1e-14


def test_zero_data_guards():
    g = BoundaryGrid(1, 2.0, 0.1)
    zero = BoundaryGridFunction(g, np.zeros(g.shape))
    seq = build_approximants(zero, J=3, q=4.0)
    assert all(np.all(m.values == 0.0) for m in seq.members)
    with pytest.raises(ValueError, match="nonzero"):
        build_schedule(seq, 4.0)


def test_schedule_monotone_and_bounded():
    f = indicator_1d()
    q = 4.0
    seq = build_approximants(f, J=6, q=q)
    sched = build_schedule(seq, q)
    norm1 = lp_norm(f, 1.0)
    t = sched.levels
    assert all(a > b for a, b in zip(t, t[1:]))
    assert t[-1] > 0
    for j, s in enumerate(sched.widths):
        assert s <= 2.0 ** -(j + 1) * norm1**q
    assert t[0] <= norm1**q
    assert t[6] / t[0] < 0.02


def test_q_range_guard():
    f = indicator_1d(h=0.1, L=2.0)
    with pytest.raises(ValueError, match="n/\\(n-1\\)"):
        staircase_extend(f, q=2.0, J=3)  # q = n/(n-1) = 2 at n = 2 is out of range
    staircase_extend(f, q=2.5, J=2)  # in range


def test_layer_values_exact_and_trace_defects():
    f = indicator_1d()
    field = staircase_extend(f, q=4.0, J=6)
    seq, sched = field.sequence, field.schedule
    norm1 = lp_norm(f, 1.0)
    for j in range(7):
        assert np.array_equal(field.layer_values(j), seq.members[j].values)
        defect = lp_norm(f.with_values(field.layer_values(j) - f.values), 1.0)
        assert defect <= 2.0**-j * norm1 + 1e-14
    # u vanishes at the top layer and is continuous piecewise-linear below
    assert np.all(field.layer_values(0) == 0.0)


def test_strip_pointwise_bound():
    f = indicator_1d(h=0.1)
    field = staircase_extend(f, q=4.0, J=4)
    seq, sched = field.sequence, field.schedule
    rng = np.random.default_rng(1)
    for j in range(4):
        t_hi, t_lo = sched.levels[j], sched.levels[j + 1]
        for theta in rng.random(3):
            x_n = t_lo + theta * (t_hi - t_lo)
            lam = (sched.levels[j] - x_n) / (t_hi - t_lo)
            u_mid = lam * seq.members[j + 1].values + (1 - lam) * seq.members[j].values
            bound = np.abs(seq.members[j].values) + np.abs(seq.members[j + 1].values)
            assert np.all(np.abs(u_mid) <= bound + 1e-14)


def test_bounds_check_1d():
    f = indicator_1d()
    field = staircase_extend(f, q=4.0, J=6)
    bounds = staircase_bounds_check(field)
    assert bounds.all_passed
    assert bounds.lq_power <= bounds.lq_bound
    assert bounds.dn_l1 <= 3.0 * bounds.data_l1
    # d_n integral per strip is exactly sum ||f_{j+1} - f_j||_1
    seq = field.sequence
    w = f.grid.trapezoid_weights()
    manual = sum(
        float(np.sum(np.abs(seq.members[j + 1].values - seq.members[j].values) * w))
        for j in range(6)
    )
    assert bounds.dn_l1 == pytest.approx(manual, rel=1e-14)


def test_bounds_check_2d_q2():
    g = BoundaryGrid(2, 3.0, 0.1)
    rr = np.linalg.norm(g.coords(), axis=1).reshape(g.shape)
    f = BoundaryGridFunction(g, (rr <= 1.0).astype(float))
    field = staircase_extend(f, q=2.0, J=6)  # valid: q = 2 > n/(n-1) = 3/2
    bounds = staircase_bounds_check(field)
    assert bounds.all_passed
    norm1 = lp_norm(f, 1.0)
    assert bounds.lq_power <= 5.0 * norm1**2  # C_q = 2^q + 1 = 5
    assert bounds.lq_power / norm1**2 <= 5.0


def test_sup_norm_variant_q_inf():
    f = indicator_1d()
    field = staircase_extend(f, q=math.inf, J=5)
    sup_u = float(np.max(np.abs(field.u.values)))
    assert sup_u <= lp_norm(f, math.inf) + 1e-15
    with pytest.raises(ValueError, match="finite q"):
        staircase_bounds_check(field)
