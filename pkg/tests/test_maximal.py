import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import maximal_brute_force
from tracelab.grids import BoundaryGrid, BoundaryGridFunction
from tracelab.maximal import RadiusLadder, default_ladder, maximal_function
from tracelab.norms import lp_norm


def test_spike_example_from_brute_force():
    # h=1, L=4, unit spike at 0, ladder {1,2,3,4}: Mf at x=2 equals 1/5
    g = BoundaryGrid(1, 4.0, 1.0)
    vals = np.zeros(g.shape)
    vals[4] = 1.0
    f = BoundaryGridFunction(g, vals)
    ladder = RadiusLadder(np.array([1.0, 2.0, 3.0, 4.0]))
    mf = maximal_function(f, ladder)
    oracle = maximal_brute_force(vals, g.coords(), ladder.radii)
    assert np.allclose(mf.values, oracle.reshape(g.shape), atol=1e-15)
    assert mf.values[6] == pytest.approx(0.2, abs=1e-15)


def test_constant_data(grid_1d):
    f = BoundaryGridFunction(grid_1d, np.full(grid_1d.shape, -3.0))
    mf = maximal_function(f)
    assert np.allclose(mf.values, 3.0, atol=1e-14)


def test_dominates_pointwise(grid_1d, gaussian_1d):
    mf = maximal_function(gaussian_1d)
    assert np.all(mf.values >= np.abs(gaussian_1d.values))


def test_brute_force_agreement_2d():
    g = BoundaryGrid(2, 1.0, 0.25)
    rng = np.random.default_rng(5)
    f = BoundaryGridFunction(g, rng.standard_normal(g.shape))
    ladder = default_ladder(g)
    mf = maximal_function(f, ladder)
    oracle = maximal_brute_force(f.values, g.coords(), ladder.radii)
    assert np.allclose(mf.values.ravel(), oracle, atol=1e-13)


@given(st.integers(min_value=0, max_value=10))
@settings(max_examples=20, deadline=None)
def test_sublinearity_and_homogeneity(seed):
    g = BoundaryGrid(1, 1.0, 0.25)
    rng = np.random.default_rng(seed)
    f = rng.standard_normal(g.shape)
    h = rng.standard_normal(g.shape)
    mf = maximal_function(BoundaryGridFunction(g, f)).values
    mh = maximal_function(BoundaryGridFunction(g, h)).values
    mfh = maximal_function(BoundaryGridFunction(g, f + h)).values
    assert np.all(mfh <= mf + mh + 1e-14)
    c = -2.5
    mcf = maximal_function(BoundaryGridFunction(g, c * f)).values
    assert np.allclose(mcf, abs(c) * mf, atol=1e-13)


def test_ladder_validation():
    with pytest.raises(ValueError):
        RadiusLadder(np.array([]))
    with pytest.raises(ValueError):
        RadiusLadder(np.array([0.2, 0.1]))
    with pytest.raises(ValueError):
        RadiusLadder(np.array([-0.1, 0.2]))


def test_refined_ladder_is_superset_and_increases_mf(grid_1d, gaussian_1d):
    base = default_ladder(grid_1d)
    fine = base.refined(2)
    base_set = set(np.round(base.radii, 12))
    fine_set = set(np.round(fine.radii, 12))
    assert base_set <= fine_set
    mf = maximal_function(gaussian_1d, base).values
    mf_fine = maximal_function(gaussian_1d, fine).values
    assert np.all(mf_fine >= mf - 1e-14)


def test_lr_boundedness_recorded(grid_1d):
    # ||Mf||_r <= C ||f||_r with a finite stable constant for r > 1
    from conftest import boundary_corpus

    for r in (2.0, 3.0):
        consts = []
        for f in boundary_corpus(grid_1d, seed=2, count=5):
            mf = maximal_function(f)
            consts.append(lp_norm(mf, r) / lp_norm(f, r))
        assert max(consts) < 3.0
