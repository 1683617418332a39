import numpy as np
import pytest

from tracelab.grids import (
    BoundaryGrid,
    BoundaryGridFunction,
    HalfSpaceField,
    geometric_levels,
    read_grid_csv,
    refine,
    restrict_to_boundary,
    sample_boundary,
    write_grid_csv,
)


def test_grid_invariants():
    g = BoundaryGrid(1, 2.0, 0.25)
    assert g.points_per_axis == 17
    assert g.node_count == 17
    assert g.axis[0] == -2.0 and g.axis[-1] == 2.0
    g2 = BoundaryGrid(2, 1.0, 0.5)
    assert g2.node_count == 25
    with pytest.raises(ValueError):
        BoundaryGrid(1, 1.0, 0.3)  # L/h not integral
    with pytest.raises(ValueError):
        BoundaryGrid(3, 1.0, 0.5)


def test_sample_boundary_examples(grid_1d):
    zero = sample_boundary(lambda x: np.zeros(len(x)), grid_1d)
    assert np.all(zero.values == 0.0)
    f = sample_boundary(lambda x: (1 + np.abs(x[:, 0])) ** -1.2, grid_1d)
    assert f.values[grid_1d.center_index()] == 1.0
    gauss = sample_boundary(lambda x: np.exp(-np.sum(x**2, axis=1)), grid_1d)
    assert gauss.values[grid_1d.center_index()] == 1.0
    with pytest.raises(ValueError, match="non-finite"), np.errstate(divide="ignore"):
        sample_boundary(lambda x: 1.0 / x[:, 0], grid_1d)


def test_restrict_to_boundary_slices(grid_1d):
    levels = np.array([0.0, 0.1, 0.2])
    shape = (levels.size,) + grid_1d.shape
    vals = np.arange(np.prod(shape), dtype=float).reshape(shape)
    u = HalfSpaceField(grid_1d, levels, vals)
    tr = restrict_to_boundary(u)
    assert tr.level == 0.0
    assert np.array_equal(tr.values, vals[0])
    tr_pos = restrict_to_boundary(u, positive_only=True)
    assert tr_pos.level == 0.1
    v = HalfSpaceField(grid_1d, levels[1:], vals[1:])
    tr2 = restrict_to_boundary(v)
    assert tr2.level == 0.1
    const = HalfSpaceField(grid_1d, levels[1:], np.full((2,) + grid_1d.shape, 3.25))
    assert np.all(restrict_to_boundary(const).values == 3.25)


def test_refine_nests_nodes():
    g = BoundaryGrid(1, 1.0, 0.1)
    fine = refine(g, 2)
    assert fine.h == pytest.approx(0.05)
    assert fine.L == g.L
    coarse_nodes = set(np.round(g.axis, 12))
    fine_nodes = set(np.round(fine.axis, 12))
    assert coarse_nodes <= fine_nodes
    assert refine(g, 1) == g
    with pytest.raises(ValueError):
        refine(g, 10**6)  # node cap
    with pytest.raises(ValueError):
        refine(g, 0)


def test_levels_construction():
    lv = geometric_levels(0.1, 2.0, 1.5)
    assert lv[0] == 0.1 and lv[-1] == pytest.approx(2.0)
    assert np.all(np.diff(lv) > 0)
    with pytest.raises(ValueError):
        geometric_levels(0.1, 0.05, 1.5)
    with pytest.raises(ValueError):
        HalfSpaceField(BoundaryGrid(1, 1.0, 0.5), np.array([0.2, 0.1]), np.zeros((2, 5)))


def test_csv_round_trip_boundary(tmp_path, gaussian_1d):
    path = tmp_path / "f.csv"
    write_grid_csv(path, gaussian_1d)
    back = read_grid_csv(path)
    assert isinstance(back, BoundaryGridFunction)
    assert back.grid == gaussian_1d.grid
    assert np.array_equal(back.values, gaussian_1d.values)
    # byte-determinism of the writer
    path2 = tmp_path / "f2.csv"
    write_grid_csv(path2, gaussian_1d)
    assert path.read_bytes() == path2.read_bytes()


def test_csv_round_trip_field(tmp_path):
    g = BoundaryGrid(2, 1.0, 0.5)
    levels = np.array([0.1, 0.3, 0.9])
    rng = np.random.default_rng(3)
    u = HalfSpaceField(g, levels, rng.standard_normal((3,) + g.shape))
    path = tmp_path / "u.csv"
    write_grid_csv(path, u)
    back = read_grid_csv(path)
    assert isinstance(back, HalfSpaceField)
    assert np.array_equal(back.levels, levels)
    assert np.array_equal(back.values, u.values)


def test_csv_malformed_rows(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("# 2,1,1.0,0.5\n-1.0,0.0\n-0.5,1.0,99.0\n")
    with pytest.raises(ValueError, match=":3"):
        read_grid_csv(path)
    path.write_text("-1.0,0.0\n")
    with pytest.raises(ValueError, match="header"):
        read_grid_csv(path)
