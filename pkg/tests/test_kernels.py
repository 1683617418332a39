import numpy as np
import pytest

from tracelab import kernels
from tracelab.kernels import (
    _convolve_same_np,
    _maximal_means_np,
    _seminorm_row_partials_np,
    pairwise_tree_sum,
)


def test_pairwise_tree_sum_matches_exact():
    rng = np.random.default_rng(0)
    for n in (0, 1, 2, 5, 16, 37, 128):
        a = rng.standard_normal(n)
        assert pairwise_tree_sum(a) == pytest.approx(float(np.sum(a)), rel=1e-13, abs=1e-13)


def test_tile_partition_independent_of_tile_size():
    rng = np.random.default_rng(1)
    v = rng.standard_normal(200)
    c = rng.standard_normal((200, 2))
    w = np.full(200, 0.05)
    totals = []
    for tile in (16, 64, 200):
        parts = _seminorm_row_partials_np(v, c, w, 2.2, 2.0, tile)
        totals.append(pairwise_tree_sum(parts))
    assert totals[0] == pytest.approx(totals[1], rel=1e-13)
    assert totals[0] == pytest.approx(totals[2], rel=1e-13)


compiled = pytest.mark.skipif(
    kernels.backend_name() != "compiled", reason="compiled extension not built"
)


@compiled
def test_backends_agree_seminorm():
    rng = np.random.default_rng(2)
    v = rng.standard_normal(400)
    c = rng.standard_normal((400, 2))
    w = np.abs(rng.standard_normal(400)) + 0.01
    a = kernels.pairwise_tree_sum(kernels.seminorm_row_partials(v, c, w, 1.7, 2.0))
    b = kernels.pairwise_tree_sum(_seminorm_row_partials_np(v, c, w, 1.7, 2.0, 256))
    assert a == pytest.approx(b, rel=1e-12)


@compiled
def test_backends_agree_convolution():
    rng = np.random.default_rng(3)
    fw = rng.standard_normal(101)
    kern = rng.standard_normal(201)
    assert np.allclose(kernels.convolve_same(fw, kern), _convolve_same_np(fw, kern), atol=1e-11)
    fw2 = rng.standard_normal((21, 21))
    kern2 = rng.standard_normal((41, 41))
    assert np.allclose(kernels.convolve_same(fw2, kern2), _convolve_same_np(fw2, kern2), atol=1e-11)


@compiled
def test_backends_agree_maximal():
    rng = np.random.default_rng(4)
    ax = 0.1 * np.arange(21)
    coords = np.stack(np.meshgrid(ax, ax, indexing="ij"), axis=-1).reshape(-1, 2)
    absf = np.abs(rng.standard_normal(coords.shape[0]))
    radii = 0.1 * np.arange(1, 30)
    a = kernels.maximal_means(absf, coords, radii)
    b = _maximal_means_np(absf, coords, radii)
    assert np.allclose(a, b, atol=1e-13)


def test_convolution_kernel_shape_guard():
    with pytest.raises(ValueError, match="difference grid"):
        kernels.convolve_same(np.zeros(10), np.zeros(10))


@compiled
def test_thread_count_does_not_change_results(monkeypatch):
    rng = np.random.default_rng(5)
    v = rng.standard_normal(300)
    c = rng.standard_normal((300, 1))
    w = np.full(300, 0.1)
    monkeypatch.setenv("TRACELAB_THREADS", "1")
    a = kernels.seminorm_row_partials(v, c, w, 1.5, 2.0)
    monkeypatch.setenv("TRACELAB_THREADS", "4")
    b = kernels.seminorm_row_partials(v, c, w, 1.5, 2.0)
    assert np.array_equal(a, b)  # bitwise: per-tile partials are thread-private
