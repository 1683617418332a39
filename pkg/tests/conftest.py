import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from tracelab.grids import BoundaryGrid, BoundaryGridFunction


@pytest.fixture
def grid_1d():
    return BoundaryGrid(1, 4.0, 0.05)


@pytest.fixture
def gaussian_1d(grid_1d):
    x = grid_1d.axis
    return BoundaryGridFunction(grid_1d, np.exp(-(x**2)))


def boundary_corpus(grid: BoundaryGrid, seed: int = 0, count: int = 10):
    """Deterministic mix of smooth/discontinuous/offset test functions."""
    rng = np.random.default_rng(seed)
    coords = grid.coords()
    rr = np.linalg.norm(coords, axis=1).reshape(grid.shape)
    x1 = coords[:, 0].reshape(grid.shape)
    out = []
    makers = [
        lambda: np.exp(-(rr**2)),
        lambda: np.exp(-2.0 * (rr - 0.5) ** 2),
        lambda: (rr <= 1.0).astype(float),
        lambda: np.maximum(0.0, 1.0 - rr),
        lambda: x1 * np.exp(-(rr**2)),
        lambda: np.cos(2.0 * x1) * np.exp(-(rr**2)),
    ]
    for k in range(count):
        base = makers[k % len(makers)]()
        amp = 0.5 + rng.random()
        shift = rng.uniform(-0.5, 0.5)
        rolled = np.roll(base, int(shift / grid.h), axis=0)
        out.append(BoundaryGridFunction(grid, amp * rolled))
    return out


ACCEPTANCE_RESULTS: list[tuple[str, bool, str]] = []


def record_acceptance(name: str, passed: bool, detail: str = ""):
    ACCEPTANCE_RESULTS.append((name, passed, detail))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for name, passed, detail in ACCEPTANCE_RESULTS:
        status = "PASS" if passed else "FAIL"
        line = f"{status} [{name}]"
        if detail:
            line += f" {detail}"
        terminalreporter.write_line(line)
