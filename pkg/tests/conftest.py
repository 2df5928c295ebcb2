import numpy as np
import pytest

from surrogate_heat.grid import GridSpec, build_grid
from surrogate_heat.hamiltonian import DriveParams, build_context
from surrogate_heat.potential import CouplingWindow, double_well
from surrogate_heat.spinbath import build_spectrum


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


def random_state(rng, n):
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    return v / np.linalg.norm(v)


def small_model(n_grid=8, n_left=1, n_right=1, rng=None, epsilon=0.0, box=4.0,
                mass=1.0, t_left=10.0, t_right=20.0):
    """A tiny model with O(1) parameters for dense-oracle comparisons."""
    rng = rng or np.random.default_rng(1)
    grid = build_grid(GridSpec(n_grid, -box, box, mass))
    surface = double_well(rng.uniform(0.5, 1.0), rng.uniform(1.0, 1.5), -1.5, 1.5,
                          amplitude=rng.uniform(0.1, 0.3), mass=mass, mu=rng.uniform(0.5, 1.5))
    def bath(n, side, t):
        b = build_spectrum(max(n, 2), 0.3, 1.2, 0.2, t, side, "sqrt_density")
        if n == 1:
            b = build_spectrum(1, 0.7, 0.7, 0.0, t, side, lambda_override=rng.uniform(0.2, 0.6))
        return b
    lw = CouplingWindow(surface.left.center, rng.uniform(0.3, 0.8), rng.uniform(0.3, 0.8))
    rw = CouplingWindow(surface.right.center, rng.uniform(0.3, 0.8), rng.uniform(0.3, 0.8))
    drive = DriveParams(epsilon, 0.4, epsilon > 0)
    return build_context(grid, surface, bath(n_left, "left", t_left),
                         bath(n_right, "right", t_right), lw, rw, drive)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import VERDICTS
    if not VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(VERDICTS):
        ok, detail = VERDICTS[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
