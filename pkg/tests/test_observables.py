import numpy as np
import pytest

from conftest import random_state, small_model
from surrogate_heat.errors import ContractViolation, SteadyStateError
from surrogate_heat.observables import (ObservableSeries, SteadyEstimate, carnot_cop,
                                        coefficient_of_performance, detect_steady_state,
                                        drive_energy, entropy_production_rate,
                                        instantaneous_power, position_expectation,
                                        detect_steady_state_ensemble, probability_density,
                                        rectification_ratio,
                                        system_energy)
from surrogate_heat.propagator import PropagatorConfig, ground_state, propagate_step
from surrogate_heat.units import AU_TIME_FS


def test_system_energy_of_ground_state_is_e0():
    ctx = small_model(32, 1, 2, box=6.0)
    chi, e0 = ground_state(ctx)
    rng = np.random.default_rng(4)
    spins = random_state(rng, 8)
    psi = (spins.reshape(4, 2)[:, :, None] * chi).ravel()
    assert system_energy(psi, ctx) == pytest.approx(e0, abs=1e-12)


def test_system_energy_is_phase_invariant(rng):
    ctx = small_model(16, 1, 1, rng)
    psi = random_state(rng, ctx.dim)
    assert system_energy(psi, ctx) == pytest.approx(system_energy(np.exp(0.7j) * psi, ctx),
                                                    abs=1e-14)


def test_density_and_position():
    ctx = small_model(16, 1, 1)
    psi = np.zeros(ctx.shape, dtype=complex)
    psi[1, 0, 5] = 0.6
    psi[0, 1, 5] = 0.8j
    p = probability_density(psi.ravel(), ctx)
    assert p[5] == pytest.approx(1.0, abs=1e-15) and p.sum() == pytest.approx(1.0)
    assert position_expectation(psi.ravel(), ctx) == pytest.approx(ctx.grid.r[5])
    # symmetric density about a grid point
    psi = np.zeros(ctx.shape, dtype=complex)
    psi[0, 0, 4] = psi[0, 0, 8] = np.sqrt(0.5)
    assert position_expectation(psi.ravel(), ctx) == pytest.approx(ctx.grid.r[6], abs=1e-14)


def test_power_arithmetic():
    ctx = small_model(16, 1, 1, epsilon=0.02)
    ctx = ctx.__class__(ctx.grid, ctx.surface.__class__(ctx.surface.left, ctx.surface.right,
                                                         ctx.surface.coupling, 1.0),
                        ctx.left_bath, ctx.right_bath, ctx.left_window, ctx.right_window,
                        ctx.drive.__class__(0.02, 1e-3, True))
    idx = int(np.argmin(abs(ctx.grid.r - 2.0)))
    psi = np.zeros(ctx.shape, dtype=complex)
    psi[0, 0, idx] = 1.0
    assert ctx.grid.r[idx] == 2.0
    t = (np.pi / 2) / 1e-3
    assert instantaneous_power(psi.ravel(), ctx, t) == pytest.approx(-4e-5, rel=1e-12)
    assert instantaneous_power(psi.ravel(), ctx, 0.0) == 0.0
    assert instantaneous_power(psi.ravel(), small_model(16, 1, 1), t) == 0.0


def test_first_law_with_drive(rng):
    # d/dt (E_S + f <mu R>) = J_L + J_R + P in the limit of small steps
    from surrogate_heat.observables import heat_current
    ctx = small_model(32, 1, 1, rng, epsilon=0.3, box=6.0)
    cfg = PropagatorConfig(dt=1e-3)
    chi, _ = ground_state(ctx)
    spins = random_state(rng, 4)
    psi = (spins.reshape(2, 2)[:, :, None] * chi).ravel()
    t = 0.9
    for step in range(50):
        psi = propagate_step(psi, ctx, t + step * cfg.dt, cfg)
    t += 50 * cfg.dt

    def total(x, s):
        return system_energy(x, ctx) + drive_energy(x, ctx, s)

    h = 1e-3
    back = propagate_step(psi, ctx, t, cfg, dt=-h)
    fwd = propagate_step(psi, ctx, t, cfg, dt=h)
    rate = (total(fwd, t + h) - total(back, t - h)) / (2 * h)
    flows = heat_current(psi, ctx, "left") + heat_current(psi, ctx, "right") \
        + instantaneous_power(psi, ctx, t)
    # the symmetrized current equals i<[H_SB, H_S]> only up to grid resolution
    # of the window cusp, about 1e-3 relative on this grid
    assert rate == pytest.approx(flows, rel=2e-3)


def test_entropy_production():
    assert entropy_production_rate(0.0, 0.0, 25.0, 5.0) == 0.0
    # steady hot -> cold transport: J_hot > 0 into the system, J_cold = -J_hot
    assert entropy_production_rate(1e-8, -1e-8, 25.0, 5.0) > 0
    assert entropy_production_rate(-1e-8, 1e-8, 25.0, 5.0) < 0


def test_cop():
    assert coefficient_of_performance(0.0, 1e-6) == 0.0
    assert coefficient_of_performance(0.5e-6, 1e-6) == 0.5
    assert coefficient_of_performance(1e-6, 0.0) is None
    assert coefficient_of_performance(1e-6, -1e-6) is None
    assert carnot_cop(25.0, 10.0) == pytest.approx(10 / 15)


def test_rectification_ratio():
    a = SteadyEstimate(2.0, 0.1)
    b = SteadyEstimate(1.0, 0.05)
    r, e = rectification_ratio(a, b)
    assert r == 2.0 and e == pytest.approx(2 * np.hypot(0.05, 0.05))
    inv, _ = rectification_ratio(b, a)
    assert inv == pytest.approx(1 / r)
    with pytest.raises(SteadyStateError):
        rectification_ratio(SteadyEstimate(1.0, 0.1, steady=False), b)


def series_from(times, e_s, j_l=None, j_r=None):
    n = len(times)
    j_l = np.full(n, 1e-6) if j_l is None else j_l
    j_r = -j_l if j_r is None else j_r
    z = np.zeros(n)
    return ObservableSeries(times, e_s, j_l, j_r, z, z, np.ones(n))


def test_steady_state_constant_series():
    t = np.linspace(0, 2000, 201)
    assert detect_steady_state(series_from(t, np.ones_like(t)), 400) == 0.0


def test_steady_state_linear_growth_is_absent():
    t = np.linspace(0, 2000, 201)
    assert detect_steady_state(series_from(t, 1e-6 * t), 400) is None


def test_steady_state_unbalanced_currents():
    t = np.linspace(0, 2000, 201)
    s = series_from(t, np.ones_like(t), np.full(201, 1e-6), np.full(201, 1e-6))
    assert detect_steady_state(s, 400) is None
    assert detect_steady_state(s, 400, driven=True) == 0.0


def test_steady_state_time_grows_with_relaxation_time():
    t = np.linspace(0, 10000, 2001)
    found = [detect_steady_state(series_from(t, 1e-4 * np.exp(-t / tau)), 400)
             for tau in (100, 200, 400)]
    assert all(f is not None for f in found)
    assert found[0] < found[1] < found[2]


def test_steady_state_needs_two_windows():
    t = np.linspace(0, 500, 51)
    with pytest.raises(ContractViolation):
        detect_steady_state(series_from(t, np.ones_like(t)), 400)


def test_series_equality_and_fs_axis():
    t = np.linspace(0, 10, 11)
    a = series_from(t, np.ones_like(t))
    b = series_from(t.copy(), np.ones_like(t))
    assert a.equals(b) and len(a) == 11
    b.E_S[3] = np.nextafter(1.0, 2.0)
    assert not a.equals(b)
    np.testing.assert_allclose(a.times_fs, t * AU_TIME_FS)


def test_ensemble_detection_accepts_balance_within_noise():
    rng = np.random.default_rng(3)
    t = np.linspace(0, 1e6, 201)
    runs = []
    for _ in range(8):
        e = 1.0 - 0.5 * np.exp(-t / 5e4)
        jl = 1e-11 + 2e-11 * rng.normal(size=t.size)
        jr = -1e-11 + 2e-11 * rng.normal(size=t.size)
        z = np.zeros_like(t)
        runs.append(ObservableSeries(t, e * 1e-4, jl, jr, z, z, z + 1))
    t0 = detect_steady_state_ensemble(runs, 1e5, slope_tol=1e-10, match_tol=0.1)
    assert t0 is not None and 5e4 <= t0 <= 2e5
    # a genuine imbalance is still rejected
    for s in runs:
        s.J_R[:] = 0.0
    assert detect_steady_state_ensemble(runs, 1e5, slope_tol=1e-10, match_tol=0.1) is None
