import numpy as np
import pytest

from conftest import random_state, small_model
from surrogate_heat.errors import ConfigurationError, ContractViolation
from surrogate_heat.observables import ObservableSeries
from surrogate_heat.propagator import PropagatorConfig
from surrogate_heat.spinbath import ThermalSpinSample, sample_thermal_spin
from surrogate_heat.stochastic import (RealizationConfig, SwapSchedule, apply_swap,
                                       ensemble_average, realization_rng, run_realization,
                                       run_realizations, schedule_events, steady_average)
from surrogate_heat.units import KB_HARTREE_PER_K


def test_config_validation():
    with pytest.raises(ConfigurationError):
        SwapSchedule(-1.0)
    with pytest.raises(ConfigurationError):
        RealizationConfig(n_realizations=0)
    with pytest.raises(ConfigurationError):
        RealizationConfig(sample_stride=0)


def test_swap_preserves_norm(rng):
    ctx = small_model(8, 2, 3, rng)
    psi = random_state(rng, ctx.dim)
    for side, j in (("left", 0), ("left", 1), ("right", 2)):
        psi = apply_swap(psi, ctx, side, j, 10.0, rng)
        assert abs(np.linalg.norm(psi) - 1) <= 1e-14


def test_swap_of_identical_unentangled_state(rng):
    ctx = small_model(8, 1, 1, rng)
    spin = sample_thermal_spin(ctx.left_bath.omegas[0], 10.0, rng)
    chi = random_state(rng, 8)
    other = random_state(rng, 2)
    psi = (other[:, None, None] * spin.vector[None, :, None] * chi).ravel()
    out = apply_swap(psi, ctx, "left", 0, 10.0, rng, sample=spin)
    # equal up to a global phase of the swapped factor
    overlap = np.vdot(psi, out)
    assert abs(abs(overlap) - 1) <= 1e-12


def test_swap_injects_the_sample(rng):
    ctx = small_model(8, 1, 2, rng)
    psi = random_state(rng, ctx.dim)
    sample = ThermalSpinSample(np.sqrt(0.3), 1j * np.sqrt(0.7))
    out = apply_swap(psi, ctx, "right", 1, 10.0, rng, sample=sample)
    view = ctx.indexer.spin_view(out.reshape(ctx.shape), "right", 1)
    assert np.sum(abs(view[:, 1]) ** 2) == pytest.approx(0.7, abs=1e-14)


def test_thermalization_of_uncoupled_spin():
    temperature = 10.0
    omega = 2 * KB_HARTREE_PER_K * temperature
    ctx = small_model(8, 1, 1).decoupled()
    rng = np.random.default_rng(99)
    psi = np.zeros(ctx.shape, dtype=complex)
    psi[0, 1, 0] = 1.0              # start fully excited
    psi = psi.ravel()
    m = 10000
    pops = np.empty(m)
    for i in range(m):
        psi = apply_swap(psi, ctx, "left", 0, temperature, rng,
                         sample_thermal_spin(omega, temperature, rng))
        view = ctx.indexer.spin_view(psi.reshape(ctx.shape), "left", 0)
        pops[i] = np.sum(abs(view[:, 1]) ** 2)
    assert abs(pops.mean() - 1 / (1 + np.exp(2.0))) <= 5 / np.sqrt(m)


def test_infinite_temperature_fixed_point():
    ctx = small_model(8, 1, 1).decoupled()
    rng = np.random.default_rng(5)
    psi = np.zeros(ctx.shape, dtype=complex)
    psi[0, 0, 0] = 1.0
    psi = psi.ravel()
    pops = []
    for _ in range(2000):
        psi = apply_swap(psi, ctx, "right", 0, 1e12, rng)
        pops.append(np.sum(abs(ctx.indexer.spin_view(psi.reshape(ctx.shape), "right", 0)[:, 1]) ** 2))
    assert np.mean(pops) == pytest.approx(0.5, abs=1e-6)


def test_schedule_poisson_statistics():
    rng = np.random.default_rng(1)
    rate, dt, n = 0.3, 2.0, 3
    counts = np.array([len(schedule_events(rate, dt, n, rng)) for _ in range(10000)])
    expected = rate * dt * 2 * n
    assert abs(counts.mean() - expected) <= 3 * np.sqrt(expected / 10000)
    assert schedule_events(0.0, dt, n, rng) == []


def test_schedule_events_are_ordered_and_in_window():
    events = schedule_events(0.5, 4.0, (2, 3), np.random.default_rng(2), t0=10.0)
    times = [e[0] for e in events]
    assert times == sorted(times)
    assert all(10.0 <= t < 14.0 for t in times)
    assert {(s, j) for _, s, j in events} <= {("left", 0), ("left", 1),
                                              ("right", 0), ("right", 1), ("right", 2)}


def test_schedule_spins_independent():
    rng = np.random.default_rng(3)
    m = 10000
    a, b = np.zeros(m), np.zeros(m)
    for i in range(m):
        ev = schedule_events(0.2, 1.0, 2, rng)
        a[i] = sum(1 for _, s, j in ev if (s, j) == ("left", 0))
        b[i] = sum(1 for _, s, j in ev if (s, j) == ("right", 1))
    cov = np.cov(a, b)[0, 1]
    assert abs(cov) <= 4 * np.sqrt(a.var() * b.var() / m)


def test_realization_streams():
    x = realization_rng(7, 0).random(5)
    assert np.array_equal(x, realization_rng(7, 0).random(5))
    assert not np.array_equal(x, realization_rng(7, 1).random(5))


def tiny_run(**kw):
    ctx = small_model(16, 1, 1, box=5.0)
    prop = PropagatorConfig(dt=0.5)
    rcfg = RealizationConfig(n_realizations=2, base_seed=3, t_end=20.0, sample_stride=4)
    return ctx, SwapSchedule(kw.pop("rate", 0.05)), prop, rcfg


def test_run_realization_is_deterministic():
    ctx, swaps, prop, rcfg = tiny_run()
    a = run_realization(ctx, swaps, prop, rcfg, 0, record_density=True)
    b = run_realization(ctx, swaps, prop, rcfg, 0, record_density=True)
    c = run_realization(ctx, swaps, prop, rcfg, 1, record_density=True)
    assert a.equals(b) and not a.equals(c)
    assert len(a) == 11 and a.times[-1] == 20.0
    assert np.all(abs(a.norm - 1) <= 1e-6)
    np.testing.assert_allclose(a.density.sum(axis=1), 1.0, atol=1e-9)
    assert np.all(a.density >= 0)


def test_isolated_eigenstate_keeps_energy():
    ctx, _, prop, rcfg = tiny_run()
    ctx = ctx.decoupled()
    s = run_realization(ctx, SwapSchedule(0.0), prop, rcfg, 0)
    assert np.max(abs(s.E_S - s.E_S[0])) <= 1e-8


def test_decoupling_stops_swaps():
    ctx, swaps, prop, rcfg = tiny_run(rate=0.5)
    s = run_realization(ctx, swaps, prop, rcfg, 0, t_off=10.0)
    assert s.swaps[s.times > 10.0].sum() == 0
    assert s.J_L[-1] == 0.0 and s.J_R[-1] == 0.0


def test_parallel_matches_serial():
    ctx, swaps, prop, rcfg = tiny_run()
    serial = run_realizations(ctx, swaps, prop, rcfg, workers=1)
    parallel = run_realizations(ctx, swaps, prop, rcfg, workers=2)
    assert all(a.equals(b) for a, b in zip(serial, parallel))


def synthetic(values, times=None):
    n = len(values)
    times = np.arange(n, dtype=float) if times is None else times
    v = np.asarray(values, dtype=float)
    return ObservableSeries(times, v, v, -v, 0 * v, v, np.ones(n))


def test_ensemble_average_basics():
    one = ensemble_average([synthetic([1.0, 2.0])])
    assert np.array_equal(one.E_S, [1.0, 2.0]) and np.all(one.stderr["E_S"] == 0)
    two = ensemble_average([synthetic([1.0, 2.0]), synthetic([3.0, 6.0])])
    np.testing.assert_array_equal(two.E_S, [2.0, 4.0])
    assert two.n_realizations == 2
    with pytest.raises(ContractViolation):
        ensemble_average([synthetic([1.0, 2.0]), synthetic([1.0, 2.0], np.array([0.0, 2.0]))])
    with pytest.raises(ContractViolation):
        ensemble_average([])


def test_stderr_scales_with_realizations():
    rng = np.random.default_rng(8)
    errs = []
    for m in (16, 64, 256):
        avg = ensemble_average([synthetic(rng.normal(size=400)) for _ in range(m)])
        errs.append(avg.stderr["E_S"].mean())
    assert errs[0] / errs[1] == pytest.approx(2, rel=0.1)
    assert errs[1] / errs[2] == pytest.approx(2, rel=0.1)


def test_steady_average():
    s = [synthetic([0.0, 1.0, 3.0, 5.0]), synthetic([0.0, 1.0, 5.0, 7.0])]
    est = steady_average(s, "E_S", 2.0)
    assert est.mean == 5.0 and est.stderr == pytest.approx(1.0)
    with pytest.raises(ContractViolation):
        steady_average(s, "E_S", 10.0)
