"""Stochastic thermal layer: swaps with secondary-bath spins and realizations.

A swap exchanges primary spin ``j`` with a fresh secondary spin drawn from
the thermal random-phase ensemble and discards the outgoing spin. Within a
pure-state realization this is done by a projective readout of spin ``j``
in its energy basis followed by re-injection of the fresh spinor, which
keeps the Hilbert-space dimension fixed and the norm at one.
"""
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, ContractViolation
from .hamiltonian import _as_composite
from .observables import (SERIES_FIELDS, ObservableSeries, SteadyEstimate, heat_current,
                          instantaneous_power, probability_density, system_energy)
from .propagator import ground_state, propagate_step
from .spinbath import product_bath_state, sample_thermal_spin


@dataclass(frozen=True)
class SwapSchedule:
    rate: float = 5e-3  # events per spin per atomic time unit

    def __post_init__(self):
        if self.rate < 0:
            raise ConfigurationError(f"swap rate must be >= 0, got {self.rate}")


@dataclass(frozen=True)
class RealizationConfig:
    n_realizations: int = 10
    base_seed: int = 0
    t_end: float = 1000.0
    sample_stride: int = 1

    def __post_init__(self):
        if self.n_realizations < 1:
            raise ConfigurationError("need at least one realization")
        if self.sample_stride < 1:
            raise ConfigurationError("sample_stride must be >= 1")
        if not self.t_end > 0:
            raise ConfigurationError("t_end must be positive")


def realization_rng(base_seed, index):
    """Independent, reproducible stream for realization ``index``."""
    return np.random.default_rng(np.random.SeedSequence([int(base_seed), int(index)]))


def apply_swap(psi, ctx, side, j, temperature, rng, sample=None):
    """Swap primary spin ``j`` on ``side`` with a thermal secondary spin.

    ``sample`` forces the incoming spinor; by default it is drawn from the
    random-phase thermal state at ``temperature``.
    """
    x = _as_composite(psi, ctx)
    view = ctx.indexer.spin_view(x, side, j)
    p_up = float(np.sum(np.abs(view[:, 1]) ** 2))
    p_down = float(np.sum(np.abs(view[:, 0]) ** 2))
    up = rng.random() * (p_up + p_down) < p_up
    kept = view[:, 1] if up else view[:, 0]
    weight = p_up if up else p_down
    if weight <= 0.0:
        raise ContractViolation("swap selected a branch with zero probability")
    kept = kept / np.sqrt(weight)
    if sample is None:
        sample = sample_thermal_spin(ctx.bath(side).omegas[j], temperature, rng)
    out = np.empty_like(view, dtype=complex)
    out[:, 0] = sample.ground * kept
    out[:, 1] = sample.excited * kept
    return out.reshape(np.shape(psi))


def schedule_events(rate, dt, n_spins_per_side, rng, t0=0.0):
    """Poisson swap events in ``[t0, t0 + dt)`` for every spin of both baths.

    ``n_spins_per_side`` is a count shared by both baths or a
    ``(n_left, n_right)`` pair. Returns a time-ordered list of ``(time, side, j)``.
    """
    if rate == 0:
        return []
    sizes = np.broadcast_to(n_spins_per_side, (2,))
    events = []
    for side, n in zip(("left", "right"), sizes):
        counts = rng.poisson(rate * dt, size=int(n))
        for j, c in enumerate(counts):
            for t in t0 + dt * rng.random(c):
                events.append((float(t), side, j))
    events.sort(key=lambda e: e[0])
    return events


def initial_state(ctx, chi, rng):
    """System state ``chi`` times freshly sampled thermal spins on both baths."""
    def bath(side):
        b = ctx.bath(side)
        return product_bath_state(
            [sample_thermal_spin(w, b.temperature, rng).vector for w in b.omegas])
    return (bath("right")[:, None, None] * bath("left")[None, :, None] * chi).ravel()


def run_realization(ctx, swaps, prop, rcfg, index, t_off=None, record_density=False,
                    chi=None):
    """Propagate one stochastic realization and record its observables.

    The initial state is the system ground state (or ``chi``) times thermal
    bath spins. Each step is a Chebyshev propagation followed by the swaps
    scheduled inside that step. From ``t_off`` on, the system-bath windows
    and the drive are switched off and no further swaps happen.
    Deterministic in ``(rcfg.base_seed, index)``.
    """
    rng = realization_rng(rcfg.base_seed, index)
    if chi is None:
        chi, _ = ground_state(ctx)
    psi = initial_state(ctx, chi, rng)
    n_steps = int(round(rcfg.t_end / prop.dt))
    n_left, n_right = ctx.left_bath.n_modes, ctx.right_bath.n_modes
    decoupled = ctx.decoupled() if t_off is not None else None

    records = {k: [] for k in ("times", *SERIES_FIELDS, "swaps")}
    densities = []

    def record(t, model, n_swaps):
        records["times"].append(t)
        records["E_S"].append(system_energy(psi, model))
        records["J_L"].append(heat_current(psi, model, "left"))
        records["J_R"].append(heat_current(psi, model, "right"))
        records["P"].append(instantaneous_power(psi, model, t))
        dens = probability_density(psi, model)
        records["mean_R"].append(float(np.dot(dens, model.grid.r)))
        records["norm"].append(float(np.sqrt(dens.sum())))
        records["swaps"].append(n_swaps)
        if record_density:
            densities.append(dens)

    record(0.0, ctx, 0)
    pending = 0
    for step in range(n_steps):
        t = step * prop.dt
        coupled = t_off is None or t < t_off
        model = ctx if coupled else decoupled
        psi = propagate_step(psi, model, t, prop)
        if coupled:
            for _, side, j in schedule_events(swaps.rate, prop.dt, (n_left, n_right), rng, t):
                psi = apply_swap(psi, ctx, side, j, ctx.bath(side).temperature, rng)
                pending += 1
        if (step + 1) % rcfg.sample_stride == 0:
            t_next = (step + 1) * prop.dt
            record(t_next, ctx if (t_off is None or t_next < t_off) else decoupled, pending)
            pending = 0

    series = ObservableSeries(
        times=np.array(records["times"]),
        **{k: np.array(records[k]) for k in SERIES_FIELDS},
        swaps=np.array(records["swaps"]),
        density=np.array(densities) if record_density else None,
        meta={"realization": int(index), "base_seed": int(rcfg.base_seed)})
    return series


def _run_one(args):
    return run_realization(*args[0], **args[1])


def run_realizations(ctx, swaps, prop, rcfg, workers=1, **kwargs):
    """All realizations of ``rcfg``, serially or on a process pool."""
    if kwargs.get("chi") is None:
        kwargs["chi"] = ground_state(ctx)[0]
    jobs = [((ctx, swaps, prop, rcfg, i), kwargs) for i in range(rcfg.n_realizations)]
    if workers <= 1:
        return [_run_one(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_one, jobs))


def ensemble_average(series_list):
    """Pointwise mean and standard error of every recorded observable."""
    if not series_list:
        raise ContractViolation("nothing to average")
    times = series_list[0].times
    for s in series_list[1:]:
        if not np.array_equal(s.times, times):
            raise ContractViolation("series have different time axes")
    m = len(series_list)
    means, errs = {}, {}
    for k in SERIES_FIELDS:
        stack = np.array([getattr(s, k) for s in series_list])
        means[k] = stack.mean(axis=0)
        errs[k] = stack.std(axis=0, ddof=1) / np.sqrt(m) if m > 1 else np.zeros_like(times)
    density = None
    if all(s.density is not None for s in series_list):
        density = np.mean([s.density for s in series_list], axis=0)
    swaps = None
    if all(s.swaps is not None for s in series_list):
        swaps = np.sum([s.swaps for s in series_list], axis=0)
    return ObservableSeries(times=times.copy(), **means, swaps=swaps, density=density,
                            stderr=errs, n_realizations=m)


def steady_average(series_list, key, t_start, t_stop=None):
    """Time average of ``key`` over ``[t_start, t_stop]`` per realization, then
    mean and standard error across realizations."""
    vals = []
    for s in series_list:
        sel = s.times >= t_start
        if t_stop is not None:
            sel &= s.times <= t_stop
        if not sel.any():
            raise ContractViolation("averaging window contains no records")
        vals.append(np.mean(getattr(s, key)[sel]))
    vals = np.array(vals)
    err = vals.std(ddof=1) / np.sqrt(len(vals)) if len(vals) > 1 else 0.0
    return SteadyEstimate(float(vals.mean()), float(err), True, float(t_start))
