"""Thermodynamic bookkeeping for the composite wavefunction.

Sign convention: every heat current and the drive power are counted
positive when energy flows *into the system*. Entropy production and the
coefficient of performance negate explicitly where the bath view is needed.
"""
from dataclasses import dataclass, field, fields

import numpy as np

from .errors import ContractViolation, SteadyStateError
from .grid import apply_kinetic, apply_momentum
from .hamiltonian import _as_composite, apply_bath_operator
from .units import AU_TIME_FS, kelvin_to_hartree

SERIES_FIELDS = ("E_S", "J_L", "J_R", "P", "mean_R", "norm")


@dataclass
class ObservableSeries:
    """Time series recorded along one realization or averaged over many.

    ``swaps[i]`` counts swap events applied since record ``i - 1``.
    Averaged series carry standard errors in ``stderr`` (same keys as
    ``SERIES_FIELDS``) and the number of realizations in ``n_realizations``.
    """
    times: np.ndarray
    E_S: np.ndarray
    J_L: np.ndarray
    J_R: np.ndarray
    P: np.ndarray
    mean_R: np.ndarray
    norm: np.ndarray
    swaps: np.ndarray | None = None
    density: np.ndarray | None = None
    stderr: dict | None = None
    n_realizations: int = 1
    meta: dict = field(default_factory=dict)

    @property
    def times_fs(self):
        return self.times * AU_TIME_FS

    def __len__(self):
        return len(self.times)

    def slice(self, mask):
        """Records selected by ``mask`` (boolean or index array)."""
        def cut(a):
            return None if a is None else a[mask]
        return ObservableSeries(
            self.times[mask], *(getattr(self, k)[mask] for k in SERIES_FIELDS),
            swaps=cut(self.swaps), density=cut(self.density),
            stderr=None if self.stderr is None else {k: v[mask] for k, v in self.stderr.items()},
            n_realizations=self.n_realizations, meta=dict(self.meta))

    def equals(self, other):
        """Bit-exact comparison of every recorded array."""
        for f in fields(self):
            a, b = getattr(self, f.name), getattr(other, f.name)
            if isinstance(a, np.ndarray) or isinstance(b, np.ndarray):
                if a is None or b is None or not np.array_equal(a, b):
                    return False
            elif isinstance(a, dict) and f.name == "stderr":
                if a.keys() != b.keys() or not all(np.array_equal(a[k], b[k]) for k in a):
                    return False
            elif a != b:
                return False
        return True


def system_energy(psi, ctx):
    """<psi|T + V|psi>, the energy of the molecular coordinate alone."""
    x = _as_composite(psi, ctx)
    h = apply_kinetic(x, ctx.grid) + ctx.potential * x
    return float(np.real(np.vdot(x, h)))


def drive_energy(psi, ctx, t):
    """Interaction energy with the field, f(t) <mu R>."""
    f = ctx.drive.field(t)
    return f * float(np.dot(probability_density(psi, ctx), ctx.dipole_r)) if f else 0.0


def probability_density(psi, ctx):
    x = _as_composite(psi, ctx)
    return np.sum(np.abs(x) ** 2, axis=(0, 1))


def position_expectation(psi, ctx):
    return float(np.dot(probability_density(psi, ctx), ctx.grid.r))


def heat_current(psi, ctx, side):
    """Energy flow from one bath into the system.

    The contribution of ``H_SB`` to dE_S/dt,
    ``-(1/2m) <(P f' + f' P) (x) sum_j lambda_j sigma^x_j>``, using the
    spectral momentum and the analytic window derivative.
    """
    if ctx.window(side).amplitude == 0:
        return 0.0
    x = _as_composite(psi, ctx)
    fp = ctx.window_derivatives[side]
    phi = apply_bath_operator(x, ctx, side)
    a = np.vdot(apply_momentum(x, ctx.grid), fp * phi) + np.vdot(fp * x, apply_momentum(phi, ctx.grid))
    return float(-np.real(a) / (2 * ctx.grid.mass))


def instantaneous_power(psi, ctx, t):
    """Work done by the field, <mu R> df/dt = -<mu R> eps nu sin(nu t)."""
    rate = ctx.drive.field_rate(t)
    if rate == 0.0:
        return 0.0
    return ctx.surface.mu * position_expectation(psi, ctx) * rate


def entropy_production_rate(j_hot, j_cold, t_hot, t_cold):
    """Entropy production of the two baths from into-system currents.

    Each bath receives ``-J``; temperatures are in kelvin and converted to
    hartree so the result is in units of k_B per atomic time unit.
    """
    return -j_hot / kelvin_to_hartree(t_hot) - j_cold / kelvin_to_hartree(t_cold)


def coefficient_of_performance(j_cold, power):
    """J_c / P, or None when no net power is consumed."""
    if not power > 0:
        return None
    return j_cold / power


def carnot_cop(t_hot, t_cold):
    return t_cold / (t_hot - t_cold)


@dataclass(frozen=True)
class SteadyEstimate:
    """Steady-state time- and realization-averaged quantity."""
    mean: float
    stderr: float
    steady: bool = True
    t_steady: float | None = None


def rectification_ratio(forward, swapped):
    """J_forward / J_swapped with first-order error propagation.

    Both currents are measured in their own hot->cold direction. Returns
    ``(ratio, stderr)``.
    """
    for name, run in (("forward", forward), ("swapped", swapped)):
        if not run.steady:
            raise SteadyStateError(f"{name} run did not reach a steady state; "
                                   "extend t_end or relax the detection tolerances")
    ratio = forward.mean / swapped.mean
    err = abs(ratio) * np.hypot(forward.stderr / forward.mean, swapped.stderr / swapped.mean)
    return ratio, err


def windowed_slope(times, values):
    t = times - times.mean()
    return float(np.dot(t, values - values.mean()) / np.dot(t, t))


def detect_steady_state(series, window, slope_tol=1e-9, match_tol=0.1, driven=False):
    """Earliest record time after which every window looks stationary.

    A window starting at ``t`` and spanning ``window`` a.u. is stationary when
    the least-squares slope of E_S is below ``slope_tol`` and, for undriven
    runs, ``|<J_L> + <J_R>| <= match_tol * max(|<J_L>|, |<J_R>|)``.
    Returns None if no such time exists.
    """
    times = np.asarray(series.times)
    if times[-1] - times[0] < 2 * window:
        raise ContractViolation("series shorter than two steady-state windows")
    starts = np.flatnonzero(times + window <= times[-1] + 1e-9 * window)
    ok = np.zeros(len(starts), dtype=bool)
    for n, i in enumerate(starts):
        sel = (times >= times[i]) & (times <= times[i] + window)
        good = abs(windowed_slope(times[sel], series.E_S[sel])) < slope_tol
        if good and not driven:
            jl, jr = series.J_L[sel].mean(), series.J_R[sel].mean()
            good = abs(jl + jr) <= match_tol * max(abs(jl), abs(jr))
        ok[n] = good
    return _earliest_stable(times, starts, ok)


def _earliest_stable(times, starts, ok):
    # earliest start from which every later window passes
    bad = np.flatnonzero(~ok)
    first = 0 if bad.size == 0 else bad[-1] + 1
    if first >= len(starts):
        return None
    return float(times[starts[first]])


def detect_steady_state_ensemble(series_list, window, slope_tol=1e-9, match_tol=0.1,
                                 n_sigma=3.0, driven=False):
    """:func:`detect_steady_state` for a set of stochastic realizations.

    The slope test is applied to the ensemble-mean E_S. The balance test
    passes when ``|<J_L + J_R>|`` is within ``match_tol * max(|<J_L>|, |<J_R>|)``
    or within ``n_sigma`` standard errors of zero, the error taken from the
    scatter of the per-realization window means.
    """
    times = np.asarray(series_list[0].times)
    if times[-1] - times[0] < 2 * window:
        raise ContractViolation("series shorter than two steady-state windows")
    e_s = np.mean([s.E_S for s in series_list], axis=0)
    starts = np.flatnonzero(times + window <= times[-1] + 1e-9 * window)
    m = len(series_list)
    slopes, sums, errs, scale = [], [], [], []
    for i in starts:
        sel = (times >= times[i]) & (times <= times[i] + window)
        slopes.append(windowed_slope(times[sel], e_s[sel]))
        jl = np.array([s.J_L[sel].mean() for s in series_list])
        jr = np.array([s.J_R[sel].mean() for s in series_list])
        total = jl + jr
        sums.append(total.mean())
        errs.append(total.var(ddof=1) / m if m > 1 else 0.0)
        scale.append(max(abs(jl.mean()), abs(jr.mean())))
    ok = np.abs(slopes) < slope_tol
    if not driven:
        # one noise level for all windows; per-window errors from a handful
        # of realizations are themselves too noisy to threshold on
        err = np.sqrt(np.median(errs))
        limit = np.maximum(match_tol * np.array(scale), n_sigma * err)
        ok &= np.abs(sums) <= limit
    return _earliest_stable(times, starts, ok)
