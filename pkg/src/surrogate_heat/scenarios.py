"""Experiment configuration, the reproducible experiments and result files.

Every experiment takes an :class:`ExperimentConfig` and returns a
:class:`Report` holding sweep tables (one row per point, each estimate with
its standard error) and ensemble-averaged time series. :func:`emit_results`
writes them as CSV files plus a YAML manifest from which
:func:`rerun_from_manifest` reproduces every number.

Side conventions: the left well is the low-frequency side. In the pump
experiments the cold bath sits on the left, so the cooling current is
``J_L``. The net transported current is ``J = (J_L - J_R) / 2``, positive
for energy flowing left to right.
"""
import csv
import hashlib
import os
import platform
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal, Optional

import numpy as np
import scipy
import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from . import __version__
from .errors import ConfigurationError, SteadyStateError
from .grid import GridSpec, build_grid, check_edge_density
from .hamiltonian import DriveParams, build_context
from .observables import (SERIES_FIELDS, SteadyEstimate, carnot_cop, detect_steady_state_ensemble,
                          rectification_ratio)
from .potential import CouplingWindow, double_well
from .propagator import PropagatorConfig
from .spinbath import build_spectrum
from .stochastic import (RealizationConfig, SwapSchedule, ensemble_average,
                         run_realizations)
from .units import AU_TIME_FS, kelvin_to_hartree

KINDS = ("transport", "rectifier", "pump_amplitude_sweep", "pump_coupling_sweep",
         "coherence_probe")


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class ModelSettings(_Section):
    """Physical model. Energies in hartree, lengths in bohr, temperatures in kelvin."""
    n_points: int = 64
    r_min: float = -16.0
    r_max: float = 16.0
    mass: float = Field(2000.0, gt=0)

    omega_left: float = Field(1e-4, gt=0)
    omega_right: float = Field(2e-4, gt=0)
    center_left: float = -1.5
    center_right: float = 1.5
    coupling_amplitude: float = Field(2e-6, ge=0)
    coupling_sigma: float = Field(0.5, gt=0)
    mu: float = 1.0

    n_spins: int = Field(4, ge=1)
    omega_min: float = Field(7.7e-5, gt=0)
    omega_max: float = Field(3.77e-4, gt=0)
    lam: float = Field(0.012, gt=0)
    lambda_norm: Literal["paper", "sqrt_density"] = "sqrt_density"
    window_gamma: float = Field(0.5, gt=0)
    window_amplitude: float = Field(0.5, ge=0)
    t_left: float = Field(15.0, gt=0)
    t_right: float = Field(15.0, gt=0)

    epsilon: float = Field(0.0, ge=0)
    nu: Optional[float] = Field(None, gt=0)

    @model_validator(mode="after")
    def _consistent(self):
        self.grid_spec()
        self.surface()
        self.spectrum("left")
        return self

    def grid_spec(self):
        return GridSpec(self.n_points, self.r_min, self.r_max, self.mass)

    def surface(self):
        return double_well(self.omega_left, self.omega_right, self.center_left,
                           self.center_right, amplitude=self.coupling_amplitude,
                           sigma=self.coupling_sigma, mass=self.mass, mu=self.mu)

    def spectrum(self, side):
        t = self.t_left if side == "left" else self.t_right
        return build_spectrum(self.n_spins, self.omega_min, self.omega_max, self.lam, t,
                              side, self.lambda_norm)

    @property
    def drive_frequency(self):
        """nu, defaulting to the resonance |omega_L - omega_R|."""
        return self.nu if self.nu is not None else abs(self.omega_left - self.omega_right)

    def drive(self):
        return DriveParams(self.epsilon, self.drive_frequency, self.epsilon > 0)

    def context(self):
        return build_context(
            build_grid(self.grid_spec()), self.surface(),
            self.spectrum("left"), self.spectrum("right"),
            CouplingWindow(self.center_left, self.window_gamma, self.window_amplitude),
            CouplingWindow(self.center_right, self.window_gamma, self.window_amplitude),
            self.drive())


class PropagationSettings(_Section):
    dt: float = Field(1000.0, gt=0)
    tolerance: float = Field(1e-12, gt=0, lt=1)
    max_order: int = Field(4000, ge=1)
    # ceiling on nu * dt whenever the drive is on
    max_drive_phase_step: float = Field(0.05, gt=0)

    def propagator(self, nu=None):
        dt = self.dt
        if nu:
            dt = min(dt, self.max_drive_phase_step / nu)
        return PropagatorConfig(dt, self.tolerance, self.max_order)


class StochasticSettings(_Section):
    swap_rate: float = Field(1e-5, ge=0)
    n_realizations: int = Field(10, ge=1)
    base_seed: int = 0
    t_end: float = Field(3e6, gt=0)
    record_interval: float = Field(5000.0, gt=0)


class SteadySettings(_Section):
    window: float = Field(3e5, gt=0)
    slope_tol: float = Field(1e-10, gt=0)
    match_tol: float = Field(0.1, gt=0)
    # current balance also accepted within this many standard errors of zero
    n_sigma: float = Field(3.0, ge=0)
    # averages are taken over [average_from * t_end, t_end]
    average_from: float = Field(0.3, ge=0, lt=1)


class TransportSettings(_Section):
    t_left_values: list[float] = Field(default_factory=lambda: [5.0, 15.0, 25.0], min_length=1)
    t_right: float = Field(15.0, gt=0)
    convergence_counts: list[int] = Field(default_factory=lambda: [2, 6, 10, 12])


class RectifierSettings(_Section):
    ratios: list[float] = Field(default_factory=lambda: [0.5, 0.75, 1.0, 1.5], min_length=1)
    t_cold: float = Field(5.0, gt=0)
    t_hot: float = Field(25.0, gt=0)


class PumpSettings(_Section):
    t_cold: float = Field(10.0, gt=0)
    t_hot: float = Field(25.0, gt=0)
    epsilons: list[float] = Field(default_factory=lambda: [0.0, 0.1, 0.25, 0.5, 1.0],
                                  min_length=1)
    window_amplitude: float = Field(0.5, ge=0)
    amplitudes: list[float] = Field(default_factory=lambda: [0.1, 0.25, 0.5, 1.0, 2.0],
                                    min_length=1)
    epsilon: float = Field(0.25, ge=0)


class CoherenceSettings(_Section):
    t_off: float = Field(2e6, gt=0)


class ExperimentConfig(_Section):
    kind: Literal[KINDS] = "transport"
    model: ModelSettings = ModelSettings()
    propagation: PropagationSettings = PropagationSettings()
    stochastic: StochasticSettings = StochasticSettings()
    steady: SteadySettings = SteadySettings()
    transport: TransportSettings = TransportSettings()
    rectifier: RectifierSettings = RectifierSettings()
    pump: PumpSettings = PumpSettings()
    coherence: CoherenceSettings = CoherenceSettings()
    out_dir: str = "results"
    workers: Optional[int] = Field(None, ge=1)

    @model_validator(mode="after")
    def _sweeps(self):
        if self.rectifier.t_hot <= self.rectifier.t_cold:
            raise ValueError("rectifier.t_hot must exceed rectifier.t_cold")
        if self.pump.t_hot <= self.pump.t_cold:
            raise ValueError("pump.t_hot must exceed pump.t_cold")
        return self

    def with_updates(self, **sections):
        """Copy with some keys replaced, e.g. ``with_updates(model={'t_left': 5})``."""
        data = self.model_dump()
        for name, value in sections.items():
            if isinstance(value, dict):
                data[name].update(value)
            else:
                data[name] = value
        return ExperimentConfig.model_validate(data)


def _format_errors(err):
    lines = []
    for e in err.errors():
        path = ".".join(str(p) for p in e["loc"]) or "<root>"
        lines.append(f"{path}: {e['msg']}")
    return lines


def validate_config(data):
    """ExperimentConfig from a plain mapping; every problem is reported at once."""
    try:
        return ExperimentConfig.model_validate(data or {})
    except ValidationError as err:
        raise ConfigurationError("invalid configuration:\n  " +
                                 "\n  ".join(_format_errors(err))) from None


def load_config(path):
    text = Path(path).read_text(encoding="utf-8")
    data = yaml.safe_load(text) if text.strip() else {}
    if data is not None and not isinstance(data, dict):
        raise ConfigurationError(f"{path}: top level must be a mapping")
    return validate_config(data)


# ---------------------------------------------------------------- measurement

@dataclass
class Measurement:
    """All realizations of one model point with their steady-state estimates."""
    label: str
    series: list
    average: object
    estimates: dict
    t_steady: Optional[float]
    t_average: float
    relaxation_time: Optional[float]


@dataclass
class Report:
    kind: str
    config: ExperimentConfig
    tables: dict = field(default_factory=dict)
    series: dict = field(default_factory=dict)
    profiles: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)


def _workers(cfg):
    return cfg.workers or os.cpu_count() or 1


def _estimate(values):
    values = np.asarray(values, dtype=float)
    m = len(values)
    err = values.std(ddof=1) / np.sqrt(m) if m > 1 else 0.0
    return SteadyEstimate(float(values.mean()), float(err))


def _window_mask(times, t_start, t_stop, period=None):
    """Records in [t_start, t_stop]; with a drive, trimmed to whole periods."""
    if period:
        n = np.floor((t_stop - t_start) / period)
        if n >= 1:
            t_stop = t_start + n * period
            return (times >= t_start) & (times < t_stop)
    return (times >= t_start) & (times <= t_stop)


def relaxation_time(times, energy, e_final):
    """First time after which E_S stays within 1/e of its initial offset from ``e_final``."""
    offset = abs(energy[0] - e_final)
    if offset == 0:
        return 0.0
    outside = np.flatnonzero(np.abs(energy - e_final) > offset / np.e)
    if outside.size == 0:
        return float(times[0])
    last = outside[-1]
    return float(times[last + 1]) if last + 1 < len(times) else None


def per_realization_averages(series_list, mask, t_left, t_right):
    """Time averages of every observable per realization inside ``mask``."""
    out = {k: [] for k in ("E_S", "J_L", "J_R", "J", "P", "mean_R", "sigma")}
    for s in series_list:
        jl, jr = s.J_L[mask].mean(), s.J_R[mask].mean()
        out["E_S"].append(s.E_S[mask].mean())
        out["J_L"].append(jl)
        out["J_R"].append(jr)
        out["J"].append(0.5 * (jl - jr))
        out["P"].append(s.P[mask].mean())
        out["mean_R"].append(s.mean_R[mask].mean())
        # bath entropy production from into-system currents
        out["sigma"].append(-jl / kelvin_to_hartree(t_left) - jr / kelvin_to_hartree(t_right))
    return {k: np.array(v) for k, v in out.items()}


def measure(cfg, settings, label, t_off=None):
    """Run all realizations for one ``ModelSettings`` and reduce them."""
    ctx = settings.context()
    driven = ctx.drive.enabled
    nu = settings.drive_frequency if driven else None
    prop = cfg.propagation.propagator(nu)
    stride = max(1, int(round(cfg.stochastic.record_interval / prop.dt)))
    n_steps = int(round(cfg.stochastic.t_end / prop.dt))
    rcfg = RealizationConfig(cfg.stochastic.n_realizations, cfg.stochastic.base_seed,
                             n_steps * prop.dt, stride)
    series = run_realizations(ctx, SwapSchedule(cfg.stochastic.swap_rate), prop, rcfg,
                              workers=_workers(cfg), t_off=t_off, record_density=True)
    avg = ensemble_average(series)
    avg.meta.update(label=label, dt=prop.dt)
    t_end = avg.times[-1]
    t_stop = t_off if t_off is not None else t_end
    t_avg = cfg.steady.average_from * t_stop

    steady_cfg = cfg.steady
    t_steady = None
    if t_stop - avg.times[0] >= 2 * steady_cfg.window:
        sel = avg.times <= t_stop
        trimmed = [s.slice(sel) for s in series]
        t_steady = detect_steady_state_ensemble(trimmed, steady_cfg.window, steady_cfg.slope_tol,
                                                steady_cfg.match_tol, steady_cfg.n_sigma,
                                                driven=driven)
    period = 2 * np.pi / nu if driven else None
    mask = _window_mask(avg.times, t_avg, t_stop, period)
    per = per_realization_averages(series, mask, settings.t_left, settings.t_right)
    estimates = {k: _estimate(v) for k, v in per.items()}
    estimates = {k: SteadyEstimate(e.mean, e.stderr, t_steady is not None, t_steady)
                 for k, e in estimates.items()}
    relax = relaxation_time(avg.times[avg.times <= t_stop], avg.E_S[avg.times <= t_stop],
                            estimates["E_S"].mean)

    density = avg.density[mask].mean(axis=0)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        check_edge_density(density, ctx.grid)
    m = Measurement(label, series, avg, estimates, t_steady, t_avg, relax)
    m.density = density
    m.grid_r = ctx.grid.r
    m.edge_warning = [str(w.message) for w in caught]
    m.per_realization = per
    return m


def _row(prefix_values, estimates, keys):
    row = dict(prefix_values)
    for k in keys:
        row[k] = estimates[k].mean
        row[k + "_err"] = estimates[k].stderr
    return row


def _attach(report, m):
    report.series[m.label] = m.average
    report.profiles[m.label] = (m.grid_r, m.density)
    report.notes.extend(f"{m.label}: {w}" for w in m.edge_warning)
    if m.t_steady is None:
        report.notes.append(f"{m.label}: no steady state detected before the averaging "
                            "window; estimates are flagged steady=False")


# ---------------------------------------------------------------- experiments

def run_transport(cfg):
    """Steady currents versus T_L at fixed T_R, with realization-count convergence."""
    report = Report("transport", cfg)
    rows, conv = [], []
    for t_left in cfg.transport.t_left_values:
        settings = cfg.model.model_copy(update={"t_left": t_left, "t_right": cfg.transport.t_right,
                                                "epsilon": 0.0})
        m = measure(cfg, settings, f"transport_TL{t_left:g}")
        _attach(report, m)
        row = _row({"t_left": t_left, "t_right": cfg.transport.t_right}, m.estimates,
                   ("J", "J_L", "J_R", "sigma", "E_S"))
        row.update(steady=m.t_steady is not None, t_steady=m.t_steady,
                   relaxation_time=m.relaxation_time,
                   relaxation_time_fs=None if m.relaxation_time is None
                   else m.relaxation_time * AU_TIME_FS,
                   n_realizations=len(m.series))
        rows.append(row)
        for count in cfg.transport.convergence_counts:
            if count <= len(m.series):
                est = _estimate(m.per_realization["J"][:count])
                sig = _estimate(m.per_realization["sigma"][:count])
                conv.append({"t_left": t_left, "n_realizations": count,
                             "J": est.mean, "J_err": est.stderr,
                             "sigma": sig.mean, "sigma_err": sig.stderr})
    report.tables["transport"] = rows
    report.tables["convergence"] = conv
    return report


def run_rectifier_sweep(cfg):
    """Forward (hot bath on the left) and reversed runs for each omega_L / omega_R."""
    report = Report("rectifier", cfg)
    rc = cfg.rectifier
    rows = []
    for ratio in rc.ratios:
        base = cfg.model.model_copy(update={"omega_left": ratio * cfg.model.omega_right,
                                            "epsilon": 0.0})
        base = ModelSettings.model_validate(base.model_dump())
        fwd = measure(cfg, base.model_copy(update={"t_left": rc.t_hot, "t_right": rc.t_cold}),
                      f"rectifier_r{ratio:g}_forward")
        bwd = measure(cfg, base.model_copy(update={"t_left": rc.t_cold, "t_right": rc.t_hot}),
                      f"rectifier_r{ratio:g}_reverse")
        for m in (fwd, bwd):
            _attach(report, m)
        j_fwd = fwd.estimates["J"]
        j_bwd = bwd.estimates["J"]
        # both measured positive in their own hot -> cold direction
        j_bwd = SteadyEstimate(-j_bwd.mean, j_bwd.stderr, j_bwd.steady, j_bwd.t_steady)
        row = {"ratio": ratio, "J_forward": j_fwd.mean, "J_forward_err": j_fwd.stderr,
               "J_reverse": j_bwd.mean, "J_reverse_err": j_bwd.stderr,
               "steady": j_fwd.steady and j_bwd.steady}
        try:
            r, err = rectification_ratio(j_fwd, j_bwd)
        except SteadyStateError as exc:   # flagged row, no number
            r, err = float("nan"), float("nan")
            report.notes.append(f"ratio {ratio:g}: {exc}")
        row.update(rectification=r, rectification_err=err,
                   product=r * ratio, product_err=err * ratio)
        rows.append(row)
    report.tables["rectifier"] = rows
    return report


def _pump_row(m, t_cold, t_hot, extra):
    est = m.estimates
    j_c, p = est["J_L"], est["P"]
    row = dict(extra)
    row.update(_row({}, est, ("J_L", "J_R", "P", "sigma")))
    row["J_c"], row["J_c_err"] = j_c.mean, j_c.stderr
    row["J_h"], row["J_h_err"] = est["J_R"].mean, est["J_R"].stderr
    if p.mean > 0:
        cop = j_c.mean / p.mean
        cop_err = abs(cop) * np.hypot(j_c.stderr / j_c.mean if j_c.mean else 0.0,
                                      p.stderr / p.mean)
        if j_c.mean == 0:
            cop_err = j_c.stderr / p.mean
    else:
        cop, cop_err = None, None
    row.update(cop=cop, cop_err=cop_err, carnot_cop=carnot_cop(t_hot, t_cold),
               steady=m.t_steady is not None, t_steady=m.t_steady)
    return row


def _pump_settings(cfg, epsilon, amplitude):
    pc = cfg.pump
    return cfg.model.model_copy(update={"t_left": pc.t_cold, "t_right": pc.t_hot,
                                        "epsilon": epsilon, "window_amplitude": amplitude})


def run_pump_sweep(cfg):
    """Cooling current, power and COP over driving amplitudes or coupling strengths."""
    pc = cfg.pump
    if cfg.kind == "pump_coupling_sweep":
        report = Report("pump_coupling_sweep", cfg)
        points = [(pc.epsilon, a, {"epsilon": pc.epsilon, "window_amplitude": a})
                  for a in pc.amplitudes]
    else:
        report = Report("pump_amplitude_sweep", cfg)
        points = [(e, pc.window_amplitude, {"epsilon": e, "window_amplitude": pc.window_amplitude})
                  for e in pc.epsilons]
    rows = []
    for eps, amp, extra in points:
        m = measure(cfg, _pump_settings(cfg, eps, amp), f"pump_eps{eps:g}_G{amp:g}")
        _attach(report, m)
        rows.append(_pump_row(m, pc.t_cold, pc.t_hot, extra))
    report.tables["pump"] = rows
    j = np.array([r["J_c"] for r in rows])
    summary = {"threshold_between": None, "best_index": int(np.argmax(j)),
               "best_value": float(j.max())}
    crossings = np.flatnonzero((j[:-1] < 0) & (j[1:] > 0))
    if crossings.size:
        i = int(crossings[0])
        summary["threshold_between"] = (points[i][0], points[i + 1][0]) \
            if report.kind == "pump_amplitude_sweep" else (points[i][1], points[i + 1][1])
    report.tables["pump_summary"] = [
        {"threshold_low": None if summary["threshold_between"] is None
         else summary["threshold_between"][0],
         "threshold_high": None if summary["threshold_between"] is None
         else summary["threshold_between"][1],
         "max_cooling_index": summary["best_index"], "max_cooling": summary["best_value"]}]
    return report


def run_coherence_probe(cfg):
    """Driven pump run with bath coupling and drive switched off at ``t_off``."""
    pc = cfg.pump
    t_off = cfg.coherence.t_off
    report = Report("coherence_probe", cfg)
    m = measure(cfg, _pump_settings(cfg, pc.epsilon, pc.window_amplitude), "coherence",
                t_off=t_off)
    _attach(report, m)
    if m.t_steady is None or m.t_steady > t_off:
        report.notes.append("t_off precedes the detected steady state")
        warnings.warn("coherence probe: t_off precedes the detected steady state", RuntimeWarning)
    avg = m.average
    pre = (avg.times >= cfg.steady.average_from * t_off) & (avg.times < t_off)
    post = avg.times > t_off
    noise_floor = float(np.mean(avg.stderr["mean_R"][pre] ** 2))
    post_var = float(np.var(avg.mean_R[post]))
    norms = np.array([s.norm[post] for s in m.series])
    report.tables["coherence"] = [{
        "t_off": t_off, "post_variance": post_var, "noise_floor": noise_floor,
        "variance_ratio": post_var / noise_floor if noise_floor > 0 else float("inf"),
        "norm_drift": float(np.max(np.abs(norms - norms[:, :1]))),
        "steady": m.t_steady is not None and m.t_steady <= t_off,
        "t_steady": m.t_steady}]
    return report


RUNNERS = {
    "transport": run_transport,
    "rectifier": run_rectifier_sweep,
    "pump_amplitude_sweep": run_pump_sweep,
    "pump_coupling_sweep": run_pump_sweep,
    "coherence_probe": run_coherence_probe,
}


def run_experiment(cfg):
    return RUNNERS[cfg.kind](cfg)


# ---------------------------------------------------------------- output

SERIES_UNITS = {"time_au": "a.u.", "time_fs": "fs", "E_S": "hartree",
                "J_L": "hartree/a.u.", "J_R": "hartree/a.u.", "P": "hartree/a.u.",
                "mean_R": "bohr", "norm": "1"}


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([_fmt(v) for v in r])


def write_series_csv(path, series):
    """Averaged time series; ``*_err`` columns hold standard errors."""
    cols = ["time_au", "time_fs", *SERIES_FIELDS]
    data = [series.times, series.times_fs] + [getattr(series, k) for k in SERIES_FIELDS]
    header = [f"{c} [{SERIES_UNITS[c]}]" for c in cols]
    if series.stderr:
        header += [f"{k}_err [{SERIES_UNITS[k]}]" for k in SERIES_FIELDS]
        data += [series.stderr[k] for k in SERIES_FIELDS]
    _write_csv(path, header, zip(*data))


def write_table_csv(path, rows):
    keys = []
    for r in rows:
        keys += [k for k in r if k not in keys]
    _write_csv(path, keys, ([r.get(k) for k in keys] for r in rows))


def _sha256(path):
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def emit_results(report, out_dir=None):
    """Write tables, series, density profiles and the run manifest. Returns the manifest path."""
    out = Path(out_dir or report.config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files = []
    for name, rows in report.tables.items():
        p = out / f"{name}.csv"
        write_table_csv(p, rows)
        files.append(p)
    for name, s in report.series.items():
        p = out / f"series_{name}.csv"
        write_series_csv(p, s)
        files.append(p)
    for name, (r, dens) in report.profiles.items():
        p = out / f"density_{name}.csv"
        _write_csv(p, ["r [bohr]", "p [1/grid point]"], zip(r, dens))
        files.append(p)
    cfg = report.config
    manifest = {
        "kind": report.kind,
        "config": cfg.model_dump(mode="json"),
        "seeds": {"base_seed": cfg.stochastic.base_seed,
                  "realization_indices": list(range(cfg.stochastic.n_realizations)),
                  "derivation": "numpy SeedSequence([base_seed, realization_index])"},
        "versions": {"surrogate_heat": __version__, "numpy": np.__version__,
                     "scipy": scipy.__version__, "pyyaml": yaml.__version__,
                     "python": platform.python_version()},
        "outputs": {p.name: _sha256(p) for p in files},
        "notes": list(report.notes),
    }
    path = out / "manifest.yaml"
    path.write_text(yaml.safe_dump(manifest, sort_keys=False), encoding="utf-8")
    return path


def load_manifest(path):
    data = yaml.safe_load(Path(path).read_text(encoding="utf-8"))
    return data, validate_config(data["config"])


def rerun_from_manifest(path, out_dir):
    """Repeat the run recorded in a manifest. Returns (new manifest path, mismatched files)."""
    data, cfg = load_manifest(path)
    report = run_experiment(cfg)
    new = emit_results(report, out_dir)
    fresh = yaml.safe_load(Path(new).read_text(encoding="utf-8"))["outputs"]
    mismatched = sorted(k for k in set(data["outputs"]) | set(fresh)
                        if data["outputs"].get(k) != fresh.get(k))
    return new, mismatched


def _parse(text):
    if text == "":
        return None
    if text in ("true", "false"):
        return text == "true"
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def read_table_csv(path):
    """Rows of a table written by :func:`write_table_csv`, values parsed back."""
    with open(path, newline="", encoding="utf-8") as fh:
        return [{k: _parse(v) for k, v in row.items()} for row in csv.DictReader(fh)]
