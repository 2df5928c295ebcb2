"""Matrix-free action of the total system + primary-bath Hamiltonian.

    H(t) = T + V(R) + sum_j w_j n_j (both baths)
           + f_L(R) (x) sum_j l_j sx_j + f_R(R) (x) sum_j l_j sx_j
           + mu R eps cos(nu t)

Spin-down has energy 0, spin-up ``w_j``. The composite layout is described
in :mod:`surrogate_heat.spinbath`.
"""
from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np

from .errors import ConfigurationError, ContractViolation
from .grid import apply_kinetic
from .potential import (CouplingWindow, adiabatic_lower, coupling_window,
                        coupling_window_derivative, dipole)
from .spinbath import BasisIndexer

SIDES = ("left", "right")


@dataclass(frozen=True)
class DriveParams:
    epsilon: float = 0.0
    nu: float = 0.0
    enabled: bool = False
    t_off: float | None = None

    def __post_init__(self):
        if self.epsilon < 0:
            raise ConfigurationError(f"drive amplitude must be >= 0, got {self.epsilon}")
        if self.enabled and not self.nu > 0:
            raise ConfigurationError(f"an enabled drive needs nu > 0, got {self.nu}")

    def active(self, t):
        return self.enabled and (self.t_off is None or t < self.t_off)

    def field(self, t):
        """f(t) = eps cos(nu t), zero when disabled or after ``t_off``."""
        return self.epsilon * np.cos(self.nu * t) if self.active(t) else 0.0

    def field_rate(self, t):
        """df/dt = -eps nu sin(nu t)."""
        return -self.epsilon * self.nu * np.sin(self.nu * t) if self.active(t) else 0.0


@dataclass(frozen=True, eq=False)
class ModelContext:
    grid: object
    surface: object
    left_bath: object
    right_bath: object
    left_window: CouplingWindow
    right_window: CouplingWindow
    drive: DriveParams = field(default_factory=DriveParams)

    def __post_init__(self):
        if self.left_bath.side != "left" or self.right_bath.side != "right":
            raise ConfigurationError("bath spectra are attached to the wrong sides")

    @cached_property
    def indexer(self):
        return BasisIndexer(self.grid.n, self.left_bath.n_modes, self.right_bath.n_modes)

    @property
    def shape(self):
        return self.indexer.shape

    @property
    def dim(self):
        return self.indexer.dim

    @cached_property
    def potential(self):
        return _frozen(adiabatic_lower(self.grid.r, self.surface))

    @cached_property
    def dipole_r(self):
        return _frozen(dipole(self.grid.r, self.surface.mu))

    @cached_property
    def bath_energy(self):
        """Bath energy of every (right, left) configuration, shape ``shape[:2]``."""
        def per_side(omegas):
            bits = (np.arange(2 ** len(omegas))[:, None] >> np.arange(len(omegas))) & 1
            return bits @ omegas
        e = per_side(self.right_bath.omegas)[:, None] + per_side(self.left_bath.omegas)[None, :]
        return _frozen(e)

    @cached_property
    def diagonal(self):
        return _frozen(self.potential[None, None, :] + self.bath_energy[:, :, None])

    def bath(self, side):
        return self.left_bath if side == "left" else self.right_bath

    def window(self, side):
        return self.left_window if side == "left" else self.right_window

    @cached_property
    def windows(self):
        return {s: _frozen(coupling_window(self.grid.r, self.window(s))) for s in SIDES}

    @cached_property
    def window_derivatives(self):
        return {s: _frozen(coupling_window_derivative(self.grid.r, self.window(s)))
                for s in SIDES}

    @cached_property
    def bath_matrices(self):
        return {s: _frozen(bath_operator_matrix(self.bath(s).lambdas)) for s in SIDES}

    def decoupled(self):
        """Same model with both system-bath windows and the drive switched off."""
        return replace(self,
                       left_window=replace(self.left_window, amplitude=0.0),
                       right_window=replace(self.right_window, amplitude=0.0),
                       drive=replace(self.drive, enabled=False))

    def with_temperatures(self, t_left, t_right):
        return replace(self, left_bath=self.left_bath.with_temperature(t_left),
                       right_bath=self.right_bath.with_temperature(t_right))


def _frozen(a):
    a = np.ascontiguousarray(a)
    a.flags.writeable = False
    return a


def default_windows(surface, gamma=0.5, amplitude=0.5):
    return (CouplingWindow(surface.left.center, gamma, amplitude),
            CouplingWindow(surface.right.center, gamma, amplitude))


def build_context(grid, surface, left_bath, right_bath, left_window=None,
                  right_window=None, drive=None):
    lw, rw = default_windows(surface)
    return ModelContext(grid, surface, left_bath, right_bath,
                        left_window or lw, right_window or rw, drive or DriveParams())


def _as_composite(psi, ctx):
    psi = np.asarray(psi)
    if psi.size != ctx.dim:
        raise ContractViolation(f"wavefunction has {psi.size} amplitudes, model needs {ctx.dim}")
    return psi.reshape(ctx.shape)


# above this many spins per bath the sparse bit-flip loop beats a dense matmul
_DENSE_MAX_SPINS = 5


def bath_operator_matrix(lambdas):
    """Dense real matrix of sum_j lambda_j sigma^x_j on 2**n bath configurations."""
    n = len(lambdas)
    states = np.arange(2**n)
    out = np.zeros((2**n, 2**n))
    for j, lam in enumerate(lambdas):
        out[states ^ (1 << j), states] += lam
    return out


def apply_bath_operator(psi, ctx, side):
    """sum_j lambda_j sigma^x_j on one bath, identity on everything else."""
    x = np.ascontiguousarray(_as_composite(psi, ctx), dtype=complex)
    lambdas = ctx.bath(side).lambdas
    if len(lambdas) <= _DENSE_MAX_SPINS:
        b = ctx.bath_matrices[side]
        # real matrix on the interleaved (re, im) view
        xr = x.view(float)
        if side == "left":
            out = np.matmul(b, xr)
        else:
            out = (b @ xr.reshape(xr.shape[0], -1)).reshape(xr.shape)
        return out.view(complex).reshape(np.shape(psi))
    out = np.zeros_like(x)
    idx = ctx.indexer
    for j, lam in enumerate(lambdas):
        src = idx.spin_view(x, side, j)
        dst = idx.spin_view(out, side, j)
        dst[:, 0] += lam * src[:, 1]
        dst[:, 1] += lam * src[:, 0]
    return out.reshape(np.shape(psi))


def apply_coupling_term(psi, ctx, side):
    """H_SB for one side: f_side(R) (x) sum_j lambda_j sigma^x_j."""
    x = _as_composite(psi, ctx)
    if ctx.window(side).amplitude == 0:
        return np.zeros(np.shape(psi), dtype=complex)
    out = ctx.windows[side] * apply_bath_operator(x, ctx, side)
    return out.reshape(np.shape(psi))


def apply_system(psi, ctx):
    """(T + V) acting slice-wise; bath and coupling terms excluded."""
    x = _as_composite(psi, ctx)
    return (apply_kinetic(x, ctx.grid) + ctx.potential * x).reshape(np.shape(psi))


def apply_hamiltonian(psi, ctx, t=0.0):
    x = _as_composite(psi, ctx)
    out = apply_kinetic(x, ctx.grid)
    out += ctx.diagonal * x
    for side in SIDES:
        if ctx.window(side).amplitude != 0:
            out += ctx.windows[side] * apply_bath_operator(x, ctx, side)
    f = ctx.drive.field(t)
    if f != 0.0:
        out += (f * ctx.dipole_r) * x
    return out.reshape(np.shape(psi))


def spectral_bounds(ctx):
    """Guaranteed enclosure (E_min, E_max) of the spectrum of H(t) for all t.

    Built term by term from the triangle inequality: kinetic and potential
    ranges, the total bath energy, ``max|f| * sum(lambda)`` per contact and
    ``|mu| eps max|r|`` for the drive.
    """
    coupling = sum(ctx.windows[s].max() * ctx.bath(s).lambdas.sum() for s in SIDES)
    drive = 0.0
    if ctx.drive.enabled:
        drive = ctx.drive.epsilon * np.abs(ctx.dipole_r).max()
    bath = ctx.left_bath.omegas.sum() + ctx.right_bath.omegas.sum()
    e_min = ctx.potential.min() - coupling - drive
    e_max = ctx.grid.kinetic.max() + ctx.potential.max() + bath + coupling + drive
    return float(e_min), float(e_max)
