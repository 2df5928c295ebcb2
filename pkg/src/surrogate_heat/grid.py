"""Uniform periodic Fourier grid for the molecular coordinate.

Wavefunctions on the grid are arrays whose *last* axis runs over the grid
points, so every operator here also works on a batch of slices
(e.g. one slice per bath spin configuration).
"""
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import fft

from .errors import ConfigurationError, ContractViolation


@dataclass(frozen=True)
class GridSpec:
    n_points: int = 64
    r_min: float = -10.0
    r_max: float = 10.0
    mass: float = 2000.0

    def __post_init__(self):
        n = self.n_points
        if not isinstance(n, (int, np.integer)) or n < 8 or n & (n - 1):
            raise ConfigurationError(f"n_points must be a power of two >= 8, got {n!r}")
        if not self.r_max > self.r_min:
            raise ConfigurationError(f"empty range [{self.r_min}, {self.r_max})")
        if not self.mass > 0:
            raise ConfigurationError(f"mass must be positive, got {self.mass}")


@dataclass(frozen=True, eq=False)
class Grid:
    spec: GridSpec
    r: np.ndarray
    k: np.ndarray
    kinetic: np.ndarray
    # momentum wavenumbers with the unpaired Nyquist mode removed so that the
    # first-derivative operator is exactly anti-symmetric
    k_odd: np.ndarray = field(repr=False)

    @property
    def n(self):
        return self.spec.n_points

    @property
    def mass(self):
        return self.spec.mass

    @property
    def dr(self):
        return (self.spec.r_max - self.spec.r_min) / self.spec.n_points

    @property
    def dk(self):
        return 2 * np.pi / (self.spec.r_max - self.spec.r_min)


def build_grid(spec):
    n = spec.n_points
    dr = (spec.r_max - spec.r_min) / n
    r = spec.r_min + dr * np.arange(n)
    k = 2 * np.pi * fft.fftfreq(n, d=dr)
    k_odd = k.copy()
    k_odd[n // 2] = 0.0
    kinetic = k**2 / (2 * spec.mass)
    for a in (r, k, k_odd, kinetic):
        a.flags.writeable = False
    return Grid(spec=spec, r=r, k=k, kinetic=kinetic, k_odd=k_odd)


def _check(psi, grid):
    psi = np.asarray(psi)
    if psi.shape[-1:] != (grid.n,):
        raise ContractViolation(
            f"last axis has length {psi.shape[-1:] or None}, grid has {grid.n} points")
    return psi


def apply_kinetic(psi, grid):
    """Return (P^2/2m) psi via FFT along the last axis."""
    psi = _check(psi, grid)
    return fft.ifft(grid.kinetic * fft.fft(psi, axis=-1), axis=-1)


def apply_momentum(psi, grid):
    """Return P psi = -i d(psi)/dr (spectral derivative)."""
    psi = _check(psi, grid)
    return fft.ifft(grid.k_odd * fft.fft(psi, axis=-1), axis=-1)


def check_edge_density(density, grid, threshold=1e-8):
    """Warn if the density at the box edges exceeds ``threshold`` x its maximum.

    Returns True when the edges are clean.
    """
    density = np.asarray(density)
    peak = density.max()
    edge = max(density[..., 0].max(), density[..., -1].max())
    if peak > 0 and edge > threshold * peak:
        warnings.warn(
            f"density at grid edge is {edge / peak:.2e} of its maximum; "
            "widen the box", RuntimeWarning, stacklevel=2)
        return False
    return True
