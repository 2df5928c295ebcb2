"""Asymmetric double-well surface, system-bath coupling windows and dipole.

The device potential is the lower eigenvalue of the 2x2 diabatic matrix
``[[V_L, V_C], [V_C, V_R]]`` built from two displaced harmonic wells and a
Gaussian coupling centred on their crossing point.
"""
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import ConfigurationError


@dataclass(frozen=True)
class DiabaticWell:
    omega: float
    center: float
    mass: float = 2000.0

    def __post_init__(self):
        if not self.omega > 0:
            raise ConfigurationError(f"well frequency must be positive, got {self.omega}")
        if not self.mass > 0:
            raise ConfigurationError(f"mass must be positive, got {self.mass}")


@dataclass(frozen=True)
class GaussianCoupling:
    amplitude: float
    crossing: float
    sigma: float = 0.5

    def __post_init__(self):
        if not self.sigma > 0:
            raise ConfigurationError(f"coupling width must be positive, got {self.sigma}")
        if self.amplitude < 0:
            raise ConfigurationError(f"coupling amplitude must be >= 0, got {self.amplitude}")


@dataclass(frozen=True)
class CouplingWindow:
    """Exponential window ``amplitude * exp(-gamma |r - center|)``."""
    center: float
    gamma: float = 0.5
    amplitude: float = 0.5

    def __post_init__(self):
        if not self.gamma > 0:
            raise ConfigurationError(f"window decay must be positive, got {self.gamma}")
        if self.amplitude < 0:
            raise ConfigurationError(f"window amplitude must be >= 0, got {self.amplitude}")


@dataclass(frozen=True)
class SurfaceParams:
    left: DiabaticWell
    right: DiabaticWell
    coupling: GaussianCoupling
    mu: float = 1.0

    def __post_init__(self):
        if not self.left.center < self.right.center:
            raise ConfigurationError("left well must sit to the left of the right well")
        if self.left.mass != self.right.mass:
            raise ConfigurationError("both diabatic wells must share one mass")


def diabatic_energy(r, well):
    return 0.5 * well.mass * well.omega**2 * (np.asarray(r) - well.center) ** 2


def gaussian_coupling(r, c):
    return c.amplitude * np.exp(-((np.asarray(r) - c.crossing) ** 2) / (2 * c.sigma**2))


def adiabatic_lower(r, p):
    vl = diabatic_energy(r, p.left)
    vr = diabatic_energy(r, p.right)
    vc = gaussian_coupling(r, p.coupling)
    return 0.5 * (vl + vr - np.sqrt((vl - vr) ** 2 + 4 * vc**2))


def coupling_window(r, w):
    return w.amplitude * np.exp(-w.gamma * np.abs(np.asarray(r) - w.center))


def coupling_window_derivative(r, w):
    d = np.asarray(r) - w.center
    return -w.gamma * np.sign(d) * w.amplitude * np.exp(-w.gamma * np.abs(d))


def dipole(r, mu):
    return mu * np.asarray(r)


def crossing_point(left, right):
    """Position between the two well centres where the diabats intersect."""
    return brentq(lambda x: diabatic_energy(x, left) - diabatic_energy(x, right),
                  left.center, right.center, xtol=1e-14, rtol=4 * np.finfo(float).eps)


def double_well(omega_left, omega_right, center_left=-3.0, center_right=3.0,
                amplitude=2e-5, sigma=0.5, mass=2000.0, mu=1.0):
    """Surface parameters with the Gaussian coupling placed at the crossing."""
    left = DiabaticWell(omega_left, center_left, mass)
    right = DiabaticWell(omega_right, center_right, mass)
    r0 = crossing_point(left, right)
    return SurfaceParams(left, right, GaussianCoupling(amplitude, r0, sigma), mu)


def local_extrema(values):
    """Indices of interior local minima and maxima of a sampled curve.

    Found from sign changes of the discrete gradient; flat runs are skipped.
    """
    d = np.sign(np.diff(values))
    nz = np.flatnonzero(d)
    minima, maxima = [], []
    for a, b in zip(nz[:-1], nz[1:]):
        if d[a] < 0 < d[b]:
            minima.append(b)
        elif d[a] > 0 > d[b]:
            maxima.append(b)
    return np.array(minima, dtype=int), np.array(maxima, dtype=int)
