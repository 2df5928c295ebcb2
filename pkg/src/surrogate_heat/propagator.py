"""Chebyshev propagation in real and imaginary time.

The Hamiltonian is mapped onto [-1, 1] with the enclosure from
:func:`spectral_bounds`, and ``exp(-i H dt)`` is expanded in Chebyshev
polynomials with Bessel-function coefficients. Explicit time dependence
(the drive) is frozen at the step midpoint.
"""
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import ive, jv

from .errors import ConfigurationError, PropagationAccuracyError, RelaxationError
from .grid import apply_kinetic
from .hamiltonian import apply_hamiltonian, spectral_bounds


@dataclass(frozen=True)
class PropagatorConfig:
    dt: float = 0.25
    tolerance: float = 1e-12
    max_order: int = 4000

    def __post_init__(self):
        if not self.dt > 0:
            raise ConfigurationError(f"dt must be positive, got {self.dt}")
        if not 0 < self.tolerance < 1:
            raise ConfigurationError(f"tolerance must lie in (0, 1), got {self.tolerance}")
        if self.max_order < 1:
            raise ConfigurationError(f"max_order must be >= 1, got {self.max_order}")


@lru_cache(maxsize=64)
def chebyshev_coefficients(alpha, tolerance, max_order):
    """Coefficients of exp(-i alpha x) = sum_k c_k T_k(x) on [-1, 1].

    ``c_0 = J_0(alpha)``, ``c_k = 2 (-i)^k J_k(alpha)``; the series is cut at
    the first order past ``|alpha|`` where ``|c_k|`` drops below ``tolerance``.
    """
    k = np.arange(max_order + 1)
    c = 2.0 * (-1j) ** k * jv(k, alpha)
    c[0] /= 2
    tail = np.flatnonzero((np.abs(c) < tolerance) & (k > abs(alpha)))
    if tail.size == 0:
        raise PropagationAccuracyError(
            f"Chebyshev series for |H|dt/2 = {abs(alpha):.3g} needs more than "
            f"{max_order} terms; reduce dt")
    c = c[:tail[0]]
    c.flags.writeable = False
    return c


def expansion_order(ctx, cfg, dt=None):
    """Highest Chebyshev degree used for one step (number of H applications)."""
    e_min, e_max = spectral_bounds(ctx)
    dt = cfg.dt if dt is None else dt
    coeffs = chebyshev_coefficients(0.5 * (e_max - e_min) * dt, cfg.tolerance, cfg.max_order)
    return len(coeffs) - 1


def chebyshev_apply(psi, hop, e_min, e_max, coeffs, phase=1.0):
    """sum_k coeffs[k] T_k(Hn) psi with Hn = (H - center) / half_width."""
    center = 0.5 * (e_max + e_min)
    half = 0.5 * (e_max - e_min)

    def hn(v):
        return (hop(v) - center * v) / half

    prev = psi
    cur = hn(psi)
    out = coeffs[0] * prev
    if len(coeffs) > 1:
        out = out + coeffs[1] * cur
    for c in coeffs[2:]:
        prev, cur = cur, 2.0 * hn(cur) - prev
        out += c * cur
    return phase * out


def propagate_step(psi, ctx, t, cfg, dt=None):
    """Advance ``psi`` from ``t`` to ``t + dt`` (``dt`` may be negative)."""
    dt = cfg.dt if dt is None else dt
    e_min, e_max = spectral_bounds(ctx)
    half = 0.5 * (e_max - e_min)
    center = 0.5 * (e_max + e_min)
    coeffs = chebyshev_coefficients(half * dt, cfg.tolerance, cfg.max_order)
    t_mid = t + 0.5 * dt
    return chebyshev_apply(psi, lambda v: apply_hamiltonian(v, ctx, t_mid),
                           e_min, e_max, coeffs, np.exp(-1j * center * dt))


def _system_bounds(grid, potential):
    return float(potential.min()), float(grid.kinetic.max() + potential.max())


def imaginary_time_coefficients(alpha, tolerance, max_order=100000):
    """Coefficients of exp(-alpha (x + 1)) on [-1, 1], scaled so the lowest edge maps to 1."""
    # exp(-alpha x) = I_0(alpha) + 2 sum_k (-1)^k I_k(alpha) T_k(x)
    k = np.arange(max_order + 1)
    c = 2.0 * (-1.0) ** k * ive(k, alpha)
    c[0] /= 2
    tail = np.flatnonzero(np.abs(c) < tolerance * abs(c[0]))
    if tail.size == 0:
        raise RelaxationError(f"imaginary-time series for alpha={alpha:.3g} does not converge")
    return c[:tail[0]]


def system_energy_1d(chi, grid, potential):
    h = apply_kinetic(chi, grid) + potential * chi
    return float(np.real(np.vdot(chi, h)) / np.real(np.vdot(chi, chi)))


def imaginary_time_relax(chi0, grid, potential, tau=None, energy_tol=1e-10,
                         residual_tol=1e-8, max_iter=5000, tolerance=1e-14):
    """Relax a grid wavefunction to the ground state of T + V.

    Repeatedly applies ``exp(-(T + V) tau)`` and renormalizes until the energy
    changes by less than ``energy_tol`` between iterations and the eigen
    residual ``|H chi - E chi|`` is below ``residual_tol``. Returns the
    normalized state and its energy.
    """
    e_min, e_max = _system_bounds(grid, potential)
    half = 0.5 * (e_max - e_min)
    if tau is None:
        # expansion argument of 300, a few hundred terms per iteration
        tau = 2.0 * 300.0 / half if half > 0 else 1.0
    alpha = half * tau
    coeffs = imaginary_time_coefficients(alpha, tolerance)

    def hop(v):
        return apply_kinetic(v, grid) + potential * v

    chi = np.asarray(chi0, dtype=complex)
    chi = chi / np.linalg.norm(chi)
    energy = system_energy_1d(chi, grid, potential)
    for _ in range(max_iter):
        chi = chebyshev_apply(chi, hop, e_min, e_max, coeffs)
        chi /= np.linalg.norm(chi)
        new = system_energy_1d(chi, grid, potential)
        residual = np.linalg.norm(hop(chi) - new * chi)
        converged = abs(new - energy) < energy_tol and residual < residual_tol
        energy = new
        if converged:
            return chi, energy
    raise RelaxationError(f"no convergence after {max_iter} iterations "
                          f"(residual {residual:.2e})")


def ground_state(ctx, **kwargs):
    """System-only ground state of the model, starting from a Gaussian at the grid centre."""
    r = ctx.grid.r
    mid = 0.5 * (r[0] + r[-1])
    width = 0.1 * (r[-1] - r[0])
    chi0 = np.exp(-((r - mid) ** 2) / (2 * width**2)).astype(complex)
    return imaginary_time_relax(chi0, ctx.grid, ctx.potential, **kwargs)
