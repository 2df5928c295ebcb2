"""Primary spin baths, thermal random-phase spins and composite indexing.

Composite layout
----------------
A composite wavefunction is stored as a flat complex vector that reshapes
(C order) to ``(2**n_right, 2**n_left, n_grid)``::

    flat = g + n_grid * (left_bits + 2**n_left * right_bits)

Bit ``j`` of ``left_bits`` (``right_bits``) is spin ``j`` of the left (right)
primary bath; 1 means excited (up). The grid index varies fastest, so the
kinetic-energy FFT runs over contiguous slices. Flipping left spin ``j``
moves the flat index by ``2**j * n_grid``; flipping right spin ``j`` by
``2**(n_left + j) * n_grid``.
"""
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, ContractViolation
from .units import kelvin_to_hartree

LAMBDA_NORMS = ("paper", "sqrt_density")


@dataclass(frozen=True, eq=False)
class BathSpectrum:
    omegas: np.ndarray
    lambdas: np.ndarray
    temperature: float
    side: str = "left"

    def __post_init__(self):
        if self.side not in ("left", "right"):
            raise ConfigurationError(f"side must be 'left' or 'right', got {self.side!r}")
        if not self.temperature > 0:
            raise ConfigurationError(f"temperature must be positive, got {self.temperature}")
        if len(self.omegas) != len(self.lambdas):
            raise ConfigurationError("omegas and lambdas differ in length")
        if np.any(self.lambdas <= 0):
            raise ConfigurationError("all couplings lambda_j must be positive")
        if np.any(np.diff(self.omegas) <= 0):
            raise ConfigurationError("bath frequencies must be strictly increasing")

    @property
    def n_modes(self):
        return len(self.omegas)

    def with_temperature(self, temperature):
        return BathSpectrum(self.omegas, self.lambdas, temperature, self.side)


def build_spectrum(n, omega_min, omega_max, lam, temperature, side="left",
                   lambda_norm="paper", lambda_override=None):
    """Uniformly spaced spin frequencies on ``[omega_min, omega_max]``.

    ``lambda_norm='paper'`` gives ``lambda_j = lam / d_omega`` for every mode
    (including the first); ``'sqrt_density'`` gives ``lam * sqrt(d_omega)``.
    A single mode has no spacing and needs ``lambda_override``.
    """
    if n < 1:
        raise ConfigurationError(f"need at least one bath mode, got {n}")
    if not omega_max > omega_min > 0 and not (n == 1 and omega_max == omega_min > 0):
        raise ConfigurationError(f"need 0 < omega_min < omega_max, got {omega_min}, {omega_max}")
    if lambda_norm not in LAMBDA_NORMS:
        raise ConfigurationError(f"lambda_norm must be one of {LAMBDA_NORMS}")
    omegas = np.linspace(omega_min, omega_max, n)
    if lambda_override is not None:
        lambdas = np.full(n, float(lambda_override))
    elif n == 1:
        raise ConfigurationError("a single bath mode has no spacing; pass lambda_override")
    else:
        spacing = (omega_max - omega_min) / (n - 1)
        value = lam / spacing if lambda_norm == "paper" else lam * np.sqrt(spacing)
        lambdas = np.full(n, value)
    omegas.flags.writeable = False
    lambdas.flags.writeable = False
    return BathSpectrum(omegas, lambdas, float(temperature), side)


@dataclass(frozen=True)
class ThermalSpinSample:
    ground: complex
    excited: complex

    @property
    def vector(self):
        return np.array([self.ground, self.excited])


def thermal_amplitudes(omega, temperature):
    """Real normalized amplitudes (ground, excited) of the thermal spinor."""
    if not np.all(np.asarray(temperature) > 0):
        raise ConfigurationError(f"temperature must be positive, got {temperature}")
    x = np.asarray(omega) / kelvin_to_hartree(temperature)
    # |ground|^2 = 1/(1+e^-x), written to stay finite for large x
    ground = np.sqrt(0.5 * (1 + np.tanh(x / 2)))
    excited = np.sqrt(0.5 * (1 - np.tanh(x / 2)))
    return ground, excited


def sample_thermal_spin(omega, temperature, rng):
    g, e = thermal_amplitudes(omega, temperature)
    theta = rng.uniform(0.0, 2 * np.pi, size=2)
    return ThermalSpinSample(complex(g * np.exp(1j * theta[0])),
                             complex(e * np.exp(1j * theta[1])))


@dataclass(frozen=True)
class BasisIndexer:
    n_grid: int
    n_left: int
    n_right: int

    @property
    def shape(self):
        return (2**self.n_right, 2**self.n_left, self.n_grid)

    @property
    def dim(self):
        return self.n_grid * 2 ** (self.n_left + self.n_right)

    def left_stride(self, j):
        return 2**j * self.n_grid

    def right_stride(self, j):
        return 2 ** (self.n_left + j) * self.n_grid

    def spin_view(self, psi, side, j):
        """View of ``psi`` as ``(outer, 2, inner, n_grid)`` with spin ``j`` on axis 1."""
        n = self.n_left if side == "left" else self.n_right
        if not 0 <= j < n:
            raise ContractViolation(f"{side} bath has no spin {j}")
        if side == "left":
            outer = 2**self.n_right * 2 ** (self.n_left - 1 - j)
        else:
            outer = 2 ** (self.n_right - 1 - j)
        return psi.reshape(outer, 2, -1, self.n_grid)

    def composite_index(self, g, left_bits, right_bits):
        if not (0 <= g < self.n_grid and 0 <= left_bits < 2**self.n_left
                and 0 <= right_bits < 2**self.n_right):
            raise ContractViolation(f"index ({g}, {left_bits}, {right_bits}) out of range")
        return g + self.n_grid * (left_bits + 2**self.n_left * right_bits)

    def split_index(self, flat):
        if not 0 <= flat < self.dim:
            raise ContractViolation(f"flat index {flat} out of range")
        rest, g = divmod(flat, self.n_grid)
        right_bits, left_bits = divmod(rest, 2**self.n_left)
        return g, left_bits, right_bits


def product_bath_state(spinors):
    """Kronecker product of single-spin vectors ordered so spin 0 is the least significant bit."""
    out = np.ones(1, dtype=complex)
    for s in spinors:
        out = np.kron(s, out)
    return out
