"""A look at the default device before running anything stochastic.

Prints the double-well surface, the lowest vibrational levels, where they
sit, and how the bath spins are populated at the experiment temperatures.
"""
import numpy as np

from surrogate_heat.grid import apply_kinetic
from surrogate_heat.potential import local_extrema
from surrogate_heat.propagator import ground_state
from surrogate_heat.scenarios import ModelSettings
from surrogate_heat.spinbath import thermal_amplitudes
from surrogate_heat.units import kelvin_to_hartree

settings = ModelSettings()
ctx = settings.context()
grid, v = ctx.grid, ctx.potential

minima, maxima = local_extrema(v)
print("wells at r =", grid.r[minima], "bohr, barrier at r =", grid.r[maxima])
print(f"barrier height above the lower minimum: {v[maxima].max() - v[minima].min():.3e} hartree")

# dense system Hamiltonian on the grid, columns from the FFT kinetic operator
h = np.array([apply_kinetic(e, grid) for e in np.eye(grid.n, dtype=complex)]).T + np.diag(v)
energies, states = np.linalg.eigh(h)
chi, e0 = ground_state(ctx)
print(f"ground state: imaginary time {e0:.6e}, diagonalization {energies[0]:.6e}")
print("lowest gaps [hartree]:", np.round(energies[1:5] - energies[0], 7))
print("<R> of the lowest states [bohr]:", np.round(grid.r @ np.abs(states[:, :5]) ** 2, 2))

b = ctx.left_bath
print("bath modes (both sides) [hartree]:", b.omegas, " lambda_j =", b.lambdas[0])
for t in (5.0, 15.0, 25.0):
    _, up = thermal_amplitudes(b.omegas, t)
    print(f"T = {t:4.1f} K (kT = {kelvin_to_hartree(t):.2e}): spin excitation", np.round(up**2, 3))
