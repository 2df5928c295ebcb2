"""What is left of the drive once the baths let go?

A resonantly driven run is switched to an isolated system at t_off: bath
coupling and drive both go to zero. Each realization then evolves
unitarily, so the norm stays put, while the ensemble-mean <R> keeps
oscillating if the drive left a phase-locked superposition behind. Its
variance after t_off is compared with the sampling noise before t_off.

    python demos/05_coherence.py --quick
"""
from _shared import parse, show, tables

args = parse(__doc__, "coherence")
t = tables(args, "coherence", dict(stochastic={"n_realizations": 3, "t_end": 8e5},
                                   steady={"window": 1e5},
                                   coherence={"t_off": 6e5}))

show(t["coherence"], ["t_off", "post_variance", "noise_floor", "variance_ratio", "norm_drift"])
r = t["coherence"][0]
print(f"\nafter t_off the mean <R> varies {r['variance_ratio']:.1f}x more than the "
      f"pre-switch noise floor")
