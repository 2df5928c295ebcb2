"""Does the asymmetric well pass heat more easily one way than the other?

For each omega_L / omega_R the hot bath is placed first on the left
(forward) and then on the right (reverse). Both currents are reported as
positive hot -> cold flow, and their ratio is the rectification. A ratio
of one is expected when the two wells are identical.

    python demos/03_rectifier.py --quick
"""
from _shared import parse, show, tables

args = parse(__doc__, "rectifier")
t = tables(args, "rectifier", dict(stochastic={"n_realizations": 2, "t_end": 6e5},
                                   steady={"window": 1e5},
                                   rectifier={"ratios": [0.5, 1.0]}))

show(t["rectifier"], ["ratio", "J_forward", "J_reverse", "rectification",
                      "rectification_err", "product"])
for r in t["rectifier"]:
    z = (r["rectification"] - 1) / r["rectification_err"]
    if z != z:
        print(f"omega_L/omega_R = {r['ratio']:g}: no steady state detected, no ratio reported")
        continue
    print(f"omega_L/omega_R = {r['ratio']:g}: rectification deviates from 1 by {z:+.1f} SE")
