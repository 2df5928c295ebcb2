"""Heat flow through the double well between a cold and a hot spin bath.

The right bath sits at 15 K. With the left bath at 5 K heat should run
right to left (J < 0); at 25 K it reverses. Standard errors come from the
spread between independent realizations, so the convergence table shows
how the estimate tightens as realizations are added.

    python demos/02_transport.py --quick
    python demos/02_transport.py --from results/acceptance/transport
"""
from _shared import parse, show, tables

args = parse(__doc__, "transport")
t = tables(args, "transport", dict(stochastic={"n_realizations": 2, "t_end": 6e5},
                                   steady={"window": 1e5},
                                   transport={"convergence_counts": [2]}))

print("\nsteady state")
show(t["transport"], ["t_left", "J", "J_err", "J_L", "J_R", "sigma", "steady"])
print("\nconvergence with realizations")
show(t["convergence"], ["t_left", "n_realizations", "J", "J_err", "sigma", "sigma_err"])

for r in t["transport"]:
    z = r["J"] / r["J_err"]
    arrow = "left -> right" if z > 0 else "right -> left"
    print(f"T_L = {r['t_left']:g} K: net flow {arrow} at {abs(z):.1f} standard errors")
