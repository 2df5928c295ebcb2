"""Periodic driving of the dipole: can it push heat out of the colder bath?

The cold bath (10 K) is on the left, the hot one (25 K) on the right, and
J_c is the current entering the system from the cold side. A refrigerator
needs J_c > 0 while the drive supplies power P; the COP J_c/P is compared
with the Carnot value. The sweep over the drive amplitude is followed by a
sweep over the system-bath coupling at fixed amplitude.

    python demos/04_heat_pump.py --quick
    python demos/04_heat_pump.py --from results/acceptance/pump_amplitude
"""
from _shared import parse, show, tables

args = parse(__doc__, "pump_amplitude")
quick = dict(stochastic={"n_realizations": 2, "t_end": 4e5},
             steady={"window": 1e5},
             pump={"epsilons": [0.0, 0.05, 0.2]})
t = tables(args, "pump_amplitude", quick)

print("\namplitude sweep")
show(t["pump"], ["epsilon", "J_c", "J_c_err", "J_h", "P", "cop", "carnot_cop"])
s = t["pump_summary"][0]
if s["threshold_low"] is None:
    print("J_c never turns positive: the drive heats the cold side instead of cooling it")
else:
    print(f"cooling sets in between eps = {s['threshold_low']:g} and {s['threshold_high']:g}")

# the coupling sweep lives next to the amplitude sweep
args.out_dir = args.out_dir.replace("amplitude", "coupling")
if args.source:
    args.source = args.source.replace("amplitude", "coupling")
quick["pump"] = {"amplitudes": [0.25, 1.0]}
g = tables(args, "pump_coupling", quick)
print("\ncoupling sweep")
show(g["pump"], ["window_amplitude", "J_c", "J_c_err", "P", "cop"])
