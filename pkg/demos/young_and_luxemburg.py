"""Young functions, their conjugates and Luxemburg averages on dyadic cubes.

Run:  python demos/young_and_luxemburg.py
"""
import numpy as np

from sparsedom.dyadic import Cube, Grid
from sparsedom.fields import indicator, log_singular, power_weight
from sparsedom.young import PROBE, conjugate, luxemburg_norm, make_young

grid = Grid(1, 10)
Q = Cube(0, 2, (1,), grid)  # [1/4, 1/2)

# A few gauges, from L^1 up to exponential integrability
young = {
    "t": make_young("power", r=1.0),
    "t^2": make_young("power", r=2.0),
    "t log(e+t)": make_young("llog", alpha=1.0),
    "t log^2(e+t)": make_young("llog", alpha=2.0),
    "e^t - 1": make_young("exp_minus_one"),
}

# duality: t <= A^-1(t) Abar^-1(t) <= 2t on a log grid of probes
print("A^-1(t) Abar^-1(t) / t over 512 probes in [1e-6, 1e6]")
for name, A in young.items():
    r = np.asarray(A.inverse(PROBE)) * np.asarray(conjugate(A).inverse(PROBE)) / PROBE
    print(f"  {name:<14} [{r.min():.4f}, {r.max():.4f}]  conjugate: {conjugate(A).conjugate_form}")

# Orlicz averages grow with the gauge; the log singularity separates them
fields = {"1_[1/4,5/16)": indicator(grid, 0.25, 0.3125), "log|x-0.3|": log_singular(grid, 0.3)}
w = power_weight(grid, -0.5)
print(f"\nLuxemburg norms on Q = [1/4, 1/2), J = {grid.depth}")
print(f"  {'gauge':<14}" + "".join(f"{k:>16}" for k in fields) + f"{'log, w=|x|^-1/2':>18}")
for name, A in young.items():
    vals = [luxemburg_norm(f, Q, A) for f in fields.values()]
    vw = luxemburg_norm(fields["log|x-0.3|"], Q, A, w)
    print(f"  {name:<14}" + "".join(f"{v:16.6f}" for v in vals) + f"{vw:18.6f}")

# the indicator row has a closed form: 1 / A^-1(1/s) with s the filled fraction
s = 0.25
print("\nindicator check, 1/A^-1(4):")
for name, A in young.items():
    print(f"  {name:<14} {1 / float(A.inverse(1 / s)):.6f}")
