"""Fefferman-Stein and Coifman-Fefferman for commutators, swept over eps, m, p and w.

The FS constant is measured against the right-hand side with its 1/eps in
front, so a constant that stays put as eps shrinks means 1/eps is the right
rate; a constant shrinking like eps means the bound is loose on this input.

Run:  python demos/weighted_inequalities.py
"""
import numpy as np

from sparsedom.fields import Weight, power_weight
from sparsedom.sparse import default_corpus
from sparsedom.verify import coifman_fefferman, weak_type_fs

J = 10


def weights(grid):
    return {"1": Weight(grid, np.ones(grid.shape)), "|x|^1/2": power_weight(grid, 0.5),
            "|x|^-1/2": power_weight(grid, -0.5)}


print(f"weak-type FS constant (loglog variant), J = {J}")
print(f"{'m':>2} {'w':>9}" + "".join(f"{'eps=' + str(e):>12}" for e in (0.5, 0.25, 0.125)))
for m in (1, 2):
    c = default_corpus(J, m)
    for wn, w in weights(c.grid).items():
        row = [weak_type_fs(c.kernel, c.spec, c.f, w, e).constant for e in (0.5, 0.25, 0.125)]
        print(f"{m:>2} {wn:>9}" + "".join(f"{v:12.4f}" for v in row))

print(f"\nstrong-type CF ratios (power shape / norm shape), J = {J}")
print(f"{'m':>2} {'w':>9}" + "".join(f"{'p=' + str(p):>16}" for p in (0.5, 1, 2, 3)))
for m in (0, 1):
    c = default_corpus(J, m)
    for wn, w in weights(c.grid).items():
        cells = []
        for p in (0.5, 1.0, 2.0, 3.0):
            r = coifman_fefferman(c.kernel, c.spec, c.f, w, p).ratio
            cells.append(f"{r[0]:7.3f}/{r[1]:<7.3f}")
        print(f"{m:>2} {wn:>9} " + " ".join(f"{x:>15}" for x in cells))
