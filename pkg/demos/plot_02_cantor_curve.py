"""
A monotone curve over a fat Cantor set
======================================

Build the first few levels, look at the plateau values of the fourth
coordinate, and run the exact invariant checks.
"""

import numpy as np

from carnotlip import build_curve, build_levels, measure_K, verify_iterate

for lv in build_levels(4):
    print(f"level {lv.k}: {len(lv)} intervals, length {lv.length()}")
print("limit measure:", measure_K())

curve = build_curve(5)
for (a, b), w in zip(curve.level.intervals[:4], curve.omega[:4]):
    print(f"[{float(a):.6f}, {float(b):.6f}]  gamma4 = {float(w):.3e}")

# gamma4 is a decreasing staircase; dump it for plotting
t = np.array([float(s) for s, _ in curve.endpoint_samples()])
g4 = np.array([float(x[3]) for _, x in curve.endpoint_samples()])
print("decreasing:", bool(np.all(np.diff(g4) <= 0)))

report = verify_iterate(6)
print(report.to_json(timing=False))
