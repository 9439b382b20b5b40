"""
Moving the construction to another direction
============================================

A rotation of the horizontal layer extends to a graded automorphism of the
free group; it carries the curve to one whose blow-ups point along e.
"""

from fractions import Fraction

from carnotlip import build_curve, free_automorphism, orthogonal_frame
from carnotlip.dynamics import pansu_log
from carnotlip.experiments import transport_experiment

e = (Fraction(3, 5), Fraction(4, 5))
psi = free_automorphism(orthogonal_frame(e))
for row in psi.matrix:
    print(" ".join(f"{str(v):>7}" for v in row))

curve = build_curve(4)
a, b = curve.level.intervals[2]
blow_up = pansu_log(lambda t: psi(curve(t)), (a + b) / 2, (b - a) / 8)
print("blow-up direction:", blow_up.horizontal_part)

report = transport_experiment(e, depth=4, pairs=20)
print("pass:", report.passed, report.counts)

# the Engel group refuses
try:
    free_automorphism(orthogonal_frame(e), "engel")
except ValueError as exc:
    print("engel:", exc)
