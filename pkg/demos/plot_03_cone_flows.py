"""
Flows inside a cone never leave the semigroup
=============================================

Sample random piecewise-constant controls pointing roughly along X2, follow
them exactly, and evaluate the closure polynomial at every breakpoint.
"""

from fractions import Fraction

import numpy as np

from carnotlip import ConeSpec, in_semigroup_closure, integrate, sample_cone_curve
from carnotlip.cones import semigroup_margins
from carnotlip.dynamics import integrate_rk4

cone = ConeSpec((0, 1), Fraction(1, 2))
curve = sample_cone_curve(cone, segments=10, seed=1)
path = integrate(curve)
print("end point:", path.end)
print("all inside:", all(in_semigroup_closure(x) for x in path.points))
print("smallest margin:", float(min(min(semigroup_margins(x)) for x in path.points)))

# the float integrator lands on the same points
exact = np.array([[float(c) for c in x.coords] for x in path.points])
print("RK4 max deviation:", np.abs(exact - integrate_rk4(curve)).max())

# the curve itself is never reachable from an earlier point of it
from carnotlip import build_curve, in_translated_constraint

samples = build_curve(4).endpoint_samples()
p, q = samples[1][1], samples[2][1]
print("gamma(t1) reaches gamma(t2)?", in_translated_constraint(p, q))
