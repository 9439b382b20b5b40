"""
The group law in second-type coordinates
========================================

Multiply a few points, check the product against the BCH route, and watch a
dilation act layer by layer.
"""

from fractions import Fraction

from carnotlip import F23, AlgebraVector, GroupPoint, bch, dilate, exp_c2, inverse, log_c2, multiply
from carnotlip.groups import multiply_bch

x = GroupPoint(F23, (1, 0, 0, 0, 0))
y = GroupPoint(F23, (0, 1, 0, 0, 0))

# x.y and y.x differ in every higher coordinate
print("x.y =", multiply(x, y))
print("y.x =", multiply(y, x))

# the same product through exp(BCH(log x, log y))
print("BCH route:", multiply_bch(x, y))
print("log of x.y:", bch(log_c2(x), log_c2(y)))

# inverse and identity
z = GroupPoint(F23, (Fraction(1, 2), 2, -1, 3, Fraction(5, 7)))
print("z^-1 =", inverse(z))
print("z . z^-1 =", multiply(z, inverse(z)))

# dilations scale coordinate i by lam**weight(i)
for lam in (2, Fraction(1, 2)):
    print(f"delta_{lam}(z) =", dilate(lam, z))

# exp of a horizontal vector: the unit-time flow of the constant control (1, 1)
print("exp(X1 + X2) =", exp_c2(AlgebraVector.horizontal(F23, 1, 1)))
