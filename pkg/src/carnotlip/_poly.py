"""Dense univariate polynomials with Fraction coefficients.

Just enough arithmetic to push a polynomial parameter through the BCH
kernels and to bound a polynomial from below on an interval.
"""

from __future__ import annotations

from fractions import Fraction


class Poly:
    __slots__ = ("c",)

    def __init__(self, coeffs):
        c = [Fraction(a) for a in coeffs]
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        self.c = c or [Fraction(0)]

    @classmethod
    def var(cls) -> Poly:
        return cls([0, 1])

    @property
    def degree(self) -> int:
        return len(self.c) - 1

    def _lift(self, other) -> Poly:
        return other if isinstance(other, Poly) else Poly([other])

    def __add__(self, other):
        o = self._lift(other).c
        n = max(len(self.c), len(o))
        return Poly(
            [(self.c[i] if i < len(self.c) else 0) + (o[i] if i < len(o) else 0) for i in range(n)]
        )

    __radd__ = __add__

    def __neg__(self):
        return Poly([-a for a in self.c])

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return Poly([a * other for a in self.c])
        out = [Fraction(0)] * (len(self.c) + len(other.c) - 1)
        for i, a in enumerate(self.c):
            if a:
                for j, b in enumerate(other.c):
                    out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return Poly([a / scalar for a in self.c])

    def __pow__(self, n: int):
        out = Poly([1])
        for _ in range(n):
            out = out * self
        return out

    def __call__(self, x):
        acc = Fraction(0)
        for a in reversed(self.c):
            acc = acc * x + a
        return acc

    def is_zero(self) -> bool:
        return self.degree == 0 and self.c[0] == 0

    def derivative(self) -> Poly:
        return Poly([i * a for i, a in enumerate(self.c)][1:] or [0])

    def shifted(self, m) -> list[Fraction]:
        """Coefficients of h -> p(m + h) (Taylor shift)."""
        c = list(self.c)
        n = len(c)
        for i in range(n):
            for j in range(n - 2, i - 1, -1):
                c[j] += m * c[j + 1]
        return c

    def lower_bound(self, a, b) -> Fraction:
        """A guaranteed lower bound of p on [a, b] from the centred Taylor form."""
        m = (a + b) / 2
        r = (b - a) / 2
        c = self.shifted(m)
        lb = c[0]
        rk = Fraction(1)
        for k in range(1, len(c)):
            rk *= r
            if k % 2:
                lb -= abs(c[k]) * rk
            elif c[k] < 0:
                lb += c[k] * rk
        return lb

    def floats(self) -> list[float]:
        return [float(a) for a in self.c]
