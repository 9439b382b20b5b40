"""Horizontal flows with piecewise-constant controls.

A control curve drives x' = h1 X1(x) + h2 X2(x). For constant h the flow is
right translation by exp(s h), so every breakpoint of a piecewise-constant
control is reached exactly. A float RK4 integrator of the same ODE, built on
an independent evaluation of the vector fields, is kept as an oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from ._poly import Poly
from .cones import ConeSpec, in_euclidean_cone
from .groups import (
    F23,
    AlgebraVector,
    GroupDescriptor,
    GroupPoint,
    dilate,
    exp_c2,
    get_group,
    inverse,
    log_c2,
    multiply,
    multiply_bch,
    rational,
)

__all__ = [
    "vf_matrix",
    "flow_constant",
    "ControlCurve",
    "Polyline",
    "integrate",
    "integrate_rk4",
    "pansu_quotient",
    "pansu_log",
    "sample_cone_curve",
    "GRID",
]

GRID = 2**16


def vf_matrix(x: GroupPoint) -> list[list[Fraction]]:
    """dim x 2 matrix whose columns are X1(x), X2(x) in second-type coordinates.

    Obtained by differentiating t -> x . exp(t X_i) at t = 0, with t kept as a
    polynomial indeterminate in the product formula.
    """
    group = x.group
    t = Poly.var()
    cols = []
    for i in range(2):
        step = [Poly([0])] * group.dim
        step[i] = t
        prod = group.mul(x.coords, step)
        cols.append([c.derivative()(0) if isinstance(c, Poly) else Fraction(0) for c in prod])
    return [[cols[0][r], cols[1][r]] for r in range(group.dim)]


def _vf_stencil(group: GroupDescriptor, x: Sequence[Fraction]) -> list[list[Fraction]]:
    """Same frame from a five-point stencil on the BCH product.

    The product is a polynomial of degree <= 3 in t, so the stencil is exact.
    """
    base = GroupPoint._raw(group, tuple(x))
    cols = []
    for i in range(2):
        vals = {}
        for k in (-2, -1, 1, 2):
            step = [Fraction(0)] * group.dim
            step[i] = Fraction(k)
            vals[k] = multiply_bch(base, GroupPoint._raw(group, tuple(step))).coords
        cols.append(
            [(vals[-2][r] - 8 * vals[-1][r] + 8 * vals[1][r] - vals[2][r]) / 12 for r in range(group.dim)]
        )
    return [[cols[0][r], cols[1][r]] for r in range(group.dim)]


def _horizontal_vector(group: GroupDescriptor, h) -> AlgebraVector:
    if isinstance(h, AlgebraVector):
        if not h.is_horizontal():
            raise ValueError("control must be horizontal")
        return h
    h = tuple(h)
    if len(h) == 2:
        return AlgebraVector.horizontal(group, h[0], h[1])
    v = AlgebraVector(group, h)
    if not v.is_horizontal():
        raise ValueError("control must be horizontal")
    return v


def flow_constant(x: GroupPoint, h, s) -> GroupPoint:
    """Time-s flow of the constant horizontal control h from x: x . exp(s h)."""
    h = _horizontal_vector(x.group, h)
    return multiply(x, exp_c2(rational(s) * h))


@dataclass(frozen=True)
class ControlCurve:
    breakpoints: tuple[Fraction, ...]
    controls: tuple[AlgebraVector, ...]
    start: GroupPoint

    def __post_init__(self):
        bps = tuple(rational(t) for t in self.breakpoints)
        group = self.start.group
        ctrls = tuple(_horizontal_vector(group, h) for h in self.controls)
        if len(bps) != len(ctrls) + 1:
            raise ValueError("need exactly one control per segment")
        if bps[0] != 0 or any(b <= a for a, b in zip(bps, bps[1:])):
            raise ValueError("breakpoints must start at 0 and increase strictly")
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "controls", ctrls)

    @property
    def group(self) -> GroupDescriptor:
        return self.start.group

    @property
    def duration(self) -> Fraction:
        return self.breakpoints[-1]

    def speed(self) -> float:
        """Largest Euclidean length of a control (the curve's Lipschitz bound)."""
        return max(
            float(np.hypot(float(h[0]), float(h[1]))) for h in self.controls
        )

    def segment(self, t) -> int:
        t = rational(t)
        if not 0 <= t <= self.duration:
            raise ValueError(f"t = {t} is outside [0, {self.duration}]")
        for i, b in enumerate(self.breakpoints[1:]):
            if t <= b:
                return i
        raise AssertionError("unreachable")

    def translated(self, z: GroupPoint) -> ControlCurve:
        return ControlCurve(self.breakpoints, self.controls, multiply(z, self.start))


@dataclass(frozen=True)
class Polyline:
    samples: tuple[tuple[Fraction, GroupPoint], ...]

    def __post_init__(self):
        ts = [t for t, _ in self.samples]
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise ValueError("polyline times must increase strictly")

    @property
    def times(self) -> list[Fraction]:
        return [t for t, _ in self.samples]

    @property
    def points(self) -> list[GroupPoint]:
        return [x for _, x in self.samples]

    @property
    def end(self) -> GroupPoint:
        return self.samples[-1][1]

    def __len__(self) -> int:
        return len(self.samples)


def integrate(c: ControlCurve, refine: int = 0) -> Polyline:
    """Exact samples at every breakpoint plus ``refine`` interior points per segment."""
    x = c.start
    out = [(Fraction(0), x)]
    for (a, b), h in zip(zip(c.breakpoints, c.breakpoints[1:]), c.controls):
        step = (b - a) / (refine + 1)
        for i in range(1, refine + 1):
            out.append((a + i * step, flow_constant(x, h, i * step)))
        x = flow_constant(x, h, b - a)
        out.append((b, x))
    return Polyline(tuple(out))


def integrate_rk4(c: ControlCurve, steps: int = 16) -> np.ndarray:
    """Float RK4 endpoint values at each breakpoint, shape (segments+1, dim).

    The vector fields come from the BCH stencil, not from the product
    polynomials used by ``integrate``.
    """
    group = c.group
    frame = _float_frame(group)
    x = np.array([float(v) for v in c.start.coords])
    out = [x.copy()]
    for (a, b), h in zip(zip(c.breakpoints, c.breakpoints[1:]), c.controls):
        hv = np.array([float(h[0]), float(h[1])])
        dt = float(b - a) / steps

        def f(y):
            return frame(y) @ hv

        for _ in range(steps):
            k1 = f(x)
            k2 = f(x + dt / 2 * k1)
            k3 = f(x + dt / 2 * k2)
            k4 = f(x + dt * k3)
            x = x + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        out.append(x.copy())
    return np.array(out)


def _float_frame(group: GroupDescriptor) -> Callable[[np.ndarray], np.ndarray]:
    def frame(y: np.ndarray) -> np.ndarray:
        return np.array(_vf_stencil(group, [float(v) for v in y]), dtype=float)

    return frame


def pansu_quotient(f: Callable[[Fraction], GroupPoint], t, s) -> GroupPoint:
    """delta_{1/s}(f(t)^{-1} f(t + s))."""
    t, s = rational(t), rational(s)
    if s == 0:
        raise ValueError("increment s must be nonzero")
    return dilate(1 / s, multiply(inverse(f(t)), f(t + s)))


def pansu_log(f: Callable[[Fraction], GroupPoint], t, s) -> AlgebraVector:
    """First-type coordinates of the Pansu quotient; horizontal limit reads
    directly as (h1, h2, 0, ...)."""
    return log_c2(pansu_quotient(f, t, s))


def sample_cone_curve(
    cone: ConeSpec,
    segments: int,
    seed: int,
    speed: tuple = (Fraction(1, 2), Fraction(2)),
    duration=1,
    start: GroupPoint | None = None,
    group: str | GroupDescriptor = F23,
) -> ControlCurve:
    """Random piecewise-constant control with every segment inside the open cone.

    Controls are a e + b e_perp with a in the speed range and b/a drawn from
    the slope range of the cone, rounded to the 2^-16 grid, and re-checked by
    the exact cone predicate (rejection). Segment lengths are random grid
    multiples rescaled to the requested duration.
    """
    if segments < 1:
        raise ValueError("segments must be >= 1")
    group = get_group(group)
    start = start if start is not None else GroupPoint.identity(group)
    rng = np.random.default_rng(seed)
    e1, e2 = cone.axis
    c = float(cone.cos_bound)
    slope = np.sqrt(max(1 - c * c, 0.0)) / c
    lo, hi = (float(v) for v in speed)
    norm_e = float(np.hypot(float(e1), float(e2)))
    controls = []
    while len(controls) < segments:
        a = Fraction(int(round(rng.uniform(lo, hi) / norm_e * GRID)), GRID)
        b = Fraction(int(round(rng.uniform(-slope, slope) * float(a) * GRID)), GRID)
        h = (a * e1 - b * e2, a * e2 + b * e1)
        if in_euclidean_cone(h, cone):
            controls.append(AlgebraVector.horizontal(group, *h))
    ticks = rng.integers(1, GRID + 1, size=segments)
    total = int(ticks.sum())
    scale = rational(duration) / total
    bps = [Fraction(0)]
    for k in ticks:
        bps.append(bps[-1] + int(k) * scale)
    return ControlCurve(tuple(bps), tuple(controls), start)
