"""Cone and semigroup predicates.

Three kinds of cones appear:

* the open Euclidean cone C(e, s) of horizontal vectors making a small angle
  with the axis e,
* the metric cone K(e, s) of points close to the subgroup N(e) relative to
  their norm,
* the closure of the semigroup generated by C(X2, s), described by explicit
  polynomial inequalities (one system for F(2,3), one for Engel).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .groups import ENGEL, F23, AlgebraVector, GroupPoint, inverse, multiply, rational
from .metric import (
    DEFAULT_RTOL,
    MetricParams,
    Root12,
    box_norm,
    dist_to_subgroup,
)

__all__ = [
    "ConeSpec",
    "in_euclidean_cone",
    "in_metric_cone",
    "semigroup_margins",
    "in_semigroup_closure",
    "in_translated_constraint",
    "LipschitzCheck",
    "is_intrinsic_lipschitz",
    "graph_cone_opening",
]


@dataclass(frozen=True)
class ConeSpec:
    """Axis e in the horizontal layer and opening sigma in (0, 1).

    The axis is any nonzero rational vector; predicates normalise it
    exactly, so (3/5, 4/5) and (3, 4) describe the same cone.
    """

    axis: tuple[Fraction, Fraction]
    sigma: Fraction

    def __post_init__(self):
        axis = self.axis
        if isinstance(axis, AlgebraVector):
            if not axis.is_horizontal():
                raise ValueError("cone axis must be horizontal")
            axis = axis.horizontal_part
        e1, e2 = (rational(c) for c in axis)
        if e1 == 0 and e2 == 0:
            raise ValueError("cone axis must be nonzero")
        sigma = rational(self.sigma)
        if not 0 < sigma < 1:
            raise ValueError(f"opening must lie in (0, 1), got {sigma}")
        object.__setattr__(self, "axis", (e1, e2))
        object.__setattr__(self, "sigma", sigma)

    @property
    def axis_norm_sq(self) -> Fraction:
        e1, e2 = self.axis
        return e1 * e1 + e2 * e2

    @property
    def cos_bound(self) -> Fraction:
        """1 - sigma^2, the cosine threshold of the Euclidean cone."""
        return 1 - self.sigma * self.sigma


def _horizontal(v) -> tuple[Fraction, Fraction]:
    if isinstance(v, AlgebraVector):
        if not v.is_horizontal():
            raise ValueError("expected a horizontal vector")
        return v.horizontal_part
    v = tuple(v)
    if len(v) > 2 and any(rational(c) for c in v[2:]):
        raise ValueError("expected a horizontal vector")
    return rational(v[0]), rational(v[1])


def in_euclidean_cone(v, cone: ConeSpec) -> bool:
    """<v, e> > (1 - sigma^2) |v| |e|, decided by sign and squaring."""
    v1, v2 = _horizontal(v)
    e1, e2 = cone.axis
    dot = v1 * e1 + v2 * e2
    if dot <= 0:
        return False
    c = cone.cos_bound
    return dot * dot > c * c * (v1 * v1 + v2 * v2) * cone.axis_norm_sq


def in_metric_cone(
    w: GroupPoint, cone: ConeSpec, p: MetricParams = MetricParams(), rtol=DEFAULT_RTOL
) -> bool | None:
    """dist(w, N(e)) <= sigma ||w||; None when the certified enclosure straddles."""
    bound = box_norm(w, p).scaled(cone.sigma)
    d = dist_to_subgroup(w, cone.axis, p, rtol=rtol)
    if d.upper <= bound:
        return True
    if d.lower > bound:
        return False
    return None


def semigroup_margins(x: GroupPoint) -> tuple[Fraction, ...]:
    """Left-hand sides of the closure inequalities (all must be >= 0)."""
    if x.group == F23:
        x1, x2, x3, x4, x5 = x.coords
        return (x2, x2**3 * x4 - 2 * x2**2 * x3**2 - 6 * x2 * x3 * x5 - 6 * x5**2)
    if x.group == ENGEL:
        x1, x2, x3, x4 = x.coords
        return (x2, x4, 2 * x2 * x4 - x3**2)
    raise ValueError(f"no semigroup description for {x.group.name}")


def in_semigroup_closure(x: GroupPoint) -> bool:
    """Membership in the closure of the semigroup generated by cones around X2."""
    return all(m >= 0 for m in semigroup_margins(x))


def in_translated_constraint(p: GroupPoint, q: GroupPoint) -> bool:
    """q lies in p . cl(X(X2, sigma)), i.e. q is reachable from p along a cone curve."""
    return in_semigroup_closure(multiply(inverse(p), q))


@dataclass(frozen=True)
class LipschitzCheck:
    holds: bool  # every pair satisfies the inequality at the cone's sigma
    sigma_min: Root12  # smallest opening that works for all pairs
    lipschitz: bool  # sigma_min < 1
    worst_pair: tuple | None
    undecided: int = 0  # pairs whose distance enclosure was not exact

    @property
    def sigma_float(self) -> float:
        return float(self.sigma_min)


def is_intrinsic_lipschitz(
    points: Sequence[tuple[object, GroupPoint]],
    cone: ConeSpec,
    p: MetricParams = MetricParams(),
) -> LipschitzCheck:
    """Check dist(Phi(s), Phi(t) N(e)) <= sigma ||Phi(t)^{-1} Phi(s)|| on all ordered pairs.

    ``points`` holds (t, Phi(t)) samples of a graph map. Non-exact distance
    enclosures are counted with their upper bound, so a pass is never
    optimistic.
    """
    params = [rational(t) for t, _ in points]
    if len(set(params)) != len(params):
        raise ValueError("duplicate graph parameters")
    pts = [x for _, x in points]
    inverses = [inverse(x) for x in pts]
    worst = Root12(0)
    worst_pair = None
    undecided = 0
    for a, (ta, inv_a) in enumerate(zip(params, inverses)):
        for b, (tb, xb) in enumerate(zip(params, pts)):
            if a == b:
                continue
            w = multiply(inv_a, xb)
            n = box_norm(w, p)
            if n.p12 == 0:
                continue
            d = dist_to_subgroup(w, cone.axis, p)
            if not d.exact:
                undecided += 1
            r = d.upper.ratio(n)
            if r > worst:
                worst, worst_pair = r, (ta, tb)
    return LipschitzCheck(
        holds=worst <= cone.sigma,
        sigma_min=worst,
        lipschitz=worst < 1,
        worst_pair=worst_pair,
        undecided=undecided,
    )


def _sqrt_exact(q: Fraction) -> Fraction | None:
    n, d = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if n * n == q.numerator and d * d == q.denominator:
        return Fraction(n, d)
    return None


def graph_cone_opening(sigma) -> Fraction | float:
    """sqrt(1 - sqrt(1 - sigma^2)): opening of the Euclidean cone met by the
    derivative of an intrinsic Lipschitz graph map with metric opening sigma.

    Exact Fraction when both radicals are rational, float otherwise.
    """
    s = rational(sigma)
    if not 0 <= s <= 1:
        raise ValueError(f"sigma must lie in [0, 1], got {s}")
    inner = _sqrt_exact(1 - s * s)
    if inner is not None:
        outer = _sqrt_exact(1 - inner)
        if outer is not None:
            return outer
    return math.sqrt(1 - math.sqrt(1 - float(s) ** 2))
