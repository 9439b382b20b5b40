"""Smooth-box quasi-norm, the induced left-invariant distance, and distances to
one-parameter subgroups.

The norm of x is read on the first-type coordinates g = log x:

    ||x|| = max(eps1 |g_1|, eps2 |g_2|^(1/2), eps3 |g_3|^(1/3)),

where g_w is the sub-vector of weight-w coordinates. Every term has a
rational twelfth power, so all order comparisons are done on those
twelfth powers and are exact. Floats appear only in reports.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Sequence

import numpy as np

from ._poly import Poly
from .groups import (
    AlgebraVector,
    GroupDescriptor,
    GroupPoint,
    bch_coords,
    get_group,
    inverse,
    multiply,
    rational,
)

__all__ = [
    "MetricParams",
    "Root12",
    "NormValue",
    "SubgroupDistance",
    "box_norm",
    "norm_of_log",
    "distance",
    "dist_to_subgroup",
    "calibrate",
    "box_norm_float",
]

DEFAULT_RTOL = Fraction(1, 2**40)


@dataclass(frozen=True)
class MetricParams:
    eps1: Fraction = Fraction(1)
    eps2: Fraction = Fraction(1, 4)
    eps3: Fraction = Fraction(1, 4)

    def __post_init__(self):
        for name in ("eps1", "eps2", "eps3"):
            value = rational(getattr(self, name))
            if value <= 0:
                raise ValueError(f"{name} must be positive, got {value}")
            object.__setattr__(self, name, value)

    def eps(self, weight: int) -> Fraction:
        return (self.eps1, self.eps2, self.eps3)[weight - 1]

    def as_dict(self) -> dict:
        return {"eps1": str(self.eps1), "eps2": str(self.eps2), "eps3": str(self.eps3)}


def _p12(q) -> Fraction:
    q = rational(q)
    if q < 0:
        raise ValueError(f"expected a nonnegative number, got {q}")
    return q**12


def _root12_float(p: Fraction) -> float:
    if p == 0:
        return 0.0
    return math.exp((math.log(p.numerator) - math.log(p.denominator)) / 12)


@total_ordering
class Root12:
    """A nonnegative real r represented exactly by the rational r**12."""

    __slots__ = ("p12",)

    def __init__(self, p12):
        p12 = rational(p12)
        if p12 < 0:
            raise ValueError("twelfth power must be nonnegative")
        self.p12 = p12

    @classmethod
    def of(cls, q) -> Root12:
        """The rational q >= 0 itself."""
        return cls(_p12(q))

    @staticmethod
    def _other(other) -> Fraction:
        if isinstance(other, Root12):
            return other.p12
        return _p12(other)

    def __eq__(self, other):
        try:
            return self.p12 == self._other(other)
        except (TypeError, ValueError):
            return NotImplemented

    def __lt__(self, other):
        return self.p12 < self._other(other)

    def __hash__(self):
        return hash(self.p12)

    def scaled(self, c) -> Root12:
        return Root12(self.p12 * _p12(c))

    def ratio(self, other: Root12) -> Root12:
        """self / other, still exact."""
        return Root12(self.p12 / other.p12)

    def exact(self) -> Fraction | None:
        """The value as a Fraction when it is rational, otherwise None."""
        num = _int_root(self.p12.numerator, 12)
        den = _int_root(self.p12.denominator, 12)
        if num is None or den is None:
            return None
        return Fraction(num, den)

    def __float__(self) -> float:
        return _root12_float(self.p12)

    def __repr__(self) -> str:
        ex = self.exact()
        return f"Root12({ex})" if ex is not None else f"Root12(~{float(self):.6g})"


def _int_root(n: int, k: int) -> int | None:
    if n == 0:
        return 0
    r = round(n ** (1.0 / k)) if n < 2**900 else int(math.exp(math.log(n) / k))
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand**k == n:
            return cand
    lo, hi = 0, 1 << (n.bit_length() // k + 2)
    while lo < hi:
        mid = (lo + hi) // 2
        if mid**k < n:
            lo = mid + 1
        else:
            hi = mid
    return lo if lo**k == n else None


class NormValue(Root12):
    """Box norm value with its per-layer terms and the winning layer.

    ``terms[w-1]`` is the twelfth power of the weight-w term; ``argmax`` is
    the (1-based) weight of the first maximal term.
    """

    __slots__ = ("terms", "argmax")

    def __init__(self, terms: Sequence[Fraction]):
        terms = tuple(terms)
        best = max(range(len(terms)), key=lambda i: (terms[i], -i))
        super().__init__(terms[best])
        self.terms = terms
        self.argmax = best + 1

    def __float__(self) -> float:
        return _root12_float(self.p12)

    def term(self, weight: int) -> Root12:
        return Root12(self.terms[weight - 1])

    def __repr__(self) -> str:
        return f"NormValue(~{float(self):.6g}, layer {self.argmax})"


def _layer_terms(group: GroupDescriptor, g: Sequence, p: MetricParams) -> list[Fraction]:
    terms = []
    for w in range(1, group.step + 1):
        sq = sum((g[i] * g[i] for i in group.layer(w)), Fraction(0))
        terms.append(p.eps(w) ** 12 * sq ** (6 // w))
    return terms


def norm_of_log(u: AlgebraVector, p: MetricParams = MetricParams()) -> NormValue:
    """Box norm of exp(u), given first-type coordinates u."""
    return NormValue(_layer_terms(u.group, u.coords, p))


def box_norm(x: GroupPoint, p: MetricParams = MetricParams()) -> NormValue:
    return NormValue(_layer_terms(x.group, x.group.log2(x.coords), p))


def distance(x: GroupPoint, y: GroupPoint, p: MetricParams = MetricParams()) -> NormValue:
    """d(x, y) = ||x^{-1} y||."""
    return box_norm(multiply(inverse(x), y), p)


# ---------------------------------------------------------------------------
# distance to a one-parameter subgroup


@dataclass(frozen=True)
class SubgroupDistance:
    """Certified enclosure lower <= dist(w, N(e)) <= upper.

    ``minimizer`` is a lambda at which the upper bound is attained by
    exp(lambda e).
    """

    lower: Root12
    upper: Root12
    minimizer: Fraction

    @property
    def exact(self) -> bool:
        return self.lower == self.upper

    def __float__(self) -> float:
        return float(self.upper)


def _axis(e, group: GroupDescriptor) -> tuple[Fraction, Fraction]:
    if isinstance(e, AlgebraVector):
        if not e.is_horizontal():
            raise ValueError("subgroup direction must be horizontal")
        e1, e2 = e.horizontal_part
    else:
        e = tuple(e)
        if len(e) == group.dim:
            if any(rational(c) for c in e[2:]):
                raise ValueError("subgroup direction must be horizontal")
            e = e[:2]
        e1, e2 = (rational(c) for c in e)
    if e1 == 0 and e2 == 0:
        raise ValueError("subgroup direction must be nonzero")
    return e1, e2


def dist_to_subgroup(
    w: GroupPoint,
    e,
    p: MetricParams = MetricParams(),
    rtol: Fraction = DEFAULT_RTOL,
    max_boxes: int = 20000,
) -> SubgroupDistance:
    """inf over lambda of d(w, exp(lambda e)).

    When log w commutes with e the infimum is attained in closed form by
    projecting the horizontal part; otherwise a branch-and-bound on the
    twelfth-power polynomials returns an enclosure of relative width rtol.
    """
    group = w.group
    e1, e2 = _axis(e, group)
    g = group.log2(w.coords)
    e_full = (e1, e2) + (Fraction(0),) * (group.dim - 2)
    if not any(group.bracket_coords(e_full, g)):
        e_sq = e1 * e1 + e2 * e2
        proj = g[0] * e1 + g[1] * e2
        perp_sq = g[0] * g[0] + g[1] * g[1] - proj * proj / e_sq
        terms = _layer_terms(group, g, p)
        terms[0] = p.eps1**12 * perp_sq**6
        value = NormValue(terms)
        return SubgroupDistance(value, value, proj / e_sq)
    return _branch_and_bound(group, g, (e1, e2), p, rational(rtol), max_boxes)


def _term_polys(group, g, e, p) -> list[Poly]:
    lam = Poly.var()
    minus = [-(e[0] * lam), -(e[1] * lam)] + [Poly([0])] * (group.dim - 2)
    u = bch_coords(group, minus, [Poly([c]) for c in g])
    polys = []
    for wt in range(1, group.step + 1):
        sq = Poly([0])
        for i in group.layer(wt):
            sq = sq + u[i] * u[i]
        polys.append(sq ** (6 // wt) * (p.eps(wt) ** 12))
    return polys


def _branch_and_bound(group, g, e, p, rtol, max_boxes) -> SubgroupDistance:
    polys = _term_polys(group, g, e, p)

    def value(lam: Fraction) -> Fraction:
        return max(q(lam) for q in polys)

    def lower(a: Fraction, b: Fraction) -> Fraction:
        return max(max(q.lower_bound(a, b), Fraction(0)) for q in polys)

    e_sq = e[0] * e[0] + e[1] * e[1]
    centre = (g[0] * e[0] + g[1] * e[1]) / e_sq
    best_lam = centre
    best = value(centre)

    # any minimiser has eps1 |g_h - lam e| <= current best
    radius = Fraction(max(float(Root12(best)) / float(p.eps1) / math.sqrt(float(e_sq)), 1e-12) * 1.01)
    while polys[0](centre - radius) < best or polys[0](centre + radius) < best:
        radius *= 2
    lo, hi = centre - radius, centre + radius

    # float candidates for a good starting upper bound
    cands = list(np.linspace(float(lo), float(hi), 65))
    fpolys = [np.polynomial.Polynomial(q.floats()) for q in polys]
    for i, qi in enumerate(fpolys):
        cands.extend(r.real for r in qi.deriv().roots() if abs(r.imag) < 1e-9)
        for qj in fpolys[i + 1 :]:
            cands.extend(r.real for r in (qi - qj).roots() if abs(r.imag) < 1e-9)
    for c in cands:
        if np.isfinite(c) and float(lo) <= c <= float(hi):
            lam = Fraction(c)
            v = value(lam)
            if v < best:
                best, best_lam = v, lam

    target = (1 - rtol) ** 12
    heap = [(lower(lo, hi), lo, hi)]
    boxes = 0
    floor = heap[0][0]
    while heap:
        lb, a, b = heapq.heappop(heap)
        floor = lb
        if lb >= best * target:
            break
        boxes += 1
        if boxes > max_boxes:
            break
        m = (a + b) / 2
        vm = value(m)
        if vm < best:
            best, best_lam = vm, m
        for lo2, hi2 in ((a, m), (m, b)):
            lb2 = lower(lo2, hi2)
            if lb2 < best:
                heapq.heappush(heap, (lb2, lo2, hi2))
    else:
        floor = best
    floor = min(floor, best)
    return SubgroupDistance(Root12(floor), Root12(best), best_lam)


# ---------------------------------------------------------------------------
# empirical calibration of the eps's


def box_norm_float(group: GroupDescriptor, x, p: MetricParams = MetricParams()):
    """Vectorised float box norm; x is a sequence of coordinate arrays."""
    g = group.log2(x)
    out = None
    for w in range(1, group.step + 1):
        sq = sum(g[i] * g[i] for i in group.layer(w))
        term = float(p.eps(w)) * np.power(sq, 1.0 / (2 * w))
        out = term if out is None else np.maximum(out, term)
    return out


def calibrate(
    p: MetricParams = MetricParams(),
    trials: int = 100_000,
    seed: int = 0,
    group: str | GroupDescriptor = "f23",
    scale: float = 1.0,
    n_worst: int = 5,
) -> dict:
    """Sample random triples and report the worst triangle-inequality quotient.

    The quotient d(x,z) / (d(x,y) + d(y,z)) never exceeds 1 for a genuine
    distance; witnesses above 1 are listed, never filtered.
    """
    group = get_group(group)
    rng = np.random.default_rng(seed)
    pts = rng.uniform(-scale, scale, size=(3, group.dim, trials))
    x, y, z = (tuple(pts[i]) for i in range(3))

    def d(a, b):
        return box_norm_float(group, group.mul(group.inv(a), b), p)

    dxz, dxy, dyz = d(x, z), d(x, y), d(y, z)
    with np.errstate(divide="ignore", invalid="ignore"):
        q = np.where(dxy + dyz > 0, dxz / (dxy + dyz), 0.0)
    order = np.argsort(-q)[:n_worst]
    worst = [
        {
            "quotient": float(q[i]),
            "x": [float(c[i]) for c in x],
            "y": [float(c[i]) for c in y],
            "z": [float(c[i]) for c in z],
        }
        for i in order
    ]
    return {
        "group": group.name,
        "params": p.as_dict(),
        "trials": int(trials),
        "seed": seed,
        "max_quotient": float(q.max()) if trials else 0.0,
        "violations": int(np.sum(q > 1 + 1e-12)),
        "worst_triples": worst,
    }
