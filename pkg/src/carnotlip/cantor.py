"""Fat Cantor set K and the strictly-monotone curve t -> (0, t, 0, gamma4(t), 0).

Level 1 is E_1 = {[0, 1]}. Level k is obtained from level k-1 by removing,
around the centre of every interval, an open gap of half-width 8^-(k-1);
it has 2^(k-1) closed intervals. A point of K is addressed by the sequence
of left (0) / right (1) choices made at each split.

The iterate gamma^k is constant in its fourth coordinate on each interval
(a "plateau"): on interval j of level k it equals omega(k, j), where a right
choice at split l lowers the value by eps3^-3 8^(-6 l).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from .groups import (
    F23,
    AlgebraVector,
    GroupDescriptor,
    GroupPoint,
    dilate,
    exp_c2,
    get_group,
    inverse,
    multiply,
    rational,
)
from .metric import MetricParams, box_norm
from .report import ExperimentReport, Stopwatch

__all__ = [
    "NotInCantorSet",
    "CantorLevel",
    "CantorPoint",
    "CurveIterate",
    "gap_halfwidth",
    "build_levels",
    "omega",
    "omega_table",
    "build_curve",
    "gamma_k",
    "gamma_k_recursive",
    "gamma_limit",
    "gamma4_exact",
    "truncation_error",
    "measure_K",
    "contraction_constant",
    "verify_iterate",
]

DEFAULT_EPS3 = MetricParams().eps3
_STEP = Fraction(1, 8**6)


class NotInCantorSet(ValueError):
    """Raised for a parameter that falls in a removed gap (or outside [0, 1])."""

    def __init__(self, t, level: int, gap: tuple[Fraction, Fraction] | None):
        self.t = t
        self.level = level
        self.gap = gap
        where = f"gap ({gap[0]}, {gap[1]})" if gap else "outside [0, 1]"
        super().__init__(f"t = {t} is not in C({level}): it lies in {where}")


def gap_halfwidth(k: int) -> Fraction:
    """Half-width of the gaps opened when passing from level k-1 to level k."""
    return Fraction(1, 8 ** (k - 1))


@dataclass(frozen=True)
class CantorLevel:
    k: int
    intervals: tuple[tuple[Fraction, Fraction], ...]

    def __len__(self) -> int:
        return len(self.intervals)

    def length(self) -> Fraction:
        return sum((b - a for a, b in self.intervals), Fraction(0))

    def endpoints(self) -> list[tuple[Fraction, int]]:
        """All interval endpoints as (t, 0-based interval index), increasing."""
        out = []
        for j, (a, b) in enumerate(self.intervals):
            out.append((a, j))
            out.append((b, j))
        return out

    def locate(self, t) -> int:
        """0-based index of the interval containing t."""
        t = rational(t)
        lo, hi = 0, len(self.intervals)
        while lo < hi:
            mid = (lo + hi) // 2
            if self.intervals[mid][1] < t:
                lo = mid + 1
            else:
                hi = mid
        if lo < len(self.intervals) and self.intervals[lo][0] <= t:
            return lo
        if lo == 0 or lo == len(self.intervals):
            raise NotInCantorSet(t, self.k, None)
        raise NotInCantorSet(t, self.k, (self.intervals[lo - 1][1], self.intervals[lo][0]))

    def contains(self, t) -> bool:
        try:
            self.locate(t)
        except NotInCantorSet:
            return False
        return True


@lru_cache(maxsize=None)
def _levels(k_max: int) -> tuple[CantorLevel, ...]:
    levels = [CantorLevel(1, ((Fraction(0), Fraction(1)),))]
    for k in range(2, k_max + 1):
        r = gap_halfwidth(k)
        split = []
        for a, b in levels[-1].intervals:
            c = (a + b) / 2
            split.append((a, c - r))
            split.append((c + r, b))
        levels.append(CantorLevel(k, tuple(split)))
    return tuple(levels)


def build_levels(k_max: int) -> list[CantorLevel]:
    """Levels E_1, ..., E_{k_max}, exact."""
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    return list(_levels(k_max))


def _digits(k: int, j: int) -> list[int]:
    """Address digits (split 1 first) of 1-based interval j at level k."""
    return [((j - 1) >> (k - 1 - l)) & 1 for l in range(1, k)]


def omega(k: int, j: int, eps3=DEFAULT_EPS3) -> Fraction:
    """Fourth-coordinate plateau value on interval j (1-based) of level k."""
    if k < 1 or not 1 <= j <= 2 ** (k - 1):
        raise IndexError(f"interval {j} does not exist at level {k}")
    eps3 = rational(eps3)
    tau = sum((d * _STEP**l for l, d in enumerate(_digits(k, j), start=1)), Fraction(0))
    return -tau / eps3**3


def omega_table(k: int, eps3=DEFAULT_EPS3) -> list[Fraction]:
    """All plateau values of level k, by the recurrence omega(k+1, 2j-1) = omega(k, j),
    omega(k+1, 2j) = omega(k, j) - eps3^-3 8^(-6k)."""
    eps3 = rational(eps3)
    table = [Fraction(0)]
    for level in range(1, k):
        drop = _STEP**level / eps3**3
        table = [v for w in table for v in (w, w - drop)]
    return table


def _plateau_point(group: GroupDescriptor, t: Fraction, w: Fraction) -> GroupPoint:
    coords = [Fraction(0)] * group.dim
    coords[1] = t
    coords[3] = w
    return GroupPoint._raw(group, tuple(coords))


@dataclass(frozen=True)
class CurveIterate:
    """gamma^k on C(k): interval data plus one plateau value per interval."""

    level: CantorLevel
    omega: tuple[Fraction, ...]
    eps3: Fraction
    group: GroupDescriptor = F23

    @property
    def k(self) -> int:
        return self.level.k

    def __call__(self, t) -> GroupPoint:
        t = rational(t)
        return _plateau_point(self.group, t, self.omega[self.level.locate(t)])

    def at(self, t: Fraction, j: int) -> GroupPoint:
        """gamma^k(t) for t already known to lie in interval j (0-based)."""
        return _plateau_point(self.group, t, self.omega[j])

    def endpoint_samples(self) -> list[tuple[Fraction, GroupPoint]]:
        return [(t, self.at(t, j)) for t, j in self.level.endpoints()]

    def gamma4(self, t) -> Fraction:
        return self.omega[self.level.locate(t)]


def build_curve(k: int, eps3=DEFAULT_EPS3, group: str | GroupDescriptor = F23) -> CurveIterate:
    eps3 = rational(eps3)
    return CurveIterate(_levels(k)[-1], tuple(omega_table(k, eps3)), eps3, get_group(group))


def gamma_k(t, k: int, eps3=DEFAULT_EPS3, group: str | GroupDescriptor = F23) -> GroupPoint:
    """The plateau point (0, t, 0, omega(k, j(t)), 0); raises NotInCantorSet in a gap."""
    return build_curve(k, eps3, group)(t)


def gamma_k_recursive(t, k: int, eps3=DEFAULT_EPS3, group: str | GroupDescriptor = F23) -> GroupPoint:
    """gamma^k built literally by left-translating gamma^(k-1) on even intervals
    by the inverse of the dilated X4-step. Slow; used as an oracle."""
    group = get_group(group)
    eps3 = rational(eps3)
    t = rational(t)
    if k == 1:
        _levels(1)[0].locate(t)
        return _plateau_point(group, t, Fraction(0))
    j = _levels(k)[-1].locate(t) + 1
    prev = gamma_k_recursive(t, k - 1, eps3, group)
    if j % 2:
        return prev
    step = exp_c2((1 / eps3**3) * AlgebraVector.basis(group, 4))
    return multiply(inverse(dilate(Fraction(1, 8 ** (2 * (k - 1))), step)), prev)


@dataclass(frozen=True)
class CantorPoint:
    """The point of K with address digits followed by an infinite tail.

    A tail of 0s gives the left endpoint of the interval selected by the
    digits, a tail of 1s its right endpoint; both are exact rationals.
    """

    digits: tuple[int, ...]
    tail: int = 0

    def __post_init__(self):
        digits = tuple(int(d) for d in self.digits)
        if any(d not in (0, 1) for d in digits) or self.tail not in (0, 1):
            raise ValueError("address digits must be 0 or 1")
        object.__setattr__(self, "digits", digits)

    @classmethod
    def endpoint(cls, k: int, j: int, side: str = "left") -> CantorPoint:
        """Left or right endpoint of interval j (1-based) of level k."""
        return cls(tuple(_digits(k, j)), 0 if side == "left" else 1)

    def address(self, n: int) -> tuple[int, ...]:
        """First n digits."""
        d = self.digits[:n]
        return d + (self.tail,) * (n - len(d))

    def interval_index(self, k: int) -> int:
        """0-based index of the level-k interval containing the point."""
        j = 0
        for d in self.address(k - 1):
            j = 2 * j + d
        return j

    @property
    def value(self) -> Fraction:
        k = len(self.digits) + 1
        a, b = _levels(k)[-1].intervals[self.interval_index(k)]
        return b if self.tail else a


def truncation_error(k: int, eps3=DEFAULT_EPS3) -> Fraction:
    """Certified bound on |gamma4 - gamma4^k|: eps3^-3 8^(-6k) / (1 - 8^-6)."""
    return _STEP**k / (1 - _STEP) / rational(eps3) ** 3


def gamma_limit(
    pt: CantorPoint, k_trunc: int, eps3=DEFAULT_EPS3, group: str | GroupDescriptor = F23
) -> tuple[GroupPoint, Fraction]:
    """gamma^k_trunc at a point of K together with the truncation error bound."""
    if k_trunc < 1:
        raise ValueError("k_trunc must be >= 1")
    eps3 = rational(eps3)
    tau = sum(
        (d * _STEP**l for l, d in enumerate(pt.address(k_trunc - 1), start=1)), Fraction(0)
    )
    point = _plateau_point(get_group(group), pt.value, -tau / eps3**3)
    return point, truncation_error(k_trunc, eps3)


def gamma4_exact(pt: CantorPoint, eps3=DEFAULT_EPS3) -> Fraction:
    """Closed form of gamma4 for an eventually constant address (geometric tail)."""
    eps3 = rational(eps3)
    n = len(pt.digits)
    tau = sum((d * _STEP**l for l, d in enumerate(pt.digits, start=1)), Fraction(0))
    if pt.tail:
        tau += _STEP ** (n + 1) / (1 - _STEP)
    return -tau / eps3**3


def measure_K(k=None) -> Fraction:
    """Lebesgue measure of C(k); the limit 2/3 for k = None or infinity."""
    if k is None or k == math.inf:
        return Fraction(2, 3)
    return _levels(int(k))[-1].length()


def contraction_constant(k) -> Fraction:
    """c(k) = (8^-1 - 8^-k) / (1 - 8^-1); tends to 1/7."""
    if k == math.inf:
        return Fraction(1, 7)
    return (Fraction(1, 8) - Fraction(1, 8**k)) / (1 - Fraction(1, 8))


# ---------------------------------------------------------------------------


def _tau_digits_ok(value: Fraction, k: int) -> bool:
    """value = sum_{l<k} tau_l 8^(-6l) with tau in {0,1}^(k-1)?"""
    scaled = value * 8 ** (6 * (k - 1))
    if scaled.denominator != 1 or scaled < 0:
        return False
    n = scaled.numerator
    base = 8**6
    for _ in range(k - 1):
        n, d = divmod(n, base)
        if d not in (0, 1):
            return False
    return n == 0


def verify_iterate(
    k: int,
    params: MetricParams = MetricParams(),
    group: str | GroupDescriptor = F23,
    max_witnesses: int = 10,
) -> ExperimentReport:
    """Exhaustive exact check of the level-k iterate.

    * ``ordering``: 2^(k-1) disjoint increasing intervals;
    * ``M``: 0 <= gamma4^(k-1) - gamma4^k <= eps3^-3 8^(-6(k-1)) on C(k);
    * ``P``: eps3 |d gamma4|^(1/3) <= c(k) |s - t| on all endpoint pairs;
    * ``T``: plateau values have binary digits in base 8^6;
    * ``gap``: values drop by at least eps3^-3 8^(-6(k-1)) across intervals;
    * ``isometry``: ||gamma(t)^-1 gamma(s)|| = eps1 |s - t| on all endpoint
      pairs, through the full group law and box norm.
    """
    if k < 2:
        raise ValueError("verify_iterate needs k >= 2")
    clock = Stopwatch()
    group = get_group(group)
    eps3 = params.eps3
    curve = build_curve(k, eps3, group)
    parent = build_curve(k - 1, eps3, group)
    level = curve.level
    om = curve.omega
    ck = contraction_constant(k)
    bound = _STEP ** (k - 1) / eps3**3
    counts: dict[str, dict] = {}
    witnesses: list[dict] = []
    metrics: dict = {"c_k": ck}

    def record(name, checked, bad):
        counts[name] = {"checked": checked, "violations": len(bad)}
        for w in bad[:max_witnesses]:
            witnesses.append({"check": name, **w})

    # ordering and cardinality
    bad = []
    if len(level) != 2 ** (k - 1):
        bad.append({"reason": "cardinality", "found": len(level)})
    for j, (a, b) in enumerate(level.intervals):
        if not a < b:
            bad.append({"reason": "empty", "interval": j})
        if j and not level.intervals[j - 1][1] < a:
            bad.append({"reason": "overlap", "interval": j})
    record("ordering", len(level), bad)

    # (M) per interval: plateau values make the check per interval exact
    bad = []
    worst_m = Fraction(0)
    for j, w in enumerate(om):
        drop = parent.omega[j // 2] - w
        worst_m = max(worst_m, drop / bound)
        if not 0 <= drop <= bound:
            bad.append({"interval": j, "drop": drop, "bound": bound})
    record("M", len(om), bad)
    metrics["M_worst_fraction_of_bound"] = worst_m

    # (T) membership
    bad = [
        {"interval": j, "omega": w}
        for j, w in enumerate(om)
        if not _tau_digits_ok(-w * eps3**3, k)
    ]
    record("T", len(om), bad)

    # gap across intervals (all ordered interval pairs)
    bad = []
    min_gap = None
    for j1, j2 in combinations(range(len(om)), 2):
        g = om[j1] - om[j2]
        min_gap = g if min_gap is None else min(min_gap, g)
        if g < bound:
            bad.append({"intervals": [j1, j2], "gap": g, "bound": bound})
    record("gap", len(om) * (len(om) - 1) // 2, bad)
    if min_gap is not None:
        metrics["gap_min_over_bound"] = min_gap / bound

    # (P) and isometry on endpoint pairs
    samples = curve.endpoint_samples()
    inverses = [inverse(x) for _, x in samples]
    bad_p, bad_iso = [], []
    worst_p = Fraction(0)
    ck3 = ck**3
    n_pairs = 0
    for a, b in combinations(range(len(samples)), 2):
        (t, x), (s, y) = samples[a], samples[b]
        n_pairs += 1
        dt = abs(s - t)
        dw = abs(y[3] - x[3])
        # eps3 |dw|^(1/3) <= c |dt|  <=>  eps3^3 |dw| <= c^3 |dt|^3
        lhs = eps3**3 * dw
        ratio = lhs / dt**3
        if ratio > worst_p:
            worst_p = ratio
        if lhs > ck3 * dt**3:
            bad_p.append({"t": t, "s": s, "ratio_cubed": ratio, "c_k_cubed": ck3})
        d = box_norm(multiply(inverses[a], y), params)
        if d != params.eps1 * dt:
            bad_iso.append({"t": t, "s": s, "norm": float(d), "expected": params.eps1 * dt})
    record("P", n_pairs, bad_p)
    record("isometry", n_pairs, bad_iso)
    metrics["P_worst_ratio_cubed"] = worst_p  # eps-free
    metrics["P_worst_ratio"] = float(worst_p) ** (1 / 3)

    passed = all(c["violations"] == 0 for c in counts.values())
    return ExperimentReport(
        name="verify_iterate",
        params={"depth": k, "group": group.name, **params.as_dict()},
        passed=passed,
        counts=counts,
        witnesses=witnesses,
        metrics=metrics,
        wall_ms=clock.ms(),
    )
