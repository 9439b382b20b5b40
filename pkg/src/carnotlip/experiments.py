"""Experiment drivers. Each returns an ExperimentReport that can be replayed
from its parameters alone (all randomness is seeded per trial)."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import numpy as np

from .automorphisms import free_automorphism, orthogonal_frame
from .cantor import build_curve, omega_table, truncation_error, verify_iterate
from .cones import ConeSpec, in_semigroup_closure, is_intrinsic_lipschitz, semigroup_margins
from .dynamics import integrate, pansu_log, sample_cone_curve
from .groups import (
    ENGEL,
    F23,
    GroupDescriptor,
    GroupPoint,
    get_group,
    inverse,
    multiply,
    rational,
)
from .metric import MetricParams, box_norm, box_norm_float
from .report import ExperimentReport, Stopwatch

__all__ = [
    "trial_seed",
    "reachability_experiment",
    "intersection_certificate",
    "monotonicity_gap",
    "lipschitz_experiment",
    "pansu_experiment",
    "monte_carlo_intersections",
    "transport_experiment",
    "engel_experiment",
]

_DEFAULT_SIGMAS = (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4))


def trial_seed(seed: int, *keys: int) -> int:
    """Deterministic per-trial seed derived from the run seed and trial keys."""
    return int(np.random.SeedSequence([seed, *keys]).generate_state(1)[0])


def _report(name, params, counts, witnesses, metrics, clock) -> ExperimentReport:
    passed = all(c.get("violations", 0) == 0 for c in counts.values())
    return ExperimentReport(name, params, passed, counts, witnesses, metrics, clock.ms())


# ---------------------------------------------------------------------------
# reachability


def reachability_experiment(
    sigmas=_DEFAULT_SIGMAS,
    trials: int = 200,
    segments: int = 20,
    seed: int = 0,
    group: str | GroupDescriptor = F23,
    max_witnesses: int = 10,
) -> ExperimentReport:
    """Flows of random cone controls around X2 from the identity must stay in
    the closed semigroup at every breakpoint."""
    clock = Stopwatch()
    group = get_group(group)
    sigmas = [rational(s) for s in sigmas]
    counts, witnesses = {}, []
    worst_margin = None
    for si, sigma in enumerate(sigmas):
        cone = ConeSpec((0, 1), sigma)
        checked = bad = 0
        for i in range(trials):
            curve = sample_cone_curve(cone, segments, trial_seed(seed, si, i), group=group)
            for t, x in integrate(curve).samples[1:]:
                checked += 1
                margins = semigroup_margins(x)
                m = min(margins)
                worst_margin = m if worst_margin is None else min(worst_margin, m)
                if m < 0:
                    bad += 1
                    if len(witnesses) < max_witnesses:
                        witnesses.append({"sigma": sigma, "trial": i, "t": t, "point": x, "margins": list(margins)})
        counts[f"sigma={sigma}"] = {"trials": trials, "checked": checked, "violations": bad}
    return _report(
        "reach",
        {"group": group.name, "sigmas": sigmas, "trials": trials, "segments": segments, "seed": seed},
        counts,
        witnesses,
        {"worst_margin": worst_margin},
        clock,
    )


# ---------------------------------------------------------------------------
# intersection certificate and monotonicity


def _curve_samples(depth: int, eps3, group: GroupDescriptor) -> list[tuple[Fraction, int, GroupPoint]]:
    curve = build_curve(depth, eps3, group)
    return [(t, j, curve.at(t, j)) for t, j in curve.level.endpoints()]


def intersection_certificate(
    depth: int = 8,
    group: str | GroupDescriptor = F23,
    params: MetricParams = MetricParams(),
    max_witnesses: int = 10,
) -> ExperimentReport:
    """For every pair of level-k curve points p = gamma(t0), q = gamma(t) with
    t0 < t in different intervals, q must lie outside p . cl(semigroup)."""
    if depth < 2:
        raise ValueError("depth must be >= 2")
    clock = Stopwatch()
    group = get_group(group)
    samples = _curve_samples(depth, params.eps3, group)
    inverses = [inverse(x) for _, _, x in samples]
    checked = excluded = 0
    bad = []
    worst = None  # largest (least negative) violated margin among all pairs
    for a, b in combinations(range(len(samples)), 2):
        (t0, j0, p), (t, j, q) = samples[a], samples[b]
        if j0 == j:
            excluded += 1
            continue
        checked += 1
        margins = semigroup_margins(multiply(inverses[a], q))
        m = min(margins)
        worst = m if worst is None else max(worst, m)
        if m >= 0:
            bad.append({"t0": t0, "t": t, "p": p, "q": q, "margins": list(margins)})
    counts = {
        "pairs": {"checked": checked, "violations": len(bad)},
        "same_interval_excluded": {"count": excluded},
    }
    return _report(
        "intersect",
        {"depth": depth, "group": group.name, **params.as_dict()},
        counts,
        bad[:max_witnesses],
        {"points": len(samples), "max_min_margin": worst},
        clock,
    )


def monotonicity_gap(k_max: int = 8, eps3=MetricParams().eps3) -> ExperimentReport:
    """For each level k <= k_max and intervals j1 < j2, the certified lower bound
    omega(k, j1) - err(k) - omega(k, j2) on gamma4(t) - gamma4(s) must be at
    least 5 eps3^-3 8^(-6k). (gamma4 <= omega on an interval, and the deficit
    is at most the truncation error.)"""
    clock = Stopwatch()
    eps3 = rational(eps3)
    counts, witnesses = {}, []
    worst_ratio = None
    for k in range(2, k_max + 1):
        om = omega_table(k, eps3)
        err = truncation_error(k, eps3)
        target = 5 / eps3**3 / 8 ** (6 * k)
        bad = 0
        # the tightest pairs are neighbours; all pairs are still scanned
        for j1, j2 in combinations(range(len(om)), 2):
            lower = om[j1] - err - om[j2]
            r = lower / target
            worst_ratio = r if worst_ratio is None else min(worst_ratio, r)
            if lower < target:
                bad += 1
                if len(witnesses) < 10:
                    witnesses.append({"k": k, "intervals": [j1 + 1, j2 + 1], "lower": lower, "target": target})
        counts[f"k={k}"] = {"checked": len(om) * (len(om) - 1) // 2, "violations": bad}
    return _report(
        "monotonicity_gap",
        {"k_max": k_max, "eps3": eps3},
        counts,
        witnesses,
        {"worst_lower_over_target": worst_ratio},
        clock,
    )


def lipschitz_experiment(
    depth: int = 8, sigma=Fraction(1, 7), params: MetricParams = MetricParams()
) -> ExperimentReport:
    """Intrinsic Lipschitz test of the level-k curve over N(X2) on all endpoint pairs."""
    clock = Stopwatch()
    curve = build_curve(depth, params.eps3)
    check = is_intrinsic_lipschitz(curve.endpoint_samples(), ConeSpec((0, 1), sigma), params)
    counts = {
        "pairs": {"checked": len(curve.level) * 2 * (len(curve.level) * 2 - 1), "undecided": check.undecided},
        "cone": {"violations": 0 if check.holds else 1},
    }
    return _report(
        "lipschitz",
        {"depth": depth, "sigma": rational(sigma), **params.as_dict()},
        counts,
        [] if check.holds else [{"pair": list(check.worst_pair), "sigma_min": check.sigma_float}],
        {"sigma_min": check.sigma_min, "lipschitz": check.lipschitz},
        clock,
    )


# ---------------------------------------------------------------------------
# Pansu quotients of the curve


def pansu_experiment(
    depth: int = 8, n_scales: int = 10, params: MetricParams = MetricParams()
) -> ExperimentReport:
    """Pansu quotients of gamma^k at the midpoint of every plateau interval for
    s = 2^-1, ..., 2^-n (scales with t + s outside C(k) are skipped).

    ``horizontal``: first-type coordinates of the quotient are exactly
    (0, 1, 0, q4, 0), i.e. the horizontal part is X2 and only the fourth
    component can be nonzero.
    ``monotone_decay``: |q4| is non-increasing as s decreases.
    """
    clock = Stopwatch()
    curve = build_curve(depth, params.eps3)
    level = curve.level
    bad_h, bad_m = [], []
    sequences = evaluated = 0
    sup: dict[int, Fraction] = {}
    for j, (a, b) in enumerate(level.intervals):
        t = (a + b) / 2
        seq = []
        for n in range(1, n_scales + 1):
            s = Fraction(1, 2**n)
            if not level.contains(t + s):
                continue
            g = pansu_log(curve, t, s)
            evaluated += 1
            if (g[0], g[1], g[2]) != (0, 1, 0) or any(g[i] for i in range(4, len(g))):
                bad_h.append({"t": t, "s": s, "log_quotient": g})
            q4 = abs(g[3])
            sup[n] = max(sup.get(n, Fraction(0)), q4)
            seq.append((s, q4))
        sequences += 1
        rises = [(s2, v1, v2) for (s1, v1), (s2, v2) in zip(seq, seq[1:]) if v2 > v1]
        if rises:
            s2, v1, v2 = rises[0]
            bad_m.append({"t": t, "s": s2, "previous": v1, "value": v2})
    counts = {
        "horizontal": {"checked": evaluated, "violations": len(bad_h)},
        "monotone_decay": {"checked": sequences, "violations": len(bad_m)},
    }
    witnesses = [{"check": "horizontal", **w} for w in bad_h[:5]]
    witnesses += [{"check": "monotone_decay", **w} for w in bad_m[:5]]
    return _report(
        "pansu",
        {"depth": depth, "n_scales": n_scales, **params.as_dict()},
        counts,
        witnesses,
        {"sup_q4_by_scale": {f"2^-{n}": float(v) for n, v in sorted(sup.items())}},
        clock,
    )


# ---------------------------------------------------------------------------
# Monte Carlo companion


def monte_carlo_intersections(
    depth: int = 8,
    cone: ConeSpec = ConeSpec((0, 1), Fraction(1, 2)),
    trials: int = 100,
    seed: int = 0,
    tol: float = 2.0**-12,
    segments: int = 20,
    refine: int = 4,
    params: MetricParams = MetricParams(),
) -> ExperimentReport:
    """Start random full cone curves at random curve points and count how many
    separated clusters of curve parameters each one comes within ``tol`` of.

    Clusters are maximal runs of approached parameters spaced by at most
    2 tol. The result is tolerance-dominated when tol is at least half the
    minimum pairwise distance between curve points (they then blur together).
    """
    clock = Stopwatch()
    group = F23
    samples = _curve_samples(depth, params.eps3, group)
    ts = np.array([float(t) for t, _, _ in samples])
    pts = np.array([[float(c) for c in x.coords] for _, _, x in samples]).T
    # isometry: min pairwise distance equals the min parameter gap
    min_dist = float(np.min(np.diff(ts)))
    dominated = tol >= min_dist / 2
    max_clusters = 0
    histogram: dict[int, int] = {}
    witnesses = []
    rng = np.random.default_rng(trial_seed(seed, 0))
    for i in range(trials):
        i0 = int(rng.integers(len(samples)))
        start = samples[i0][2]
        duration = Fraction(1, 4)
        curve = sample_cone_curve(cone, segments, trial_seed(seed, 1, i), duration=duration, start=start)
        poly = integrate(curve, refine).points
        q = np.array([[float(c) for c in x.coords] for x in poly])
        near = np.zeros(len(samples), dtype=bool)
        for row in q:
            inv = group.inv(tuple(row))
            d = box_norm_float(group, group.mul(tuple(np.full(len(ts), v) for v in inv), tuple(pts)), params)
            near |= d < tol
        hits = np.sort(ts[near])
        clusters = 0 if hits.size == 0 else 1 + int(np.sum(np.diff(hits) > 2 * tol))
        histogram[clusters] = histogram.get(clusters, 0) + 1
        if clusters > max_clusters:
            max_clusters = clusters
        if clusters > 1 and len(witnesses) < 5:
            witnesses.append({"trial": i, "start_t": samples[i0][0], "clusters": clusters})
    violations = 0 if dominated else int(max_clusters > 1)
    return _report(
        "monte_carlo",
        {"depth": depth, "axis": list(cone.axis), "sigma": cone.sigma, "trials": trials, "seed": seed,
         "tol": tol, "segments": segments, "refine": refine},
        {"trials": {"checked": trials, "violations": violations}},
        witnesses,
        {"max_clusters": max_clusters, "histogram": {str(k): v for k, v in sorted(histogram.items())},
         "tolerance_dominated": dominated, "min_pairwise_distance": min_dist},
        clock,
    )


# ---------------------------------------------------------------------------
# transport to an arbitrary direction


def _random_point(rng, group: GroupDescriptor) -> GroupPoint:
    return GroupPoint._raw(
        group, tuple(Fraction(int(a), int(b)) for a, b in zip(rng.integers(-20, 21, group.dim), rng.integers(1, 9, group.dim)))
    )


def transport_experiment(
    e=(Fraction(3, 5), Fraction(4, 5)),
    depth: int = 6,
    pairs: int = 100,
    seed: int = 0,
    lip_samples: int = 2000,
    params: MetricParams = MetricParams(),
) -> ExperimentReport:
    """Move the curve to direction e with the automorphism Psi extending the
    rotation L (L X2 = e) and re-run the checks on the transported curve."""
    clock = Stopwatch()
    e = tuple(rational(c) for c in e)
    L = orthogonal_frame(e)
    psi = free_automorphism(L, F23)
    psi_inv = psi.inverse()
    rng = np.random.default_rng(trial_seed(seed, 2))
    counts, witnesses = {}, []

    def record(name, checked, bad):
        counts[name] = {"checked": checked, "violations": len(bad)}
        witnesses.extend({"check": name, **w} for w in bad[:5])

    record(
        "automorphism",
        2,
        [{"reason": r} for r, ok in (("layers", psi.preserves_layers()), ("brackets", psi.preserves_brackets())) if not ok],
    )
    bad = []
    for _ in range(pairs):
        x, y = _random_point(rng, F23), _random_point(rng, F23)
        if psi(multiply(x, y)) != multiply(psi(x), psi(y)):
            bad.append({"x": x, "y": y})
    record("homomorphism", pairs, bad)

    curve = build_curve(depth, params.eps3)
    samples = [(t, j, curve.at(t, j)) for t, j in curve.level.endpoints()]
    moved = [psi(x) for _, _, x in samples]

    # (a) Pansu quotient of Psi o gamma inside plateaus is exactly e
    bad = []
    checked = 0
    for j, (a, b) in enumerate(curve.level.intervals):
        t = (a + b) / 2
        s = (b - a) / 4
        g = pansu_log(lambda u: psi(curve(u)), t, s)
        checked += 1
        if tuple(g.horizontal_part) != e or any(g[i] for i in range(2, len(g))):
            bad.append({"t": t, "s": s, "log_quotient": g})
    record("pansu_direction", checked, bad)

    # (b) certificate on the transported points through their preimages
    bad = []
    checked = 0
    pre = [psi_inv(y) for y in moved]
    bad_pre = [{"t": t} for (t, _, x), z in zip(samples, pre) if x != z]
    record("preimage", len(samples), bad_pre)
    inverses = [inverse(z) for z in pre]
    for a, b in combinations(range(len(samples)), 2):
        if samples[a][1] == samples[b][1]:
            continue
        checked += 1
        if in_semigroup_closure(multiply(inverses[a], pre[b])):
            bad.append({"t0": samples[a][0], "t": samples[b][0]})
    record("certificate", checked, bad)

    # (c) Psi is an isometry: exact on the curve pairs, sampled in floats
    bad = []
    for a in range(0, len(samples), max(1, len(samples) // 16)):
        for b in range(len(samples)):
            w = multiply(inverse(samples[a][2]), samples[b][2])
            if box_norm(psi(w), params) != box_norm(w, params):
                bad.append({"t0": samples[a][0], "t": samples[b][0]})
    record("isometry", len(samples) * len(range(0, len(samples), max(1, len(samples) // 16))), bad)
    pts = rng.normal(size=(F23.dim, lip_samples))
    x = tuple(pts)
    A = np.array([[float(c) for c in row] for row in psi.matrix])
    u = np.array(F23.log2(x))
    image = F23.exp2(tuple(A @ u))
    ratio = box_norm_float(F23, image, params) / box_norm_float(F23, x, params)
    lip = float(np.max(ratio))

    return _report(
        "transport",
        {"e": list(e), "depth": depth, "pairs": pairs, "seed": seed, **params.as_dict()},
        counts,
        witnesses,
        {"L": [list(r) for r in L], "empirical_lipschitz": lip, "empirical_colipschitz": float(np.min(ratio))},
        clock,
    )


# ---------------------------------------------------------------------------
# Engel variant


def engel_experiment(
    depth: int = 8,
    trials: int = 200,
    segments: int = 20,
    seed: int = 0,
    params: MetricParams = MetricParams(),
) -> ExperimentReport:
    """Curve iterate, reachability and certificate in the Engel group, plus the
    refusal to transport off the X2 axis."""
    clock = Stopwatch()
    parts = {
        "verify": verify_iterate(depth, params, ENGEL),
        "reach": reachability_experiment(trials=trials, segments=segments, seed=seed, group=ENGEL),
        "intersect": intersection_certificate(depth, ENGEL, params),
    }
    counts = {}
    witnesses = []
    for name, rep in parts.items():
        viol = sum(c.get("violations", 0) for c in rep.counts.values())
        checked = sum(c.get("checked", 0) for c in rep.counts.values())
        counts[name] = {"checked": checked, "violations": viol}
        witnesses.extend({"check": name, **w} for w in rep.witnesses[:5])
    refused = []
    for direction in ((Fraction(3, 5), Fraction(4, 5)), (Fraction(1), Fraction(0))):
        try:
            free_automorphism(orthogonal_frame(direction), ENGEL)
        except ValueError as exc:
            refused.append(str(exc))
        else:
            witnesses.append({"check": "transport_refusal", "e": list(direction)})
    counts["transport_refusal"] = {"checked": 2, "violations": 2 - len(refused)}
    return _report(
        "engel",
        {"depth": depth, "trials": trials, "segments": segments, "seed": seed, **params.as_dict()},
        counts,
        witnesses,
        {"refusal_message": refused[0] if refused else None,
         "reach_worst_margin": parts["reach"].metrics["worst_margin"]},
        clock,
    )
