"""Acceptance criteria, one test per criterion (criterion 10 has two parts).

A summary line per criterion is printed at the end of the pytest run.
"""

import random
import time
from fractions import Fraction as F

import pytest
import sympy

from carnotlip.cantor import build_levels, measure_K, verify_iterate
from carnotlip.cones import ConeSpec, is_intrinsic_lipschitz
from carnotlip.experiments import (
    intersection_certificate,
    monotonicity_gap,
    pansu_experiment,
    reachability_experiment,
    transport_experiment,
)
from carnotlip.groups import (
    ENGEL,
    F23,
    GroupPoint,
    bch,
    dilate,
    exp_c2,
    identity,
    inverse,
    log_c2,
    multiply,
    multiply_bch,
)


def _random_point(rng, group):
    return GroupPoint._raw(
        group, tuple(F(rng.randint(-50, 50), rng.randint(1, 12)) for _ in range(group.dim))
    )


@pytest.mark.parametrize("group", [F23, ENGEL], ids=["f23", "engel"])
def test_criterion_01_algebra_suite(group):
    rng = random.Random(20261016)
    e = identity(group)
    start = time.perf_counter()
    for _ in range(1000):
        x, y, z = (_random_point(rng, group) for _ in range(3))
        lam = F(rng.randint(1, 30), rng.randint(1, 30))
        xy = multiply(x, y)
        assert multiply(xy, z) == multiply(x, multiply(y, z))
        assert multiply(x, inverse(x)) == e == multiply(inverse(x), x)
        assert multiply(x, e) == x == multiply(e, x)
        assert dilate(lam, xy) == multiply(dilate(lam, x), dilate(lam, y))
        assert multiply_bch(x, y) == xy
        assert exp_c2(bch(log_c2(x), log_c2(y))) == xy
    elapsed = time.perf_counter() - start
    assert elapsed < 5, f"{elapsed:.2f} s"


def test_criterion_02_product_formula_regression():
    x = sympy.symbols("x1:6")
    y = sympy.symbols("y1:6")
    printed = [
        x[0] + y[0],
        x[1] + y[1],
        sympy.sympify("x3+y3-x1*y2"),
        sympy.sympify("x4+y4-x1*y3+x1**2*y2/2"),
        sympy.sympify("x5+y5+x1*x2*y2+x1*y2**2/2-x2*y3"),
    ]
    got = F23.mul(x, y)
    for ours, theirs in zip(got, printed):
        a = sympy.Poly(sympy.expand(ours), *x, *y).terms()
        b = sympy.Poly(sympy.expand(theirs), *x, *y).terms()
        assert sorted(a) == sorted(b)


def test_criterion_03_cantor_measure():
    levels = build_levels(12)
    for lv in levels:
        expected = F(2, 3) + F(1, 3) / 4 ** (lv.k - 1)
        assert lv.length() == expected == measure_K(lv.k)
    assert measure_K() == F(2, 3) >= F(2, 3)


def test_criterion_04_iterate_invariants_depth8():
    start = time.perf_counter()
    rep = verify_iterate(8)
    elapsed = time.perf_counter() - start
    assert rep.passed, rep.witnesses
    for name in ("M", "P", "T", "gap", "isometry", "ordering"):
        assert rep.counts[name]["violations"] == 0
    assert rep.counts["isometry"]["checked"] == 256 * 255 // 2
    assert elapsed < 60, f"{elapsed:.1f} s"


def test_criterion_05_intrinsic_lipschitz(depth8_curve):
    samples = depth8_curve.endpoint_samples()
    good = is_intrinsic_lipschitz(samples, ConeSpec((0, 1), F(1, 7)))
    assert good.holds and good.undecided == 0 and good.lipschitz
    tight = is_intrinsic_lipschitz(samples, ConeSpec((0, 1), F(1, 100)))
    assert not tight.holds and tight.undecided == 0


def test_criterion_06_monotonicity_gap():
    rep = monotonicity_gap(8)
    assert rep.passed, rep.witnesses
    assert rep.counts["k=8"]["checked"] == 128 * 127 // 2


@pytest.mark.parametrize("group", [F23, ENGEL], ids=["f23", "engel"])
def test_criterion_07_reachability(group):
    rep = reachability_experiment(
        sigmas=(F(1, 4), F(1, 2), F(3, 4)), trials=200, segments=20, seed=0, group=group
    )
    assert rep.passed, rep.witnesses
    assert all(c["trials"] == 200 for c in rep.counts.values())


@pytest.mark.parametrize("group", [F23, ENGEL], ids=["f23", "engel"])
def test_criterion_08_intersection_certificate(group):
    start = time.perf_counter()
    rep = intersection_certificate(8, group)
    elapsed = time.perf_counter() - start
    assert rep.passed, rep.witnesses
    assert rep.counts["pairs"]["checked"] == 256 * 255 // 2 - 128
    assert elapsed < 120, f"{elapsed:.1f} s"


@pytest.mark.parametrize("e", [(F(3, 5), F(4, 5)), (F(5, 13), F(12, 13)), (F(0), F(-1))], ids=lambda e: f"{e[0]},{e[1]}")
def test_criterion_09_transport(e):
    rep = transport_experiment(e, depth=6, pairs=100, seed=0)
    assert rep.passed, rep.witnesses
    assert rep.counts["homomorphism"]["checked"] == 100


@pytest.fixture(scope="module")
def pansu_report():
    return pansu_experiment(depth=8, n_scales=10)


def test_criterion_10a_pansu_horizontal_component(pansu_report):
    assert pansu_report.counts["horizontal"]["checked"] > 0
    assert pansu_report.counts["horizontal"]["violations"] == 0


def test_criterion_10b_pansu_monotone_decay(pansu_report):
    c = pansu_report.counts["monotone_decay"]
    assert c["violations"] == 0, (
        f"{c['violations']} of {c['checked']} base points show a non-monotone "
        f"fourth component; sup by scale: {pansu_report.metrics['sup_q4_by_scale']}"
    )
