from fractions import Fraction as F

import numpy as np
import pytest
import sympy
from hypothesis import given

from carnotlip.cantor import build_curve
from carnotlip.cones import ConeSpec, in_euclidean_cone, in_semigroup_closure
from carnotlip.dynamics import (
    GRID,
    ControlCurve,
    Polyline,
    _vf_stencil,
    flow_constant,
    integrate,
    integrate_rk4,
    pansu_log,
    pansu_quotient,
    sample_cone_curve,
    vf_matrix,
)
from carnotlip.groups import ENGEL, F23, AlgebraVector, GroupPoint, identity, multiply

from .strategies import groups, points, rationals

P5 = lambda *c: GroupPoint(F23, c)  # noqa: E731


def test_frame_examples():
    assert vf_matrix(identity()) == [[1, 0], [0, 1], [0, 0], [0, 0], [0, 0]]
    x = P5(F(2, 3), F(-1, 5), 7, 1, 2)
    cols = list(zip(*vf_matrix(x)))
    assert list(cols[0]) == [1, 0, 0, 0, 0]
    x1, x2 = x[0], x[1]
    assert list(cols[1]) == [0, 1, -x1, x1**2 / 2, x1 * x2]


@given(groups.flatmap(points))
def test_frame_matches_stencil_oracle(x):
    assert vf_matrix(x) == _vf_stencil(x.group, x.coords)


def test_frame_symbolic():
    x = sympy.symbols("x1:6")
    t = sympy.Symbol("t")
    prod = F23.mul(x, (0, t, 0, 0, 0))
    col = [sympy.diff(c, t).subs(t, 0) for c in prod]
    assert [sympy.simplify(c) for c in col] == [0, 1, -x[0], x[0] ** 2 / 2, x[0] * x[1]]


def test_flow_examples():
    for t in (F(1, 3), F(-2)):
        assert flow_constant(identity(), (0, 1), t) == P5(0, t, 0, 0, 0)
    assert flow_constant(identity(), (1, 1), 1) == P5(1, 1, F(-1, 2), F(1, 6), F(1, 3))
    with pytest.raises(ValueError):
        flow_constant(identity(), (0, 1, 1, 0, 0), 1)


@given(points(F23), rationals, rationals, rationals, rationals)
def test_flow_law(x, h1, h2, s, r):
    h = (h1, h2)
    assert flow_constant(flow_constant(x, h, s), h, r) == flow_constant(x, h, s + r)


def test_integrate_examples():
    c = ControlCurve((0, 1, 2), ((0, 1), (1, 0)), identity())
    assert integrate(c).end == P5(1, 1, 0, 0, 0)
    single = ControlCurve((0, F(3, 2)), ((F(1, 2), 1),), identity())
    assert integrate(single).end == flow_constant(identity(), (F(1, 2), 1), F(3, 2))
    line = integrate(single, refine=3)
    assert len(line) == 5 and line.times == [0, F(3, 8), F(3, 4), F(9, 8), F(3, 2)]


def test_control_curve_validation():
    with pytest.raises(ValueError):
        ControlCurve((0, 1), ((0, 1), (1, 0)), identity())
    with pytest.raises(ValueError):
        ControlCurve((0, 1, 1), ((0, 1), (1, 0)), identity())
    with pytest.raises(ValueError):
        ControlCurve((1, 2), ((0, 1),), identity())
    with pytest.raises(ValueError):
        Polyline(((F(1), identity()), (F(0), identity())))


@pytest.mark.parametrize("seed", range(3))
def test_rk4_cross_validation(seed):
    c = sample_cone_curve(ConeSpec((0, 1), F(1, 2)), 6, seed, speed=(F(1, 4), F(1)))
    exact = np.array([[float(v) for v in x.coords] for x in integrate(c).points])
    approx = integrate_rk4(c, steps=32)
    assert np.max(np.abs(exact - approx)) < 1e-8


def test_rk4_engel():
    c = sample_cone_curve(ConeSpec((0, 1), F(1, 2)), 4, 5, group="engel")
    exact = np.array([[float(v) for v in x.coords] for x in integrate(c).points])
    assert np.max(np.abs(exact - integrate_rk4(c, steps=32))) < 1e-8


@pytest.mark.parametrize("group", [F23, ENGEL])
@pytest.mark.parametrize("sigma", [F(1, 4), F(1, 2), F(3, 4)])
def test_reachability_small(group, sigma):
    for seed in range(10):
        c = sample_cone_curve(ConeSpec((0, 1), sigma), 8, seed, group=group)
        assert all(in_semigroup_closure(x) for x in integrate(c).points)


@given(points(F23))
def test_left_invariance_of_flows(z):
    c = sample_cone_curve(ConeSpec((0, 1), F(1, 2)), 3, 11)
    moved = integrate(c.translated(z)).points
    assert moved == [multiply(z, x) for x in integrate(c).points]


def test_sampler_deterministic_and_in_cone():
    cone = ConeSpec((F(3, 5), F(4, 5)), F(1, 2))
    a = sample_cone_curve(cone, 200, 42)
    assert a == sample_cone_curve(cone, 200, 42)
    assert a != sample_cone_curve(cone, 200, 43)
    assert all(in_euclidean_cone(h, cone) for h in a.controls)
    # a, b on the 2^-16 grid and axis entries in fifths
    assert all((c * GRID * 5).denominator == 1 for h in a.controls for c in h.horizontal_part)
    assert a.duration == 1


def test_sampler_degenerate_opening():
    c = sample_cone_curve(ConeSpec((0, 1), F(1, 10**6)), 50, 1)
    assert all(h[0] == 0 and h[1] > 0 for h in c.controls)


def test_sampler_rejects_zero_segments():
    with pytest.raises(ValueError):
        sample_cone_curve(ConeSpec((0, 1), F(1, 2)), 0, 1)


# --- Pansu quotients -------------------------------------------------------


def eta(t):
    return P5(0, t, 0, 0, 0)


@given(rationals, rationals.filter(lambda s: s != 0))
def test_pansu_of_axis_line(t, s):
    assert pansu_quotient(eta, t, s) == P5(0, 1, 0, 0, 0)


def test_pansu_zero_increment():
    with pytest.raises(ValueError):
        pansu_quotient(eta, 0, 0)


def test_pansu_on_one_plateau():
    curve = build_curve(5)
    a, b = curve.level.intervals[6]
    for n in range(2, 12):
        s = (b - a) / 2**n
        assert pansu_quotient(curve, a, s) == P5(0, 1, 0, 0, 0)


def test_pansu_across_plateaus_bounded():
    curve = build_curve(6)
    eps3 = curve.eps3
    ck3 = F(1, 7) ** 3
    iv = curve.level.intervals
    for j in range(len(iv) - 1):
        t, s = iv[j][1], iv[j + 1][0] - iv[j][1]
        g = pansu_log(curve, t, s)
        assert (g[0], g[1], g[2], g[4]) == (0, 1, 0, 0)
        assert eps3**3 * abs(g[3]) <= ck3


def test_pansu_piecewise_constant_control():
    h = AlgebraVector.horizontal(F23, F(1, 3), 1)
    c = ControlCurve((0, 1, 2), (h, (1, 0)), identity())

    def f(t):
        t = F(t)
        seg = c.segment(t)
        x = integrate(ControlCurve(c.breakpoints[: seg + 1], c.controls[:seg], c.start)).end if seg else c.start
        return flow_constant(x, c.controls[seg], t - c.breakpoints[seg])

    t = F(1, 2)
    for n in range(1, 11):
        s = F(1, 2**n) / 2
        g = pansu_log(f, t, s)
        assert g.horizontal_part == (F(1, 3), 1)
        assert not any(g.coords[2:])
        # second-type coordinates of the same quotient are exp of h
        q = pansu_quotient(f, t, s)
        assert q == flow_constant(identity(), h, 1)
