from fractions import Fraction as F

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from carnotlip.automorphisms import free_automorphism, orthogonal_frame
from carnotlip.groups import (
    ENGEL,
    F23,
    AlgebraVector,
    GroupPoint,
    bch,
    dilate,
    exp_c2,
    exp_c2_series,
    get_group,
    identity,
    inverse,
    inverse_log,
    log_c2,
    log_c2_series,
    multiply,
    multiply_bch,
)

from .strategies import groups, points, positive, rationals, vectors


def P(*c, group=F23):
    return GroupPoint(group, c)


def V(*c, group=F23):
    return AlgebraVector(group, c)


# --- structure -------------------------------------------------------------


@pytest.mark.parametrize("group", [F23, ENGEL])
def test_structure_constants_antisymmetric_and_jacobi(group):
    n = group.dim
    basis = [AlgebraVector.basis(group, i + 1) for i in range(n)]
    for a in basis:
        for b in basis:
            assert a.bracket(b) == -(b.bracket(a))
            for c in basis:
                jac = a.bracket(b.bracket(c)) + b.bracket(c.bracket(a)) + c.bracket(a.bracket(b))
                assert not any(jac.coords)


def test_f23_brackets():
    X = [AlgebraVector.basis(F23, i) for i in range(1, 6)]
    assert X[1].bracket(X[0]) == X[2]
    assert X[2].bracket(X[0]) == X[3]
    assert X[2].bracket(X[1]) == X[4]
    nonzero = {(1, 0), (0, 1), (2, 0), (0, 2), (2, 1), (1, 2)}
    for i in range(5):
        for j in range(5):
            if (i, j) not in nonzero:
                assert not any(X[i].bracket(X[j]).coords)


def test_engel_brackets():
    X = [AlgebraVector.basis(ENGEL, i) for i in range(1, 5)]
    assert X[0].bracket(X[1]) == X[2]
    assert X[0].bracket(X[2]) == X[3]
    assert not any(X[1].bracket(X[2]).coords)


def test_descriptors():
    assert (F23.dim, F23.weights, F23.step) == (5, (1, 1, 2, 3, 3), 3)
    assert (ENGEL.dim, ENGEL.weights) == (4, (1, 1, 2, 3))
    assert get_group("engel") is ENGEL
    with pytest.raises(ValueError):
        get_group("heisenberg")


# --- products --------------------------------------------------------------


def test_product_examples():
    assert multiply(P(1, 0, 0, 0, 0), P(0, 1, 0, 0, 0)) == P(1, 1, -1, F(1, 2), F(1, 2))
    assert multiply(P(0, 1, 0, 0, 0), P(1, 0, 0, 0, 0)) == P(1, 1, 0, 0, 0)
    x = P(1, F(2, 3), -3, 4, F(-5, 7))
    assert multiply(x, identity()) == x


def test_product_examples_against_bch_oracle():
    assert multiply_bch(P(1, 0, 0, 0, 0), P(0, 1, 0, 0, 0)) == P(1, 1, -1, F(1, 2), F(1, 2))
    assert multiply_bch(P(0, 1, 0, 0, 0), P(1, 0, 0, 0, 0)) == P(1, 1, 0, 0, 0)


def test_product_group_mismatch():
    with pytest.raises(ValueError):
        multiply(P(1, 0, 0, 0, 0), identity("engel"))


def test_wrong_dimension_rejected():
    with pytest.raises(ValueError):
        P(1, 2, 3)


def test_engel_product_symbolic():
    x = sympy.symbols("x1:5")
    y = sympy.symbols("y1:5")
    got = ENGEL.mul(x, y)
    want = (
        x[0] + y[0],
        x[1] + y[1],
        x[2] + y[2] + x[0] * y[1],
        x[3] + y[3] + x[0] * y[2] + x[0] ** 2 * y[1] / 2,
    )
    assert all(sympy.expand(a - b) == 0 for a, b in zip(got, want))


@pytest.mark.parametrize("group", [F23, ENGEL])
def test_frozen_product_matches_series_symbolically(group):
    n = group.dim
    x = sympy.symbols(f"x1:{n + 1}")
    y = sympy.symbols(f"y1:{n + 1}")
    log = lambda v: log_c2_series(group, list(v))
    z = exp_c2_series(group, [sympy.expand(c) for c in _bch_sym(group, log(x), log(y))])
    for a, b in zip(group.mul(x, y), z):
        assert sympy.expand(a - b) == 0


def _bch_sym(group, u, v):
    from carnotlip.groups import bch_coords

    return bch_coords(group, u, v)


# --- inverse ---------------------------------------------------------------


def test_inverse_examples():
    assert inverse(P(1, 0, 0, 0, 0)) == P(-1, 0, 0, 0, 0)
    assert inverse(P(1, 1, 0, 0, 0)) == P(-1, -1, -1, F(-1, 2), F(-1, 2))
    assert inverse(identity()) == identity()
    assert inverse_log(P(1, 1, 0, 0, 0)) == P(-1, -1, -1, F(-1, 2), F(-1, 2))


@given(groups.flatmap(points))
def test_inverse_both_sides(x):
    e = identity(x.group)
    assert multiply(x, inverse(x)) == e == multiply(inverse(x), x)
    assert inverse(x) == inverse_log(x)
    assert x.inverse() == inverse(x) and (x * inverse(x)).is_identity()


# --- dilations -------------------------------------------------------------


def test_dilation_examples():
    assert dilate(2, P(0, 1, 0, 1, 0)) == P(0, 2, 0, 8, 0)
    eps3 = F(1, 4)
    assert dilate(F(1, 64), P(0, 0, 0, eps3**-3, 0)) == P(0, 0, 0, eps3**-3 / 8**6, 0)
    with pytest.raises(ValueError):
        dilate(0, P(1, 0, 0, 0, 0))


@given(groups.flatmap(lambda g: st.tuples(points(g), points(g))), positive, positive)
def test_dilation_homomorphism_and_composition(xy, lam, mu):
    x, y = xy
    assert dilate(lam, multiply(x, y)) == multiply(dilate(lam, x), dilate(lam, y))
    assert dilate(lam, dilate(mu, x)) == dilate(lam * mu, x)


# --- BCH and coordinates ---------------------------------------------------


def test_bch_examples():
    X1, X2 = AlgebraVector.basis(F23, 1), AlgebraVector.basis(F23, 2)
    zero = V(0, 0, 0, 0, 0)
    assert bch(X1, zero) == X1
    # X1 + X2 + [X1,X2]/2 + [X1,[X1,X2]]/12 - [X2,[X1,X2]]/12, with [X1,X2] = -X3
    assert bch(X1, X2) == V(1, 1, F(-1, 2), F(1, 12), F(-1, 12))
    u = V(1, 2, 3, 4, 5)
    assert bch(u, -u) == zero


def test_exp_examples():
    for t in (F(0), F(3, 7), F(-2)):
        assert exp_c2(t * AlgebraVector.basis(F23, 2)) == P(0, t, 0, 0, 0)
    assert exp_c2(V(1, 1, 0, 0, 0)) == P(1, 1, F(-1, 2), F(1, 6), F(1, 3))


@given(groups.flatmap(vectors))
def test_exp_log_round_trip(u):
    assert log_c2(exp_c2(u)) == u
    assert list(exp_c2(u).coords) == exp_c2_series(u.group, list(u.coords))


@given(groups.flatmap(points))
def test_log_matches_series(x):
    assert list(log_c2(x).coords) == log_c2_series(x.group, list(x.coords))


@given(groups.flatmap(lambda g: st.tuples(points(g), points(g), points(g))))
def test_group_laws(xyz):
    x, y, z = xyz
    assert multiply(multiply(x, y), z) == multiply(x, multiply(y, z))
    assert multiply(x, y) == multiply_bch(x, y)
    assert exp_c2(bch(log_c2(x), log_c2(y))) == multiply(x, y)


def test_json_round_trip():
    x = P(F(1, 3), -2, 0, F(7, 5), 1)
    text = x.to_json()
    assert text == '["1/3", "-2", "0", "7/5", "1"]'
    assert GroupPoint.from_json(text, "f23") == x


# --- automorphisms ---------------------------------------------------------


def test_identity_automorphism():
    psi = free_automorphism(((1, 0), (0, 1)))
    assert psi.matrix == tuple(tuple(F(int(i == j)) for j in range(5)) for i in range(5))
    x = P(1, 2, 3, 4, 5)
    assert psi(x) == x


def test_quarter_turn_automorphism():
    # X1 -> X2, X2 -> -X1
    psi = free_automorphism(((0, -1), (1, 0)))
    cols = [psi.on_algebra(AlgebraVector.basis(F23, i)) for i in range(1, 6)]
    X = [AlgebraVector.basis(F23, i) for i in range(1, 6)]
    assert cols == [X[1], -X[0], X[2], X[4], -X[3]]


def test_engel_automorphisms():
    psi = free_automorphism(((1, 0), (0, 3)), ENGEL)
    assert psi.preserves_brackets() and psi.preserves_layers()
    free_automorphism(((2, 0), (5, -1)), ENGEL)
    with pytest.raises(ValueError, match="abnormal"):
        free_automorphism(((0, 1), (1, 0)), ENGEL)


def test_singular_rejected():
    with pytest.raises(ValueError):
        free_automorphism(((1, 2), (2, 4)))


invertible = st.tuples(rationals, rationals, rationals, rationals).filter(
    lambda m: m[0] * m[3] - m[1] * m[2] != 0
)


@given(invertible, points(F23), points(F23), positive)
def test_random_automorphisms(m, x, y, lam):
    psi = free_automorphism(((m[0], m[1]), (m[2], m[3])))
    assert psi.preserves_brackets() and psi.preserves_layers()
    assert psi(multiply(x, y)) == multiply(psi(x), psi(y))
    assert psi(dilate(lam, x)) == dilate(lam, psi(x))
    assert psi.inverse()(psi(x)) == x


def test_orthogonal_frame():
    L = orthogonal_frame((F(3, 5), F(4, 5)))
    psi = free_automorphism(L)
    assert psi.on_algebra(AlgebraVector.basis(F23, 2)).horizontal_part == (F(3, 5), F(4, 5))
    with pytest.raises(ValueError):
        orthogonal_frame((1, 1))
