"""Exact algebra of the step-3 Carnot groups F(2,3) and Engel.

Group elements are stored in exponential coordinates of the second type,

    x = exp(x3 X3 + ... + xn Xn) . exp(x2 X2) . exp(x1 X1),

with the non-horizontal factor leftmost. With this ordering the product on
F(2,3) is the classical polynomial law

    x.y = (x1+y1, x2+y2, x3+y3-x1y2, x4+y4-x1y3+x1^2y2/2,
           x5+y5+x1x2y2+x1y2^2/2-x2y3).

Every coordinate kernel in this module is written with ring operations only,
so it accepts Fractions, floats, numpy arrays or sympy symbols. The public
``GroupPoint``/``AlgebraVector`` wrappers always hold Fractions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Callable, Iterable, Sequence

__all__ = [
    "GroupDescriptor",
    "GroupPoint",
    "AlgebraVector",
    "F23",
    "ENGEL",
    "get_group",
    "rational",
    "multiply",
    "inverse",
    "dilate",
    "bch",
    "bch_coords",
    "exp_c2",
    "log_c2",
    "exp_c2_series",
    "log_c2_series",
    "multiply_bch",
    "inverse_log",
    "identity",
]


def rational(value) -> Fraction:
    """Coerce ints, Fractions, floats (exactly) or "p/q" strings to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as a rational number")


# ---------------------------------------------------------------------------
# frozen polynomial laws


def _mul_f23(x, y):
    x1, x2, x3, x4, x5 = x
    y1, y2, y3, y4, y5 = y
    return (
        x1 + y1,
        x2 + y2,
        x3 + y3 - x1 * y2,
        x4 + y4 - x1 * y3 + x1 * x1 * y2 / 2,
        x5 + y5 + x1 * x2 * y2 + x1 * y2 * y2 / 2 - x2 * y3,
    )


def _inv_f23(x):
    # back-substitution in x.y = 0
    x1, x2, x3, x4, x5 = x
    y1 = -x1
    y2 = -x2
    y3 = x1 * y2 - x3
    y4 = x1 * y3 - x1 * x1 * y2 / 2 - x4
    y5 = x2 * y3 - x1 * x2 * y2 - x1 * y2 * y2 / 2 - x5
    return (y1, y2, y3, y4, y5)


def _exp_f23(u):
    u1, u2, u3, u4, u5 = u
    return (
        u1,
        u2,
        u3 - u1 * u2 / 2,
        u4 - u1 * u3 / 2 + u1 * u1 * u2 / 6,
        u5 - u2 * u3 / 2 + u1 * u2 * u2 / 3,
    )


def _log_f23(x):
    x1, x2, x3, x4, x5 = x
    return (
        x1,
        x2,
        x3 + x1 * x2 / 2,
        x4 + x1 * x3 / 2 + x1 * x1 * x2 / 12,
        x5 + x2 * x3 / 2 - x1 * x2 * x2 / 12,
    )


# Engel laws: generated once from the BCH series in the same coordinate
# convention, then frozen (see tests/test_groups.py for the regression).


def _mul_engel(x, y):
    x1, x2, x3, x4 = x
    y1, y2, y3, y4 = y
    return (
        x1 + y1,
        x2 + y2,
        x3 + y3 + x1 * y2,
        x4 + y4 + x1 * y3 + x1 * x1 * y2 / 2,
    )


def _inv_engel(x):
    x1, x2, x3, x4 = x
    y1 = -x1
    y2 = -x2
    y3 = -x3 - x1 * y2
    y4 = -x4 - x1 * y3 - x1 * x1 * y2 / 2
    return (y1, y2, y3, y4)


def _exp_engel(u):
    u1, u2, u3, u4 = u
    return (u1, u2, u3 + u1 * u2 / 2, u4 + u1 * u3 / 2 + u1 * u1 * u2 / 6)


def _log_engel(x):
    x1, x2, x3, x4 = x
    return (x1, x2, x3 - x1 * x2 / 2, x4 - x1 * x3 / 2 + x1 * x1 * x2 / 12)


# ---------------------------------------------------------------------------
# descriptors


@dataclass(frozen=True)
class GroupDescriptor:
    """Structure constants, grading and coordinate laws of one Carnot group.

    ``brackets`` lists the non-trivial relations ``[X_i, X_j] = X_k`` as
    0-based triples ``(i, j, k)``; every other bracket of basis vectors is
    zero up to antisymmetry. The same triples say how the higher basis
    vectors are generated from the horizontal ones.
    """

    name: str
    weights: tuple[int, ...]
    brackets: tuple[tuple[int, int, int], ...]
    _mul: Callable = field(repr=False, compare=False)
    _inv: Callable = field(repr=False, compare=False)
    _exp: Callable = field(repr=False, compare=False)
    _log: Callable = field(repr=False, compare=False)

    @property
    def dim(self) -> int:
        return len(self.weights)

    @property
    def step(self) -> int:
        return max(self.weights)

    def layer(self, weight: int) -> tuple[int, ...]:
        """Indices of the coordinates of the given homogeneous weight."""
        return tuple(i for i, w in enumerate(self.weights) if w == weight)

    def structure_constants(self) -> list[list[list[Fraction]]]:
        """Full table c[i][j][k] with [X_i, X_j] = sum_k c[i][j][k] X_k."""
        n = self.dim
        table = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
        for i, j, k in self.brackets:
            table[i][j][k] += 1
            table[j][i][k] -= 1
        return table

    def bracket_coords(self, u: Sequence, v: Sequence) -> list:
        out = [0 * u[0]] * self.dim
        for i, j, k in self.brackets:
            out[k] = out[k] + (u[i] * v[j] - u[j] * v[i])
        return out

    # raw coordinate kernels, generic over the coefficient ring
    def mul(self, x: Sequence, y: Sequence) -> tuple:
        return self._mul(x, y)

    def inv(self, x: Sequence) -> tuple:
        return self._inv(x)

    def exp2(self, u: Sequence) -> tuple:
        return self._exp(u)

    def log2(self, x: Sequence) -> tuple:
        return self._log(x)

    def __str__(self) -> str:
        return self.name


F23 = GroupDescriptor(
    name="f23",
    weights=(1, 1, 2, 3, 3),
    brackets=((1, 0, 2), (2, 0, 3), (2, 1, 4)),
    _mul=_mul_f23,
    _inv=_inv_f23,
    _exp=_exp_f23,
    _log=_log_f23,
)

ENGEL = GroupDescriptor(
    name="engel",
    weights=(1, 1, 2, 3),
    brackets=((0, 1, 2), (0, 2, 3)),
    _mul=_mul_engel,
    _inv=_inv_engel,
    _exp=_exp_engel,
    _log=_log_engel,
)

_GROUPS = {"f23": F23, "engel": ENGEL}


def get_group(name: str | GroupDescriptor) -> GroupDescriptor:
    if isinstance(name, GroupDescriptor):
        return name
    try:
        return _GROUPS[name.lower()]
    except KeyError:
        raise ValueError(f"unknown group {name!r}; expected 'f23' or 'engel'") from None


# ---------------------------------------------------------------------------
# points and algebra vectors


def _coerce(group: GroupDescriptor, values: Iterable) -> tuple[Fraction, ...]:
    coords = tuple(rational(v) for v in values)
    if len(coords) != group.dim:
        raise ValueError(
            f"{group.name} has dimension {group.dim}, got {len(coords)} coordinates"
        )
    return coords


class _Coordinates:
    __slots__ = ()

    group: GroupDescriptor
    coords: tuple[Fraction, ...]

    @classmethod
    def _raw(cls, group: GroupDescriptor, coords: tuple):
        obj = object.__new__(cls)
        object.__setattr__(obj, "group", group)
        object.__setattr__(obj, "coords", tuple(coords))
        return obj

    def __getitem__(self, i):
        return self.coords[i]

    def __iter__(self):
        return iter(self.coords)

    def __len__(self) -> int:
        return len(self.coords)

    def to_json(self) -> str:
        return json.dumps([str(c) for c in self.coords])

    @classmethod
    def from_json(cls, text: str, group: str | GroupDescriptor = "f23"):
        return cls(get_group(group), json.loads(text))

    def __repr__(self) -> str:
        body = ", ".join(str(c) for c in self.coords)
        return f"{type(self).__name__}({self.group.name}: {body})"


@dataclass(frozen=True, repr=False)
class GroupPoint(_Coordinates):
    """A group element in exponential coordinates of the second type."""

    group: GroupDescriptor
    coords: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "group", get_group(self.group))
        object.__setattr__(self, "coords", _coerce(self.group, self.coords))

    def __mul__(self, other: GroupPoint) -> GroupPoint:
        return multiply(self, other)

    def inverse(self) -> GroupPoint:
        return inverse(self)

    @classmethod
    def identity(cls, group: str | GroupDescriptor = "f23") -> GroupPoint:
        group = get_group(group)
        return cls._raw(group, (Fraction(0),) * group.dim)

    def is_identity(self) -> bool:
        return not any(self.coords)


@dataclass(frozen=True, repr=False)
class AlgebraVector(_Coordinates):
    """A Lie algebra element in the graded basis X_1, ..., X_n."""

    group: GroupDescriptor
    coords: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "group", get_group(self.group))
        object.__setattr__(self, "coords", _coerce(self.group, self.coords))

    @classmethod
    def basis(cls, group: str | GroupDescriptor, index: int) -> AlgebraVector:
        """The basis vector X_index (1-based, as in the literature)."""
        group = get_group(group)
        coords = [Fraction(0)] * group.dim
        coords[index - 1] = Fraction(1)
        return cls._raw(group, tuple(coords))

    @classmethod
    def horizontal(cls, group: str | GroupDescriptor, h1, h2) -> AlgebraVector:
        group = get_group(group)
        return cls(group, (h1, h2) + (0,) * (group.dim - 2))

    @property
    def horizontal_part(self) -> tuple[Fraction, Fraction]:
        return self.coords[0], self.coords[1]

    def is_horizontal(self) -> bool:
        return not any(self.coords[2:])

    def _check(self, other: AlgebraVector):
        if self.group is not other.group and self.group != other.group:
            raise ValueError(f"group mismatch: {self.group.name} vs {other.group.name}")

    def __add__(self, other: AlgebraVector) -> AlgebraVector:
        self._check(other)
        return AlgebraVector._raw(self.group, tuple(a + b for a, b in zip(self, other)))

    def __sub__(self, other: AlgebraVector) -> AlgebraVector:
        self._check(other)
        return AlgebraVector._raw(self.group, tuple(a - b for a, b in zip(self, other)))

    def __neg__(self) -> AlgebraVector:
        return AlgebraVector._raw(self.group, tuple(-a for a in self))

    def __rmul__(self, scalar) -> AlgebraVector:
        s = rational(scalar)
        return AlgebraVector._raw(self.group, tuple(s * a for a in self))

    def bracket(self, other: AlgebraVector) -> AlgebraVector:
        self._check(other)
        return AlgebraVector._raw(
            self.group, tuple(self.group.bracket_coords(self.coords, other.coords))
        )


def identity(group: str | GroupDescriptor = "f23") -> GroupPoint:
    return GroupPoint.identity(group)


def _same_group(x, y) -> GroupDescriptor:
    if x.group is not y.group and x.group != y.group:
        raise ValueError(f"group mismatch: {x.group.name} vs {y.group.name}")
    return x.group


# ---------------------------------------------------------------------------
# group operations


def multiply(x: GroupPoint, y: GroupPoint) -> GroupPoint:
    group = _same_group(x, y)
    return GroupPoint._raw(group, group.mul(x.coords, y.coords))


def inverse(x: GroupPoint) -> GroupPoint:
    return GroupPoint._raw(x.group, x.group.inv(x.coords))


def dilate(lam, x: GroupPoint) -> GroupPoint:
    """Homogeneous dilation: coordinate i is scaled by lam**weight(i).

    Negative factors are accepted (they are still graded automorphisms);
    zero is rejected.
    """
    lam = rational(lam)
    if lam == 0:
        raise ValueError("dilation factor must be nonzero")
    powers = {w: lam**w for w in set(x.group.weights)}
    return GroupPoint._raw(
        x.group, tuple(c * powers[w] for c, w in zip(x.coords, x.group.weights))
    )


def bch_coords(group: GroupDescriptor, u: Sequence, v: Sequence) -> list:
    """log(exp u . exp v) by the BCH series through bracket depth 3.

    Exact in any step-3 nilpotent algebra; generic over the coefficient ring.
    """
    br = group.bracket_coords
    uv = br(u, v)
    uuv = br(u, uv)
    vuv = br(v, uv)
    return [
        a + b + c / 2 + d / 12 - e / 12
        for a, b, c, d, e in zip(u, v, uv, uuv, vuv)
    ]


def bch(u: AlgebraVector, v: AlgebraVector) -> AlgebraVector:
    group = _same_group(u, v)
    return AlgebraVector._raw(group, tuple(bch_coords(group, u.coords, v.coords)))


def exp_c2(u: AlgebraVector) -> GroupPoint:
    """Second-type coordinates of exp(sum u_i X_i)."""
    return GroupPoint._raw(u.group, u.group.exp2(u.coords))


def log_c2(x: GroupPoint) -> AlgebraVector:
    """First-type (canonical) coordinates of a point given in second-type ones."""
    return AlgebraVector._raw(x.group, x.group.log2(x.coords))


# Series-based conversions. They share nothing with the frozen polynomials
# above and serve as the independent oracle for them.


def _axis(group: GroupDescriptor, index: int, value) -> list:
    out = [0 * value] * group.dim
    out[index] = value
    return out


def log_c2_series(group: GroupDescriptor, x: Sequence) -> list:
    top = [0 * x[0], 0 * x[0]] + list(x[2:])
    step = bch_coords(group, top, _axis(group, 1, x[1]))
    return bch_coords(group, step, _axis(group, 0, x[0]))


def exp_c2_series(group: GroupDescriptor, u: Sequence) -> list:
    step = bch_coords(group, list(u), _axis(group, 0, -u[0]))
    top = bch_coords(group, step, _axis(group, 1, -u[1]))
    return [u[0], u[1]] + list(top[2:])


def multiply_bch(x: GroupPoint, y: GroupPoint) -> GroupPoint:
    """Product computed as exp(BCH(log x, log y)); oracle for ``multiply``."""
    group = _same_group(x, y)
    z = bch_coords(group, log_c2_series(group, x.coords), log_c2_series(group, y.coords))
    return GroupPoint._raw(group, tuple(exp_c2_series(group, z)))


def inverse_log(x: GroupPoint) -> GroupPoint:
    """Inverse through the logarithm, exp(-log x); oracle for ``inverse``."""
    group = x.group
    u = log_c2_series(group, x.coords)
    return GroupPoint._raw(group, tuple(exp_c2_series(group, [-c for c in u])))
