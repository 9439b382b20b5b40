"""Graded automorphisms induced by linear maps of the horizontal layer.

On F(2,3) every invertible map L of span{X1, X2} extends uniquely to a Lie
algebra automorphism: the images of the higher basis vectors are forced by
the bracket relations (Y3 = [Y2, Y1], Y4 = [Y3, Y1], Y5 = [Y3, Y2]). On the
Engel algebra the extension exists only when L keeps the X2 axis, since X2
is the unique abnormal horizontal direction there.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .groups import (
    ENGEL,
    AlgebraVector,
    GroupDescriptor,
    GroupPoint,
    get_group,
    rational,
)

__all__ = ["Automorphism", "free_automorphism", "apply_automorphism", "orthogonal_frame"]

Matrix = tuple[tuple[Fraction, ...], ...]


def _matvec(m: Matrix, v: Sequence) -> tuple:
    return tuple(sum((a * b for a, b in zip(row, v)), Fraction(0)) for row in m)


def _transpose(m: Sequence[Sequence]) -> Matrix:
    return tuple(tuple(col) for col in zip(*m))


@dataclass(frozen=True)
class Automorphism:
    """A graded automorphism Psi with horizontal block L and algebra matrix A.

    Matrices are stored row-major; column j of ``matrix`` is the image of
    the basis vector X_{j+1}.
    """

    group: GroupDescriptor
    horizontal: Matrix
    matrix: Matrix

    def on_algebra(self, u: AlgebraVector) -> AlgebraVector:
        return AlgebraVector._raw(self.group, _matvec(self.matrix, u.coords))

    def __call__(self, x: GroupPoint) -> GroupPoint:
        return apply_automorphism(self, x)

    def inverse(self) -> Automorphism:
        (a, b), (c, d) = self.horizontal
        det = a * d - b * c
        return free_automorphism(((d / det, -b / det), (-c / det, a / det)), self.group)

    def compose(self, other: Automorphism) -> Automorphism:
        """self after other."""
        rows = self.matrix
        cols = _transpose(other.matrix)
        product = tuple(
            tuple(sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in cols)
            for row in rows
        )
        h = tuple(tuple(product[i][j] for j in range(2)) for i in range(2))
        return Automorphism(self.group, h, product)

    def preserves_layers(self) -> bool:
        w = self.group.weights
        return all(
            self.matrix[i][j] == 0
            for i in range(self.group.dim)
            for j in range(self.group.dim)
            if w[i] != w[j]
        )

    def preserves_brackets(self) -> bool:
        group = self.group
        n = group.dim
        cols = _transpose(self.matrix)
        basis = [tuple(Fraction(int(i == j)) for i in range(n)) for j in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                lhs = _matvec(self.matrix, group.bracket_coords(basis[i], basis[j]))
                rhs = tuple(group.bracket_coords(cols[i], cols[j]))
                if lhs != rhs:
                    return False
        return True


def free_automorphism(L: Sequence[Sequence], group: str | GroupDescriptor = "f23") -> Automorphism:
    """Extend the horizontal map L to a graded automorphism.

    ``L[i][j]`` is the X_{i+1}-component of the image of X_{j+1}, so the
    columns of L are Y1 = L(X1) and Y2 = L(X2).

    Raises ValueError for singular L, and on the Engel group whenever
    L(X2) leaves span{X2}.
    """
    group = get_group(group)
    L = tuple(tuple(rational(a) for a in row) for row in L)
    if len(L) != 2 or any(len(row) != 2 for row in L):
        raise ValueError("horizontal map must be a 2x2 matrix")
    (a, b), (c, d) = L
    if a * d - b * c == 0:
        raise ValueError("horizontal map is singular")
    if group == ENGEL and b != 0:
        raise ValueError(
            "no graded automorphism of the Engel group moves the X2 axis: "
            "X2 is its unique abnormal horizontal direction (need L(X2) = b*X2)"
        )
    n = group.dim
    zero = (Fraction(0),) * (n - 2)
    images: list[tuple | None] = [None] * n
    images[0] = (a, c) + zero
    images[1] = (b, d) + zero
    for i, j, k in group.brackets:
        images[k] = tuple(group.bracket_coords(images[i], images[j]))
    psi = Automorphism(group, L, _transpose(images))
    if not psi.preserves_brackets():
        raise ValueError(f"{L} does not extend to an automorphism of {group.name}")
    return psi


def apply_automorphism(psi: Automorphism, x: GroupPoint) -> GroupPoint:
    if x.group != psi.group:
        raise ValueError(f"group mismatch: {psi.group.name} vs {x.group.name}")
    group = psi.group
    u = group.log2(x.coords)
    return GroupPoint._raw(group, group.exp2(_matvec(psi.matrix, u)))


def orthogonal_frame(e: Sequence) -> Matrix:
    """Rotation sending X2 to e and X1 to the clockwise normal (e2, -e1).

    ``e`` must be a rational unit vector, e.g. a Pythagorean direction.
    """
    e1, e2 = (rational(v) for v in e)
    if e1 * e1 + e2 * e2 != 1:
        raise ValueError(f"direction {e1}, {e2} is not a unit vector")
    return ((e2, e1), (-e1, e2))
