from fractions import Fraction

from hypothesis import strategies as st

from carnotlip.groups import ENGEL, F23, AlgebraVector, GroupPoint

rationals = st.fractions(min_value=-8, max_value=8, max_denominator=12)
positive = st.fractions(min_value=Fraction(1, 12), max_value=8, max_denominator=12)
groups = st.sampled_from([F23, ENGEL])


def points(group):
    return st.lists(rationals, min_size=group.dim, max_size=group.dim).map(
        lambda c: GroupPoint(group, c)
    )


def vectors(group):
    return st.lists(rationals, min_size=group.dim, max_size=group.dim).map(
        lambda c: AlgebraVector(group, c)
    )
