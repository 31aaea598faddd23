"""Hypothesis strategies shared by the property tests."""

import numpy as np
from hypothesis import strategies as st

from nctorus.torus_algebra import AlgebraElement, DeformationAngle

IRRATIONAL_THETA = 2 * np.pi * (np.sqrt(5) - 1) / 2


def angles():
    """Deformation angles, including the commutative one."""
    return st.one_of(
        st.just(0.0),
        st.just(float(IRRATIONAL_THETA)),
        st.floats(min_value=-10.0, max_value=10.0, allow_nan=False),
    )


def amplitudes():
    """Bounded complex amplitudes."""
    part = st.floats(min_value=-2.0, max_value=2.0, allow_nan=False)
    return st.builds(complex, part, part)


def elements(angle, radius: int = 8, max_terms: int = 6):
    """Finite elements with support radius at most ``radius``."""
    index = st.integers(min_value=-radius, max_value=radius)
    return st.dictionaries(
        st.tuples(index, index), amplitudes(), min_size=0, max_size=max_terms
    ).map(lambda terms: AlgebraElement.from_terms(DeformationAngle.of(angle), terms))


def integer_elements(angle, radius: int = 8, max_terms: int = 6):
    """Elements with small integer amplitudes, exact under float arithmetic."""
    index = st.integers(min_value=-radius, max_value=radius)
    coeff = st.integers(min_value=-5, max_value=5).filter(bool)
    return st.dictionaries(
        st.tuples(index, index), coeff, min_size=1, max_size=max_terms
    ).map(lambda terms: AlgebraElement.from_terms(DeformationAngle.of(angle), terms))


def monomials(radius: int = 40):
    """Monomial labels (r, s)."""
    index = st.integers(min_value=-radius, max_value=radius)
    return st.tuples(index, index)


def positive_diagonal_pairs(max_size: int = 40):
    """Entries of two commuting positive diagonal operators in a shared basis."""
    entry = st.floats(min_value=0.0, max_value=10.0, allow_nan=False)
    return st.lists(st.tuples(entry, entry), min_size=1, max_size=max_size).map(
        lambda pairs: (np.array([a for a, _ in pairs]), np.array([b for _, b in pairs]))
    )


def singular_values(max_size: int = 200):
    """Nonincreasing nonnegative value lists."""
    entry = st.floats(min_value=0.0, max_value=5.0, allow_nan=False)
    return st.lists(entry, min_size=1, max_size=max_size).map(lambda v: sorted(v, reverse=True))
