"""Hypothesis strategies shared by the module tests."""

from hypothesis import strategies as st

from quiverstab.exact import QQ, Field, Matrix, RationalPolynomial

small_primes = st.sampled_from([2, 3, 5, 7])
fields = st.one_of(st.just(QQ), small_primes.map(Field))
fractions = st.fractions(min_value=-20, max_value=20, max_denominator=7)

def scalars(field):
    if field.p is None:
        return fractions
    return st.integers(0, field.p - 1).map(field)

@st.composite
def matrices(draw, field=None, max_rows=4, max_cols=4, rows=None, cols=None):
    f = draw(fields) if field is None else field
    r = draw(st.integers(0, max_rows)) if rows is None else rows
    c = draw(st.integers(0, max_cols)) if cols is None else cols
    entries = draw(st.lists(st.lists(scalars(f), min_size=c, max_size=c), min_size=r, max_size=r))
    return Matrix.from_rows(entries, f, cols=c)

polynomials = st.lists(fractions, max_size=5).map(RationalPolynomial)

def nonzero_fractions():
    return fractions.filter(lambda x: x != 0)

__all__ = ["fields", "fractions", "matrices", "polynomials", "scalars", "nonzero_fractions", "Fraction"]
