from fractions import Fraction

import hypothesis.strategies as st

from danielewski.gaussian import GaussianRational
from danielewski.polynomials import MultiPoly

small_rationals = st.builds(
    Fraction,
    st.integers(min_value=-4, max_value=4),
    st.integers(min_value=1, max_value=4),
)

scalars = st.builds(GaussianRational, small_rationals, small_rationals)

nonzero_scalars = scalars.filter(bool)


def polys(vars=("x", "z", "w"), max_terms=4, max_exp=3):
    expos = st.tuples(*(st.integers(min_value=0, max_value=max_exp) for _ in vars))
    return st.dictionaries(expos, scalars, max_size=max_terms).map(
        lambda terms: MultiPoly(vars, terms)
    )


univariate = polys(vars=("t",), max_terms=4, max_exp=4)
