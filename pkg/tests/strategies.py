"""Hypothesis strategies shared across the test modules."""

from hypothesis import strategies as st

from diskduality.coeff import OmegaLaurent
from diskduality.torus import SkewForm, TorusElement

small_ints = st.integers(min_value=-6, max_value=6)

laurent_dicts = st.dictionaries(st.integers(-12, 12), st.integers(-5, 5), max_size=6)
laurents = laurent_dicts.map(OmegaLaurent)
nonzero_laurents = laurents.filter(lambda x: not x.is_zero())


@st.composite
def skew_forms(draw, rank=None):
    m = rank if rank is not None else draw(st.integers(1, 4))
    mat = [[0] * m for _ in range(m)]
    for i in range(m):
        for j in range(i + 1, m):
            x = draw(st.integers(-3, 3))
            mat[i][j], mat[j][i] = x, -x
    return SkewForm(mat)


@st.composite
def torus_elements(draw, form, max_terms=4):
    terms = draw(
        st.dictionaries(
            st.tuples(*[st.integers(-2, 2)] * form.rank),
            laurents,
            max_size=max_terms,
        )
    )
    return TorusElement(form, terms)
