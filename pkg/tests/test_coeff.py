import math

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from diskduality.coeff import OmegaLaurent, OmegaRational, bar, is_nonneg_q_laurent, poly_product, t_binomial
from strategies import laurents, nonzero_laurents

W = sympy.Symbol("w")


def as_sympy(x: OmegaLaurent) -> sympy.Expr:
    return sum((c * W ** e for e, c in x.items()), sympy.Integer(0))


# -- bar ---------------------------------------------------------------------

def test_bar_of_zero_is_zero():
    assert bar(OmegaLaurent()).is_zero()


def test_bar_negates_exponents():
    assert bar(OmegaLaurent({2: 1, 0: 3})) == OmegaLaurent({-2: 1, 0: 3})


def test_bar_of_q_is_q_inverse():
    assert bar(OmegaLaurent.q(1)) == OmegaLaurent.q(-1)


@given(laurents)
def test_bar_is_an_involution(x):
    assert bar(bar(x)) == x


@given(laurents, laurents)
def test_bar_is_multiplicative(x, y):
    assert bar(x * y) == bar(x) * bar(y)


# -- positivity predicate ------------------------------------------------------

@pytest.mark.parametrize(
    "terms, expected",
    [({0: 1, 4: 1}, True), ({2: 1}, False), ({4: 1, 0: -1}, False), ({}, True), ({-8: 3}, True)],
)
def test_nonneg_q_laurent(terms, expected):
    assert is_nonneg_q_laurent(OmegaLaurent(terms)) is expected


# -- ring structure against sympy ---------------------------------------------------

@given(laurents, laurents)
def test_product_matches_sympy(x, y):
    assert sympy.expand(as_sympy(x * y) - as_sympy(x) * as_sympy(y)) == 0


@given(laurents, laurents, laurents)
def test_ring_axioms(x, y, z):
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + y == y + x
    assert x * y == y * x


@given(laurents, laurents)
def test_evaluation_at_one_is_a_ring_map(x, y):
    assert (x * y).eval_at_one() == x.eval_at_one() * y.eval_at_one()
    assert (x + y).eval_at_one() == x.eval_at_one() + y.eval_at_one()


def test_no_zero_coefficients_are_stored():
    x = OmegaLaurent({1: 1, 2: 0}) + OmegaLaurent({1: -1})
    assert x.is_zero() and x.terms == {}


@given(
    st.dictionaries(st.integers(-40, 40), st.integers(-(10 ** 20), 10 ** 20), min_size=20, max_size=60),
    st.dictionaries(st.integers(-40, 40), st.integers(-(10 ** 20), 10 ** 20), min_size=20, max_size=60),
    st.sampled_from([1, 2, 8]),
)
def test_packed_product_matches_schoolbook(a, b, step):
    a = {step * e: v for e, v in a.items() if v}
    b = {step * e + 3: v for e, v in b.items() if v}
    expected = {}
    for e1, v1 in a.items():
        for e2, v2 in b.items():
            expected[e1 + e2] = expected.get(e1 + e2, 0) + v1 * v2
    assert poly_product(a, b) == {e: v for e, v in expected.items() if v}


# -- text form -------------------------------------------------------------------

def test_text_form_is_ascending():
    assert OmegaLaurent({2: 1, 0: 3}).to_text() == "3 + w^2"


def test_q_mode_text():
    assert OmegaLaurent({4: 2, -4: 1}).to_text(q_mode=True) == "q^-1 + 2*q"


# -- rationals ---------------------------------------------------------------------

def test_rational_simplifies_exact_quotients():
    num = OmegaLaurent({4: 1, -4: -1})
    den = OmegaLaurent({2: 1, -2: -1})
    r = OmegaRational(num, den)
    assert r.is_laurent()
    assert r.to_laurent() == OmegaLaurent({2: 1, -2: 1})


def test_rational_zero_denominator_rejected():
    with pytest.raises(ZeroDivisionError):
        OmegaRational(1, 0)


@given(laurents, nonzero_laurents, laurents, nonzero_laurents)
def test_rational_arithmetic_matches_sympy(a, b, c, d):
    x, y = OmegaRational(a, b), OmegaRational(c, d)
    for ours, theirs in (
        (x + y, as_sympy(a) / as_sympy(b) + as_sympy(c) / as_sympy(d)),
        (x * y, as_sympy(a) * as_sympy(c) / (as_sympy(b) * as_sympy(d))),
    ):
        assert sympy.cancel(as_sympy(ours.num) / as_sympy(ours.den) - theirs) == 0


# -- t-binomials -----------------------------------------------------------------------

def sympy_t_binomial(r, p):
    t = sympy.Symbol("t")
    expr = sympy.Integer(1)
    for s in range(p):
        expr *= (t ** (r - s) - t ** (s - r)) / (t ** (p - s) - t ** (s - p))
    return sympy.cancel(expr), t


def test_t_binomial_empty_product():
    assert t_binomial(5, 0) == OmegaRational(1)


def test_t_binomial_single_factor():
    assert t_binomial(1, 1) == OmegaRational(1)


def test_t_binomial_two_one():
    # oracle: (t^2 - t^-2) / (t - t^-1) simplified by sympy
    expr, t = sympy_t_binomial(2, 1)
    assert sympy.expand(expr - (t + 1 / t)) == 0
    assert t_binomial(2, 1).to_laurent() == OmegaLaurent({1: 1, -1: 1})


def test_t_binomial_rejects_negative_p():
    with pytest.raises(ValueError):
        t_binomial(3, -1)


@pytest.mark.parametrize("r", range(0, 7))
def test_t_binomial_is_laurent_and_specialises_to_binomial(r):
    for p in range(0, r + 1):
        b = t_binomial(r, p)
        assert b.is_laurent()
        assert b.to_laurent().eval_at_one() == math.comb(r, p)
        expr, t = sympy_t_binomial(r, p)
        assert sympy.expand(expr - as_sympy(b.to_laurent()).subs(W, t)) == 0
