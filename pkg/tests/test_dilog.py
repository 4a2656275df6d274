import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diskduality import dilog
from diskduality.charts import x_chart
from diskduality.cluster import chart_monomial
from diskduality.coeff import OmegaLaurent, OmegaRational
from diskduality.polygon import Triangulation, enumerate_triangulations

A2 = dilog.DoubleSeed(((0, 1), (-1, 0)))


def test_psi_leading_coefficients():
    psi = dilog.psi_q(6)
    assert psi.coefficient(0) == OmegaRational(1)
    # first order: prod (1 + q^{2k-1} x)^{-1} starts 1 - q x / (1 - q^2)
    assert psi.coefficient(1) == OmegaRational(-OmegaLaurent.q(1), 1 - OmegaLaurent.q(2))
    inv = dilog.psi_q_inverse(6)
    assert inv.coefficient(1) == OmegaRational(OmegaLaurent.q(1), 1 - OmegaLaurent.q(2))


@pytest.mark.parametrize("N", [4, 12])
def test_functional_equations(N):
    results = dilog.check_functional_equations(N)
    assert results and all(results.values()), results


def test_series_product_detects_differences():
    psi = dilog.psi_q(5)
    assert not (psi * psi).is_one()
    assert psi.first_difference(psi) is None
    assert psi.first_difference(dilog.psi_q_inverse(5)) == 1


def test_seed_form_shape():
    f = A2.form.matrix
    assert f[0][1] == -4 and f[1][0] == 4
    assert f[0][2] == -4 and f[2][0] == 4
    assert f[2][3] == 0


def test_non_skew_matrix_rejected():
    with pytest.raises(ValueError):
        dilog.DoubleSeed(((0, 1), (1, 0)))


def test_mu_prime_examples():
    # X'_k = X_k^{-1}; B'_i unchanged off k
    assert dict(dilog.mu_prime(A2, 0, "X", 0).items()) == {(-1, 0, 0, 0): OmegaLaurent.const(1)}
    assert dict(dilog.mu_prime(A2, 0, "B", 1).items()) == {(0, 0, 0, 1): OmegaLaurent.const(1)}
    # eps[1][0] = -1 < 0 so e'_1 = e_1 in the lattice
    assert A2.map_vector(0, (0, 1, 0, 0)) == (0, 1, 0, 0)
    # eps[0][1] = 1 > 0: mutating at 1 adds e_1 to e'_0
    assert A2.map_vector(1, (1, 0, 0, 0)) == (1, 1, 0, 0)


@pytest.mark.parametrize("k", [0, 1])
def test_lattice_map_is_isometry(k):
    assert A2.is_isometry(k)


@pytest.mark.parametrize("k", [0, 1])
def test_a2_conjugation_and_mutation(k):
    for rep in (dilog.verify_conjugation_closed_forms(A2, k, 6), dilog.verify_mutation_formulas(A2, k, 6),
                dilog.verify_flip_back(A2, k)):
        assert rep.ok, rep.lines()


def test_push_through_polynomial():
    poly = dilog.TruncatedSeries([1, 2, OmegaLaurent.q(3)])
    assert dilog.verify_push_through(A2, 0, poly, (0, 1, 0, 0))
    assert dilog.verify_push_through(A2, 1, poly, (1, 0, 1, 0))


@settings(max_examples=10, deadline=None)
@given(st.sampled_from(enumerate_triangulations(5)), st.integers(0, 1))
def test_pentagon_full_seed(T, k):
    seed = dilog.seed_from_chart(T)
    rep = dilog.verify_mutation_formulas(seed, k, 5)
    assert rep.ok, rep.lines()


@pytest.mark.parametrize("T", enumerate_triangulations(5)[:3] + enumerate_triangulations(6)[:3], ids=lambda T: T.label())
def test_cluster_route_agrees_with_dilogarithm_route(T):
    """X' from Ptolemy expansions equals mu_sharp of the primed monomial, when it is a polynomial."""
    seed = dilog.seed_from_chart(T)
    xc = x_chart(T)
    J = T.mutable
    r = seed.rank
    for kpos, kj in enumerate(J):
        k = T.edges[kj]
        Tp = T.flip(k)
        emap = T.edge_map(k)
        for i, j in enumerate(J):
            if T.epsilon[j][kj] > 0:
                continue
            c = T.edges[j]
            v = list(Tp.epsilon[Tp.index[emap[c]]])
            cluster_side = xc.from_a_chart(chart_monomial(T, Tp, v))
            ((mv, mc),) = dilog.mu_prime(seed, kpos, "X", i).items()
            num, den = dilog.mu_sharp(seed, kpos, mv, 6)
            num = num.scale(mc)
            embedded = seed.monomial([0] * (2 * r))
            for a, coeff in cluster_side.items():
                embedded = embedded + seed.monomial(tuple(a) + (0,) * r, coeff * den)
            embedded = embedded - seed.monomial([0] * (2 * r))
            assert dilog._compare(num, embedded, kpos, mv[kpos] + 6) is None, (T.label(), k, c)


def test_rank_two_subsets_are_coupled():
    T = Triangulation.fan(6)
    subsets = dilog.rank_two_subsets(T)
    assert subsets == [(0, 1), (1, 2)]
