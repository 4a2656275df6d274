"""End-to-end acceptance criteria.

Each test records a PASS/FAIL line (see conftest); running this file
directly with ``python3 tests/test_acceptance.py`` prints the same lines.
"""

import time

import pytest

from acceptance_log import record
from diskduality.suites import (
    SuiteOptions,
    suite_cluster,
    suite_commutation,
    suite_compat,
    suite_dilog,
    suite_double,
    suite_flips,
    suite_gsum,
    suite_ia_props,
    suite_nl,
    suite_skein_oracle,
    suite_structure,
    suite_transformations,
)

pytestmark = pytest.mark.acceptance


def _run(number, title, suite, opts=None, limit=None):
    start = time.perf_counter()
    res = suite(opts or SuiteOptions())
    elapsed = time.perf_counter() - start
    ok = res.ok and (limit is None or elapsed < limit)
    detail = f"{res.count} checks, {res.failed} failed, {elapsed:.1f}s"
    if limit is not None and elapsed >= limit:
        detail += f", over the {limit}s budget"
    record(number, title, ok, detail)
    assert res.ok, res.failures[:5]
    if limit is not None:
        assert elapsed < limit
    return res


def test_criterion_01_flip_consistency():
    res = _run(1, "flip involution and matrix mutation, n = 4..7", suite_flips, limit=5)
    assert res.count == 2 * sum(len(T.diagonals) for n in range(4, 8) for T in _triangulations(n))


def test_criterion_02_compatibility():
    res = _run(2, "B^t Lambda = (4 Id | 0), n <= 8", suite_compat, limit=10)
    assert res.notes["triangulations n=8"] == 132


def test_criterion_03_commutation():
    _run(3, "X-chart and D-chart commutation relations, n <= 7", suite_commutation)


def test_criterion_04_transformations():
    _run(4, "X and B transformation formulas, every flip, n = 4..6", suite_transformations, limit=60)


def test_criterion_05_skein_oracle():
    res = _run(5, "superposition agrees with chart multiplication", suite_skein_oracle)
    assert res.notes["pairs n=6"] >= 200


def test_criterion_06_ia_properties():
    res = _run(6, "positivity, classical limit, star invariance, highest term", suite_ia_props, limit=300)
    assert res.count >= 31 * 5 + 100


def test_criterion_07_structure_constants():
    res = _run(7, "structure constants reconstruct products", suite_structure)
    assert res.count >= 121 + 50


def test_criterion_08_dilogarithm():
    _run(8, "dilogarithm identities, conjugation and mutation formulas", suite_dilog, SuiteOptions(order=8))


@pytest.mark.xfail(
    strict=True,
    reason="N_l depends on the chart when front and back curves cross; see the decision ledger",
)
def test_criterion_09_nl_chart_independence():
    _run(9, "N_l identical across all charts", suite_nl)


def test_criterion_10_double_duality():
    _run(10, "projection of I_D after phi equals I_A; classical I_D", suite_double)


def test_criterion_11_gsum():
    res = _run(11, "alternating g-vector sums lie in the exchange lattice", suite_gsum)
    assert res.count > 0


def test_criterion_12_cluster_positivity():
    _run(12, "shift 0, constant term 1, positive F-coefficients, n <= 8", suite_cluster, limit=120)


def _triangulations(n):
    from diskduality.polygon import enumerate_triangulations

    return enumerate_triangulations(n)


if __name__ == "__main__":  # pragma: no cover
    import sys

    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
