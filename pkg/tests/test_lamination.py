import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diskduality.lamination import (
    ALamination,
    DLamination,
    boundary_solutions,
    enumerate_alaminations,
    phi,
    random_alamination,
    random_dlamination,
    validate,
)
from diskduality.polygon import boundary_edges, chord, is_boundary

PENTAGON_EXAMPLE = ALamination(5, (((0, 2), 1), ((0, 4), -1), ((2, 3), -1), ((3, 4), 1)))


def brute_force(n, bound, box):
    """Oracle: scan every weight assignment in the box and keep the valid ones."""
    diags = [(a, b) for a in range(n) for b in range(a + 2, n) if not (a == 0 and b == n - 1)]
    edges = boundary_edges(n)
    out = set()
    for dw in itertools.product(range(bound + 1), repeat=len(diags)):
        chosen = [(d, w) for d, w in zip(diags, dw) if w]
        if any(
            (a < c < b < e) or (c < a < e < b)
            for ((a, b), _), ((c, e), _) in itertools.combinations(chosen, 2)
        ):
            continue
        for bw in itertools.product(range(-box, box + 1), repeat=len(edges)):
            lam = ALamination(n, tuple(chosen) + tuple(zip(edges, bw)))
            if lam.is_valid():
                out.add(lam)
    return out


def test_empty_lamination_is_valid():
    assert validate(ALamination(5, ())) is None
    assert validate(DLamination(5, (), ())) is None


def test_square_single_diagonal_has_no_boundary_solution():
    # vertex sums at 1 and 3 add to the boundary total, at 0 and 2 to the boundary total plus 2
    assert boundary_solutions(4, [-1, 0, -1, 0], box=10) == []
    assert all(not l.diagonals() for l in enumerate_alaminations(4, 2))


def test_pentagon_single_diagonal_example():
    assert validate(PENTAGON_EXAMPLE) is None
    image = phi(PENTAGON_EXAMPLE)
    assert dict(image.back) == {(0, 2): 1, (3, 4): 1}
    assert dict(image.front) == {(0, 4): 1, (2, 3): 1}
    assert image.is_valid()


def test_negative_diagonal_rejected():
    bad = ALamination(5, (((0, 2), -1), ((0, 1), 1), ((2, 3), 1), ((3, 4), -1), ((0, 4), 1)))
    assert validate(bad).startswith("diagonal positivity")


def test_crossing_and_vertex_violations():
    crossing = ALamination(5, (((0, 2), 1), ((1, 3), 1)))
    assert validate(crossing).startswith("noncrossing")
    assert validate(ALamination(5, (((0, 2), 1),))).startswith("vertex sum")


def test_d_lamination_violations():
    assert DLamination(5, (((0, 2), -1),), ()).validate().startswith("positive weights")
    assert DLamination(5, (((0, 2), 1), ((1, 3), 1)), ()).validate().startswith("noncrossing")
    assert DLamination(5, (((0, 2), 1),), ()).validate().startswith("vertex totals")
    both = DLamination(5, (((0, 1), 1),), (((0, 1), 1),))
    assert both.validate().startswith("boundary edge on both sides")


def test_phi_of_zero_is_empty():
    assert phi(ALamination(6, ())).is_empty()


def test_bound_zero_is_boundary_only():
    for n in (4, 5, 6):
        for l in enumerate_alaminations(n, 0):
            assert not l.diagonals() and l.is_valid()


@pytest.mark.parametrize("n, bound, box", [(4, 1, 3), (5, 1, 2)])
def test_enumeration_matches_brute_force(n, bound, box):
    assert set(enumerate_alaminations(n, bound, box)) == brute_force(n, bound, box)


@pytest.mark.parametrize("n", [4, 5, 6])
def test_enumeration_is_valid_unique_and_rotation_closed(n):
    ls = enumerate_alaminations(n, 2)
    assert len(ls) == len(set(ls))
    assert all(l.is_valid() for l in ls)
    if n % 2:
        # odd n: boundary weights are forced, so the set is exactly rotation invariant
        rotated = {ALamination(n, tuple((chord((a + 1) % n, (b + 1) % n), w) for (a, b), w in l.weights)) for l in ls}
        assert rotated == set(ls)


def test_enumeration_cap():
    with pytest.raises(ValueError, match="cap"):
        enumerate_alaminations(5, 99)


@settings(max_examples=50)
@given(st.integers(5, 7), st.integers(0, 10 ** 6))
def test_phi_always_validates(n, seed):
    l = random_alamination(n, 2, random.Random(seed))
    assert l.is_valid()
    d = phi(l)
    assert d.is_valid()
    # boundary weights go to exactly one side
    for c, w in l.weights:
        side = dict(d.back) if w > 0 else dict(d.front)
        if w:
            assert side[c] == abs(w)


@settings(max_examples=50)
@given(st.integers(4, 7), st.integers(0, 10 ** 6))
def test_random_d_laminations_are_valid(n, seed):
    assert random_dlamination(n, 2, random.Random(seed)).is_valid()


def test_json_round_trip():
    assert ALamination.from_json(5, PENTAGON_EXAMPLE.to_json()) == PENTAGON_EXAMPLE
    d = phi(PENTAGON_EXAMPLE)
    assert DLamination.from_json(5, d.to_json()) == d
    assert d.to_json()["back"] == [{"chord": [0, 2], "w": 1}, {"chord": [3, 4], "w": 1}]
    with pytest.raises(ValueError):
        ALamination.from_json(5, d.to_json())


def test_boundary_edges_only_on_boundary():
    for l in enumerate_alaminations(6, 1):
        for c, w in l.weights:
            if w < 0:
                assert is_boundary(c, 6)
