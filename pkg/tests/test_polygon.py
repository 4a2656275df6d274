import itertools
import math

import pytest

from diskduality.polygon import (
    Triangulation,
    all_diagonals,
    chord,
    compatibility_product,
    enumerate_triangulations,
    flip_neighbors,
    flip_path,
    is_boundary,
    mutate_matrix,
    parse_chord,
    permute_to,
)


def interleave(c1, c2):
    (a, b), (c, d) = sorted(c1), sorted(c2)
    return (a < c < b < d) or (c < a < d < b)


def brute_force_triangulations(n):
    """Oracle: all (n-3)-subsets of diagonals that are pairwise noncrossing."""
    diags = [(a, b) for a in range(n) for b in range(a + 2, n) if not (a == 0 and b == n - 1)]
    out = []
    for subset in itertools.combinations(diags, n - 3):
        if all(not interleave(x, y) for x, y in itertools.combinations(subset, 2)):
            out.append(tuple(sorted(subset)))
    return sorted(out)


def triangle_epsilon(T):
    """Oracle: each triangle a<b<c adds a 3-cycle ab -> ac, bc -> ab, ca -> cb."""
    idx = T.index
    edges = set(T.edges)
    m = T.rank
    eps = [[0] * m for _ in range(m)]
    for a, b, c in itertools.combinations(range(T.n), 3):
        sides = [chord(a, b), chord(b, c), chord(a, c)]
        if not all(s in edges for s in sides):
            continue
        for i, j in ((chord(a, b), chord(a, c)), (chord(b, c), chord(a, b)), (chord(a, c), chord(b, c))):
            eps[idx[i]][idx[j]] -= 1
            eps[idx[j]][idx[i]] += 1
    return tuple(map(tuple, eps))


@pytest.mark.parametrize("n", range(3, 9))
def test_enumeration_matches_brute_force_and_catalan(n):
    Ts = enumerate_triangulations(n)
    assert len(Ts) == math.comb(2 * (n - 2), n - 2) // (n - 1)
    if n <= 7:
        assert [T.diagonals for T in Ts] == brute_force_triangulations(n)


def test_enumeration_bound():
    with pytest.raises(ValueError, match="bound"):
        enumerate_triangulations(40)


def test_square_flip():
    T = Triangulation(4, ((0, 2),))
    assert T.flip((0, 2)).diagonals == ((1, 3),)


def test_pentagon_flip():
    T = Triangulation(5, ((0, 2), (0, 3)))
    assert set(T.flip((0, 2)).diagonals) == {(1, 3), (0, 3)}


def test_flip_rejects_boundary_edges():
    with pytest.raises(ValueError):
        Triangulation.fan(5).flip((0, 1))


def test_invalid_triangulations_rejected():
    with pytest.raises(ValueError):
        Triangulation(5, ((0, 2), (1, 3)))
    with pytest.raises(ValueError):
        Triangulation(5, ((0, 2),))


def test_edge_counts():
    for n in range(3, 8):
        for T in enumerate_triangulations(n):
            assert T.rank == 2 * n - 3
            assert len(T.mutable) == n - 3


@pytest.mark.parametrize("n", range(3, 8))
def test_epsilon_matches_triangle_oracle(n):
    for T in enumerate_triangulations(n):
        assert T.epsilon == triangle_epsilon(T)


def test_triangle_epsilon():
    T = Triangulation(3, ())
    assert T.mutable == ()
    # edges (0,1), (0,2), (1,2): one 3-cycle
    assert T.epsilon == ((0, -1, 1), (1, 0, -1), (-1, 1, 0))


def test_square_exchange_column_alternates():
    T = Triangulation(4, ((0, 2),))
    col = {T.edges[i]: T.b_matrix[i][0] for i in range(T.rank)}
    around = [col[(0, 1)], col[(1, 2)], col[(2, 3)], col[(0, 3)]]
    assert col[(0, 2)] == 0
    assert all(abs(x) == 1 for x in around)
    assert all(around[i] == -around[i + 1] for i in range(3))


@pytest.mark.parametrize("n", range(3, 9))
def test_matrix_shapes_and_entries(n):
    for T in enumerate_triangulations(n):
        for M in (T.epsilon, T.lam):
            for i in range(T.rank):
                assert M[i][i] == 0
                for j in range(T.rank):
                    assert M[i][j] == -M[j][i]
                    assert M[i][j] in (-1, 0, 1)
        prod = compatibility_product(T.exchange)
        for row, j in enumerate(T.mutable):
            assert all(prod[row][i] == (4 if i == j else 0) for i in range(T.rank))


def test_mutate_matrix_negates_row_and_column_and_is_involutive():
    T = Triangulation.fan(6)
    for k in T.mutable:
        M = mutate_matrix(T.epsilon, k)
        for i in range(T.rank):
            assert M[i][k] == -T.epsilon[i][k]
            assert M[k][i] == -T.epsilon[k][i]
        assert mutate_matrix(M, k) == T.epsilon


@pytest.mark.parametrize("n", range(4, 8))
def test_flip_matches_matrix_mutation(n):
    for T in enumerate_triangulations(n):
        for k in T.diagonals:
            Tp = T.flip(k)
            assert Tp.flip(T.flip_partner(k)) == T
            assert permute_to(T, k, mutate_matrix(T.epsilon, T.index[k])) == Tp.epsilon


def test_flip_path_examples():
    T = Triangulation(4, ((0, 2),))
    assert flip_path(T, T) == []
    assert len(flip_path(T, T.flip((0, 2)))) == 1


def test_pentagon_flip_graph_is_a_five_cycle():
    Ts = enumerate_triangulations(5)
    for T in Ts:
        assert len(flip_neighbors(T)) == 2
    distances = [len(flip_path(a, b)) for a in Ts for b in Ts]
    assert max(distances) == 2
    assert sorted(distances).count(0) == 5


def test_flip_path_is_symmetric_and_valid():
    Ts = enumerate_triangulations(6)
    for a in Ts[::3]:
        for b in Ts[::4]:
            path = flip_path(a, b)
            assert len(path) == len(flip_path(b, a))
            cur = a
            for k in path:
                cur = cur.flip(k)
            assert cur == b


def test_flip_path_rejects_different_polygons():
    with pytest.raises(ValueError):
        flip_path(Triangulation.fan(5), Triangulation.fan(6))


def test_chord_helpers():
    assert parse_chord("3-1") == (1, 3)
    assert is_boundary((0, 4), 5) and not is_boundary((0, 2), 5)
    assert len(all_diagonals(6)) == 9
    assert Triangulation.fan(5).to_json() == {"n": 5, "diagonals": [[0, 2], [0, 3]]}
