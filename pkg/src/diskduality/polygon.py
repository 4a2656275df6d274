"""Chords, ideal triangulations and flips of a polygon.

Vertices are labelled ``0..n-1`` counterclockwise.  A chord is stored as a
sorted pair ``(a, b)``.  At a vertex ``v`` the edges are ordered by their
offset ``(w - v) mod n``; turning clockwise around ``v`` decreases the
offset.  So "i is clockwise to j at v" means ``offset(i) < offset(j)``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

Chord = Tuple[int, int]
Matrix = Tuple[Tuple[int, ...], ...]

MAX_ENUMERATION_N = 11


def chord(a: int, b: int) -> Chord:
    if a == b:
        raise ValueError("a chord needs two distinct endpoints")
    return (a, b) if a < b else (b, a)


def chord_label(c: Chord) -> str:
    return f"{c[0]}-{c[1]}"


def parse_chord(text: str) -> Chord:
    a, b = text.strip().split("-")
    return chord(int(a), int(b))


def is_boundary(c: Chord, n: int) -> bool:
    a, b = c
    return b - a == 1 or (a == 0 and b == n - 1)


def boundary_edges(n: int) -> List[Chord]:
    return sorted(chord(i, (i + 1) % n) for i in range(n))


def all_diagonals(n: int) -> List[Chord]:
    return [(a, b) for a in range(n) for b in range(a + 2, n) if not (a == 0 and b == n - 1)]


def crosses(c1: Chord, c2: Chord) -> bool:
    """True iff the endpoints strictly interleave around the circle."""
    a, b = c1
    c, d = c2
    if len({a, b, c, d}) < 4:
        return False
    return (a < c < b) != (a < d < b)


def offset(v: int, w: int, n: int) -> int:
    return (w - v) % n


def chord_lambda(c1: Chord, c2: Chord, n: int) -> int:
    """The pairing of two chords: +1 if c1 is clockwise to c2 at a shared vertex.

    It depends only on the pair of chords, not on a triangulation.
    """
    shared = set(c1) & set(c2)
    if len(shared) != 1 or c1 == c2:
        return 0
    (v,) = shared
    o1 = offset(v, c1[0] if c1[1] == v else c1[1], n)
    o2 = offset(v, c2[0] if c2[1] == v else c2[1], n)
    return 1 if o1 < o2 else -1


@dataclass(frozen=True)
class ExchangeData:
    epsilon: Matrix
    b: Matrix  # |I| x |J|
    lam: Matrix


@dataclass(frozen=True)
class Triangulation:
    n: int
    diagonals: Tuple[Chord, ...]
    _check: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        diags = tuple(sorted(chord(*c) for c in self.diagonals))
        object.__setattr__(self, "diagonals", diags)
        if self._check:
            self.validate()

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[Sequence[int]]) -> "Triangulation":
        return cls(n, tuple(chord(int(p[0]), int(p[1])) for p in pairs))

    @classmethod
    def fan(cls, n: int, apex: int = 0) -> "Triangulation":
        return cls(n, tuple(chord(apex, (apex + k) % n) for k in range(2, n - 1)))

    def validate(self) -> None:
        n = self.n
        if n < 3:
            raise ValueError("a triangulated disk needs at least 3 marked points")
        if len(set(self.diagonals)) != len(self.diagonals):
            raise ValueError("repeated diagonal")
        for c in self.diagonals:
            if not (0 <= c[0] < c[1] < n) or is_boundary(c, n):
                raise ValueError(f"{chord_label(c)} is not a diagonal of the {n}-gon")
        if len(self.diagonals) != n - 3:
            raise ValueError(f"a triangulation of the {n}-gon has {n - 3} diagonals")
        for i, c in enumerate(self.diagonals):
            for d in self.diagonals[i + 1:]:
                if crosses(c, d):
                    raise ValueError(f"diagonals {chord_label(c)} and {chord_label(d)} cross")

    # -- edge indexing ------------------------------------------------
    @cached_property
    def edges(self) -> Tuple[Chord, ...]:
        return tuple(sorted(set(boundary_edges(self.n)) | set(self.diagonals)))

    @cached_property
    def index(self) -> Dict[Chord, int]:
        return {c: i for i, c in enumerate(self.edges)}

    @cached_property
    def mutable(self) -> Tuple[int, ...]:
        """Indices (into ``edges``) of the diagonals, in edge order."""
        return tuple(i for i, c in enumerate(self.edges) if not is_boundary(c, self.n))

    @property
    def rank(self) -> int:
        return len(self.edges)

    def __contains__(self, c: object) -> bool:
        return c in self.index

    def label(self) -> str:
        return ",".join(chord_label(c) for c in self.diagonals)

    def to_json(self) -> dict:
        return {"n": self.n, "diagonals": [list(c) for c in self.diagonals]}

    # -- geometry -----------------------------------------------------
    def edges_at(self, v: int) -> List[Chord]:
        """Edges of T at v, clockwise first (increasing offset)."""
        out = [c for c in self.edges if v in c]
        return sorted(out, key=lambda c: offset(v, c[0] + c[1] - v, self.n))

    def quadrilateral(self, k: Chord) -> Tuple[int, int, int, int]:
        """Vertices (a, x, b, y) of the quadrilateral with diagonal k = (a, b)."""
        if k not in self.diagonals:
            raise ValueError(f"{chord_label(k)} is not a diagonal of this triangulation")
        a, b = k
        n = self.n
        # third vertices of the two triangles on k, read at vertex a
        fan_a = self.edges_at(a)
        pos = fan_a.index(k)
        lo = fan_a[pos - 1]
        hi = fan_a[pos + 1]
        x = lo[0] + lo[1] - a  # smaller offset from a: between a and b going ccw
        y = hi[0] + hi[1] - a
        assert offset(a, x, n) < offset(a, b, n) < offset(a, y, n)
        return a, x, b, y

    def flip(self, k: Chord) -> "Triangulation":
        k = chord(*k)
        if is_boundary(k, self.n):
            raise ValueError("cannot flip a boundary edge")
        a, x, b, y = self.quadrilateral(k)
        new = chord(x, y)
        diags = tuple(sorted([c for c in self.diagonals if c != k] + [new]))
        return Triangulation(self.n, diags, _check=False)

    def flip_partner(self, k: Chord) -> Chord:
        a, x, b, y = self.quadrilateral(chord(*k))
        return chord(x, y)

    def edge_map(self, k: Chord) -> Dict[Chord, Chord]:
        """The natural bijection from edges of T to edges of flip(T, k)."""
        new = self.flip_partner(k)
        return {c: (new if c == k else c) for c in self.edges}

    # -- matrices -----------------------------------------------------
    @cached_property
    def exchange(self) -> ExchangeData:
        return _exchange_data(self.n, self.diagonals)

    @property
    def epsilon(self) -> Matrix:
        return self.exchange.epsilon

    @property
    def b_matrix(self) -> Matrix:
        return self.exchange.b

    @property
    def lam(self) -> Matrix:
        return self.exchange.lam


@lru_cache(maxsize=None)
def _exchange_data(n: int, diagonals: Tuple[Chord, ...]) -> ExchangeData:
    T = Triangulation(n, diagonals, _check=False)
    m = T.rank
    idx = T.index
    eps = [[0] * m for _ in range(m)]
    lam = [[0] * m for _ in range(m)]
    for v in range(n):
        fan = T.edges_at(v)
        for p in range(len(fan) - 1):
            i, j = idx[fan[p]], idx[fan[p + 1]]
            # fan[p] is immediately clockwise to fan[p+1]
            eps[i][j] -= 1
            eps[j][i] += 1
        for p, ci in enumerate(fan):
            for cj in fan[p + 1:]:
                i, j = idx[ci], idx[cj]
                lam[i][j] += 1
                lam[j][i] -= 1
    J = T.mutable
    b = tuple(tuple(-eps[i][j] for j in J) for i in range(m))
    data = ExchangeData(tuple(map(tuple, eps)), b, tuple(map(tuple, lam)))
    check_compatibility(data, J)
    return data


def compatibility_product(data: ExchangeData) -> Matrix:
    """The |J| x |I| matrix with entries sum_k b_kj lambda_ki."""
    m = len(data.lam)
    nj = len(data.b[0]) if data.b and data.b[0] else 0
    return tuple(
        tuple(sum(data.b[k][j] * data.lam[k][i] for k in range(m)) for i in range(m))
        for j in range(nj)
    )


def check_compatibility(data: ExchangeData, J: Sequence[int]) -> None:
    prod = compatibility_product(data)
    for row, j in enumerate(J):
        for i in range(len(data.lam)):
            want = 4 if i == j else 0
            if prod[row][i] != want:
                raise AssertionError("exchange and pairing matrices are not compatible")


def mutate_matrix(eps: Matrix, k: int) -> Matrix:
    """Matrix mutation in direction k (square skew-symmetric case)."""
    m = len(eps)
    out = [[0] * m for _ in range(m)]
    for i in range(m):
        for j in range(m):
            if k in (i, j):
                out[i][j] = -eps[i][j]
            else:
                a, c = eps[i][k], eps[k][j]
                out[i][j] = eps[i][j] + (abs(a) * c + a * abs(c)) // 2
    return tuple(map(tuple, out))


def mutate_rect(b: Matrix, k_row: int, k_col: int) -> Matrix:
    """Matrix mutation of a rectangular exchange matrix.

    ``k_row`` is the row index and ``k_col`` the column index of the
    mutation direction.
    """
    m = len(b)
    nc = len(b[0]) if m else 0
    out = [[0] * nc for _ in range(m)]
    for i in range(m):
        for j in range(nc):
            if i == k_row or j == k_col:
                out[i][j] = -b[i][j]
            else:
                a, c = b[i][k_col], b[k_row][j]
                out[i][j] = b[i][j] + (abs(a) * c + a * abs(c)) // 2
    return tuple(map(tuple, out))


def permute_to(T: Triangulation, k: Chord, M: Matrix) -> Matrix:
    """Reindex a square matrix of T into the edge order of flip(T, k)."""
    Tp = T.flip(k)
    emap = T.edge_map(k)
    perm = [Tp.index[emap[c]] for c in T.edges]
    m = len(M)
    out = [[0] * m for _ in range(m)]
    for i in range(m):
        for j in range(m):
            out[perm[i]][perm[j]] = M[i][j]
    return tuple(map(tuple, out))


def enumerate_triangulations(n: int, bound: int = MAX_ENUMERATION_N) -> List[Triangulation]:
    """All triangulations of the n-gon, sorted by diagonal list."""
    if n > bound:
        raise ValueError(f"enumeration bound exceeded: n={n} > {bound}")
    return [Triangulation(n, d, _check=False) for d in _enumerate(n)]


@lru_cache(maxsize=None)
def _enumerate(n: int) -> Tuple[Tuple[Chord, ...], ...]:
    # triangulations of the polygon on vertices lo..hi, via the apex over (lo, hi)
    @lru_cache(maxsize=None)
    def sub(lo: int, hi: int) -> Tuple[Tuple[Chord, ...], ...]:
        if hi - lo < 2:
            return ((),)
        out = []
        for m in range(lo + 1, hi):
            extra = []
            if m - lo > 1:
                extra.append((lo, m))
            if hi - m > 1:
                extra.append((m, hi))
            for left in sub(lo, m):
                for right in sub(m, hi):
                    out.append(left + right + tuple(extra))
        return tuple(out)

    res = {tuple(sorted(d)) for d in sub(0, n - 1)}
    return tuple(sorted(res))


def flip_neighbors(T: Triangulation) -> List[Tuple[Chord, Triangulation]]:
    return [(k, T.flip(k)) for k in T.diagonals]


def flip_path(T1: Triangulation, T2: Triangulation) -> List[Chord]:
    """A shortest list of diagonals to flip, in order, turning T1 into T2.

    Breadth-first search explores neighbours in sorted order, so the
    result is deterministic.
    """
    if T1.n != T2.n:
        raise ValueError("triangulations of different polygons")
    if T1.diagonals == T2.diagonals:
        return []
    prev: Dict[Tuple[Chord, ...], Optional[Tuple[Tuple[Chord, ...], Chord]]] = {T1.diagonals: None}
    queue = deque([T1])
    while queue:
        T = queue.popleft()
        for k in T.diagonals:
            U = T.flip(k)
            if U.diagonals in prev:
                continue
            prev[U.diagonals] = (T.diagonals, k)
            if U.diagonals == T2.diagonals:
                path = []
                key = U.diagonals
                while prev[key] is not None:
                    key, step = prev[key]
                    path.append(step)
                return path[::-1]
            queue.append(U)
    raise AssertionError("flip graph is disconnected")  # pragma: no cover


def completion(n: int, required: Iterable[Chord]) -> Triangulation:
    """The lexicographically smallest triangulation containing ``required``.

    Greedy insertion in sorted order is optimal here: any noncrossing set
    extends to a triangulation, so the smallest compatible diagonal can
    always be taken next.
    """
    req = sorted({chord(*c) for c in required if not is_boundary(chord(*c), n)})
    for i, c in enumerate(req):
        for d in req[i + 1:]:
            if crosses(c, d):
                raise ValueError(f"{chord_label(c)} and {chord_label(d)} cross")
    chosen = list(req)
    for d in all_diagonals(n):
        if d in chosen:
            continue
        if all(not crosses(d, c) for c in chosen):
            chosen.append(d)
    return Triangulation(n, tuple(sorted(chosen)))
