"""Quantum cluster algebra of a polygon.

Every chord is a cluster variable.  Its Laurent expansion in the chart of a
base triangulation ``T0`` is found by walking the flip graph from ``T0`` and
applying the exchange relation once per new chord.

``orientation=-1`` gives the mirror disk, whose pairing and exchange
matrices are the negatives of the original ones.
"""

from __future__ import annotations

import threading
from collections import deque
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .coeff import OmegaLaurent, t_binomial
from .polygon import (
    Chord,
    Matrix,
    Triangulation,
    chord,
    chord_label,
    completion,
    is_boundary,
    mutate_rect,
)
from .torus import SkewForm, TorusElement, ordered_monomial

Vec = Tuple[int, ...]


def _neg(m: Matrix) -> Matrix:
    return tuple(tuple(-x for x in row) for row in m)


def chart_form(T: Triangulation, orientation: int = 1) -> SkewForm:
    return _form_cache(T.n, T.diagonals, orientation)


_FORMS: Dict[tuple, SkewForm] = {}


def _form_cache(n: int, diagonals: tuple, orientation: int) -> SkewForm:
    key = (n, diagonals, orientation)
    f = _FORMS.get(key)
    if f is None:
        lam = Triangulation(n, diagonals, _check=False).lam
        f = _FORMS[key] = SkewForm(lam if orientation == 1 else _neg(lam))
    return f


def chart_labels(T: Triangulation, prefix: str = "A") -> List[str]:
    return [f"{prefix}[{chord_label(c)}]" for c in T.edges]


@dataclass(frozen=True)
class ToricFrame:
    """Values ``M(e_i)`` in the base chart together with the pairing of M."""

    base: Triangulation
    values: Tuple[TorusElement, ...]
    lam: Matrix

    def __call__(self, v: Sequence[int]) -> TorusElement:
        return ordered_monomial(self.values, self.lam, v)


@dataclass(frozen=True)
class QuantumSeed:
    frame: ToricFrame
    b: Matrix  # m x |mutable|
    mutable: Tuple[int, ...]  # positions of the mutable indices

    @property
    def lam(self) -> Matrix:
        return self.frame.lam

    def column(self, k: int) -> List[int]:
        c = self.mutable.index(k)
        return [row[c] for row in self.b]


def seed_from_triangulation(T: Triangulation, orientation: int = 1) -> QuantumSeed:
    form = chart_form(T, orientation)
    values = tuple(TorusElement.generator(form, i) for i in range(T.rank))
    lam = T.lam if orientation == 1 else _neg(T.lam)
    b = T.b_matrix if orientation == 1 else _neg(T.b_matrix)
    return QuantumSeed(ToricFrame(T, values, lam), b, T.mutable)


def exchange_value(frame: ToricFrame, bcol: Sequence[int], k: int) -> TorusElement:
    """``M(-e_k + sum [b_ik]_+ e_i) + M(-e_k + sum [-b_ik]_+ e_i)``."""
    m = len(bcol)
    mk = frame.values[k]
    total = None
    for sgn in (1, -1):
        w = [max(sgn * x, 0) for x in bcol]
        # M(w - e_k) = w^{-L(w, e_k)} M(w) M(e_k)^{-1}; divide the sum once, since
        # M(e_k) need not be a monomial
        p = sum(w[i] * frame.lam[i][k] for i in range(m))
        term = frame(w).shift(-p)
        total = term if total is None else total + term
    out = total.right_divide(mk)
    if out is None:
        raise ArithmeticError("exchange relation did not produce a Laurent element")
    return out


def e_matrix(b: Matrix, mutable: Sequence[int], k: int, sign: int = 1) -> List[List[int]]:
    m = len(b)
    col = [row[mutable.index(k)] for row in b]
    E = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    for i in range(m):
        E[i][k] = -1 if i == k else max(-sign * col[i], 0)
    return E


def mutate_seed(s: QuantumSeed, k: int, sign: int = 1) -> QuantumSeed:
    """Mutate the seed at index ``k`` (a position in ``0..m-1``)."""
    if k not in s.mutable:
        raise ValueError("can only mutate at a mutable index")
    col = s.column(k)
    newk = exchange_value(s.frame, col, k)
    values = list(s.frame.values)
    values[k] = newk
    E = e_matrix(s.b, s.mutable, k, sign)
    m = len(E)
    lam = s.frame.lam
    # L' = E^t L E
    LE = [[sum(lam[i][t] * E[t][j] for t in range(m)) for j in range(m)] for i in range(m)]
    newlam = tuple(tuple(sum(E[t][i] * LE[t][j] for t in range(m)) for j in range(m)) for i in range(m))
    newb = mutate_rect(s.b, k, s.mutable.index(k))
    return QuantumSeed(ToricFrame(s.frame.base, tuple(values), newlam), newb, s.mutable)


def frame_monomial_binomial_formula(s: QuantumSeed, k: int, v: Sequence[int], sign: int = 1) -> TorusElement:
    """``M'(v)`` via the t-binomial sum, with ``t = w^{-4}``."""
    if v[k] < 0:
        raise ValueError("binomial formula needs v_k >= 0")
    E = e_matrix(s.b, s.mutable, k, sign)
    m = len(E)
    Ev = [sum(E[i][j] * v[j] for j in range(m)) for i in range(m)]
    col = s.column(k)
    out = TorusElement.zero(s.frame.values[0].form)
    for p in range(v[k] + 1):
        coeff = t_binomial(v[k], p).to_laurent().scale_exponents(-4)
        u = [Ev[i] + sign * p * col[i] for i in range(m)]
        out = out + s.frame(u).scale(coeff)
    return out


# -- cluster variables -----------------------------------------------------

class _Expansions:
    """Memo of chord expansions in one base chart, filled by a flip-graph walk."""

    def __init__(self, T0: Triangulation, orientation: int):
        self.T0 = T0
        self.orientation = orientation
        self.form = chart_form(T0, orientation)
        self.vars: Dict[Chord, TorusElement] = {
            c: TorusElement.generator(self.form, i) for i, c in enumerate(T0.edges)
        }
        self.complete = False
        self.lock = threading.Lock()

    def fill(self) -> None:
        with self.lock:
            if self.complete:
                return
            o = self.orientation
            seen = {self.T0.diagonals}
            queue = deque([self.T0])
            while queue:
                T = queue.popleft()
                lam = T.lam if o == 1 else _neg(T.lam)
                frame = None
                for k in T.diagonals:
                    new = T.flip_partner(k)
                    if new not in self.vars:
                        if frame is None:
                            frame = ToricFrame(T, tuple(self.vars[c] for c in T.edges), lam)
                        ki = T.index[k]
                        col = [o * row[T.mutable.index(ki)] for row in T.b_matrix]
                        self.vars[new] = exchange_value(frame, col, ki)
                    U = T.flip(k)
                    if U.diagonals not in seen:
                        seen.add(U.diagonals)
                        queue.append(U)
            self.complete = True


_MEMO: Dict[tuple, _Expansions] = {}
_MEMO_LOCK = threading.Lock()


def _expansions(T0: Triangulation, orientation: int = 1) -> _Expansions:
    key = (T0.n, T0.diagonals, orientation)
    with _MEMO_LOCK:
        ex = _MEMO.get(key)
        if ex is None:
            ex = _MEMO[key] = _Expansions(T0, orientation)
    return ex


def cluster_variable(c: Chord, T0: Triangulation, orientation: int = 1) -> TorusElement:
    """Laurent expansion of the chord ``c`` in the chart of ``T0``."""
    c = chord(*c)
    ex = _expansions(T0, orientation)
    if c in ex.vars:
        return ex.vars[c]
    ex.fill()
    try:
        return ex.vars[c]
    except KeyError:
        raise ValueError(f"{chord_label(c)} is not a chord of the {T0.n}-gon") from None


def all_cluster_variables(T0: Triangulation, orientation: int = 1) -> Dict[Chord, TorusElement]:
    ex = _expansions(T0, orientation)
    ex.fill()
    return dict(ex.vars)


def cluster_variable_along_path(c: Chord, T0: Triangulation, path: Sequence[Chord], orientation: int = 1) -> TorusElement:
    """Expansion of ``c`` by full seed mutation along an explicit flip path.

    This is independent of the memo and is used to test path independence.
    The index slots of the seed follow the natural edge bijection of each flip.
    """
    s = seed_from_triangulation(T0, orientation)
    slot = {e: i for i, e in enumerate(T0.edges)}
    T = T0
    for k in path:
        k = chord(*k)
        new = T.flip_partner(k)
        i = slot.pop(k)
        s = mutate_seed(s, i)
        slot[new] = i
        T = T.flip(k)
    c = chord(*c)
    if c not in slot:
        raise ValueError("the path does not end in a triangulation containing the chord")
    return s.frame.values[slot[c]]


def chart_monomial(T0: Triangulation, T: Triangulation, v: Sequence[int], orientation: int = 1) -> TorusElement:
    """``M_T(v)`` expanded in the chart of ``T0`` (v indexed by the edges of T)."""
    values = tuple(cluster_variable(c, T0, orientation) for c in T.edges)
    lam = T.lam if orientation == 1 else _neg(T.lam)
    return ordered_monomial(values, lam, v)


# -- F-polynomials -------------------------------------------------------------

@dataclass(frozen=True)
class FPolyData:
    f: Dict[Vec, OmegaLaurent]  # exponent a over the mutable indices -> coefficient
    g: Vec
    lambda_shift: int

    def constant_term(self) -> OmegaLaurent:
        return self.f.get(tuple(0 for _ in next(iter(self.f))), OmegaLaurent())

    def is_positive(self) -> bool:
        return all(c.is_nonneg_q_laurent() for c in self.f.values())


def solve_b_combination(T: Triangulation, d: Sequence[int]) -> Optional[Vec]:
    """The vector a with ``B a = d``, or None if there is none.

    Uses the compatibility relation: a_j = L(d, e_j) / 4.
    """
    lam = T.lam
    b = T.b_matrix
    m = T.rank
    a = []
    for j in T.mutable:
        s = sum(d[i] * lam[i][j] for i in range(m))
        if s % 4:
            return None
        a.append(s // 4)
    for i in range(m):
        if sum(b[i][c] * a[c] for c in range(len(a))) != d[i]:
            return None
    return tuple(a)


def g_vector_of(x: TorusElement, T0: Triangulation, orientation: int = 1) -> Tuple[Vec, Dict[Vec, Vec]]:
    """The unique support point v0 with every other support point in v0 + B(Z>=0^J).

    Returns v0 and the map from support points to their a-vectors.
    """
    supp = x.support()
    found = []
    for v0 in supp:
        avec = {}
        ok = True
        for v in supp:
            d = [orientation * (p - q) for p, q in zip(v, v0)]
            a = solve_b_combination(T0, d)
            if a is None or min(a, default=0) < 0:
                ok = False
                break
            avec[v] = a
        if ok:
            found.append((v0, avec))
    if len(found) != 1:
        raise ArithmeticError("g-vector extraction failed")
    return found[0]


def g_vector(c: Chord, T0: Triangulation, orientation: int = 1) -> Vec:
    c = chord(*c)
    if c in T0.index:
        v = [0] * T0.rank
        v[T0.index[c]] = 1
        return tuple(v)
    return f_polynomial(c, T0, orientation).g


_FCACHE: Dict[tuple, FPolyData] = {}


def f_polynomial(c: Chord, T0: Triangulation, orientation: int = 1) -> FPolyData:
    """F-polynomial, extended g-vector and shift of a cluster variable.

    With ``Y^a`` the normal monomial of ``B a``, the expansion equals
    ``w^shift * F * M0(g)``.
    """
    c = chord(*c)
    key = (T0.n, T0.diagonals, orientation, c)
    if key in _FCACHE:
        return _FCACHE[key]
    x = cluster_variable(c, T0, orientation)
    g, avecs = g_vector_of(x, T0, orientation)
    base = x.coefficient(g)
    if not base.is_monomial() or base.coefficient(base.min_exp()) != 1:
        raise ArithmeticError("g-vector term is not a pure power of w")
    shift = base.min_exp()
    gJ = [g[j] for j in T0.mutable]
    f = {}
    for v, coeff in x.items():
        a = avecs[v]
        # Y^a M0(g) = w^{-L(Ba, g)} M0(Ba + g), and L(Ba, g) = 4 a.g_J
        k = 4 * sum(p * q for p, q in zip(a, gJ))
        f[a] = coeff.shift(k - shift)
    data = FPolyData(f, g, shift)
    _FCACHE[key] = data
    return data


def f_polynomial_text(data: FPolyData, T0: Triangulation, q_mode: bool = True) -> str:
    labels = [f"Y[{chord_label(T0.edges[j])}]" for j in T0.mutable]
    form = SkewForm([[0] * len(labels) for _ in labels])
    return TorusElement(form, data.f).to_text(labels, q_mode)


def check_cluster_positivity(T0: Triangulation, orientation: int = 1) -> List[str]:
    """Check shift 0, constant term 1 and positive F-coefficients for all chords."""
    problems = []
    for c in sorted(all_cluster_variables(T0, orientation)):
        if is_boundary(c, T0.n):
            continue
        data = f_polynomial(c, T0, orientation)
        if data.lambda_shift != 0:
            problems.append(f"{chord_label(c)}: shift {data.lambda_shift}")
        if not data.constant_term().is_one():
            problems.append(f"{chord_label(c)}: constant term")
        if not data.is_positive():
            problems.append(f"{chord_label(c)}: negative coefficient")
    return problems


def lex_first_chart(n: int, chords: Sequence[Chord]) -> Triangulation:
    return completion(n, chords)
