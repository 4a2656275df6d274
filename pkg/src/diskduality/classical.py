"""Commutative oracle built on sympy.

Cluster variables are computed from the classical Ptolemy relation by a
breadth-first search over flips, entirely independently of the quantum
torus code.  Used to check omega = 1 specialisations.
"""

from __future__ import annotations

from collections import deque
from functools import lru_cache
from typing import Dict, Mapping, Sequence, Tuple

import sympy

from .polygon import Chord, Triangulation, chord, chord_label
from .torus import TorusElement

__all__ = [
    "edge_symbols",
    "ptolemy_expansions",
    "x_substitution",
    "d_substitution",
    "torus_at_one",
    "is_zero",
]


def edge_symbols(T: Triangulation, prefix: str = "x") -> Tuple[sympy.Symbol, ...]:
    return tuple(sympy.Symbol(f"{prefix}_{a}_{b}") for a, b in T.edges)


@lru_cache(maxsize=None)
def _expansions(n: int, diagonals: tuple, prefix: str) -> Dict[Chord, sympy.Expr]:
    T0 = Triangulation(n, diagonals, _check=False)
    syms = edge_symbols(T0, prefix)
    vals: Dict[Chord, sympy.Expr] = {c: s for c, s in zip(T0.edges, syms)}
    seen = {T0.diagonals}
    queue = deque([T0])
    while queue:
        T = queue.popleft()
        for k in T.diagonals:
            a, x, b, y = T.quadrilateral(k)
            new = chord(x, y)
            if new not in vals:
                v = vals
                num = v[chord(a, x)] * v[chord(b, y)] + v[chord(x, b)] * v[chord(y, a)]
                vals[new] = sympy.factor(sympy.cancel(num / v[k]))
            T2 = T.flip(k)
            if T2.diagonals not in seen:
                seen.add(T2.diagonals)
                queue.append(T2)
    return vals


def ptolemy_expansions(T: Triangulation, prefix: str = "x") -> Dict[Chord, sympy.Expr]:
    """Every chord as a rational function of the edge variables of T."""
    return dict(_expansions(T.n, T.diagonals, prefix))


def x_substitution(T: Triangulation, prefix: str = "x") -> Dict[int, sympy.Expr]:
    """X_j -> prod_s x_s^{eps_js}, keyed by position in the mutable list."""
    syms = edge_symbols(T, prefix)
    eps = T.epsilon
    out = {}
    for pos, j in enumerate(T.mutable):
        out[pos] = sympy.Mul(*[syms[s] ** eps[j][s] for s in range(T.rank) if eps[j][s]])
    return out


def d_substitution(T: Triangulation) -> Dict[int, sympy.Expr]:
    """D-chart generators: X_j as above and B_j -> y_j / x_j (positions r + j for B)."""
    xs = edge_symbols(T, "x")
    ys = boundary_identified_symbols(T)
    sub = x_substitution(T, "x")
    r = len(T.mutable)
    for pos, j in enumerate(T.mutable):
        sub[r + pos] = ys[j] / xs[j]
    return sub


def boundary_identified_symbols(T: Triangulation) -> Tuple[sympy.Symbol, ...]:
    """Mirror-side edge variables; boundary edges share the front variable."""
    xs = edge_symbols(T, "x")
    ys = edge_symbols(T, "y")
    J = set(T.mutable)
    return tuple(ys[i] if i in J else xs[i] for i in range(T.rank))


def mirror_expansions(T: Triangulation) -> Dict[Chord, sympy.Expr]:
    ys = edge_symbols(T, "y")
    ident = boundary_identified_symbols(T)
    sub = dict(zip(ys, ident))
    return {c: e.subs(sub, simultaneous=True) for c, e in ptolemy_expansions(T, "y").items()}


def torus_at_one(x: TorusElement, sub: Mapping[int, sympy.Expr]) -> sympy.Expr:
    """Evaluate a torus element at omega = 1 under a generator substitution."""
    total = sympy.Integer(0)
    for v, c in x.eval_at_one().items():
        term = sympy.Integer(c)
        for i, e in enumerate(v):
            if e:
                term *= sub[i] ** e
        total += term
    return total


def product_of(values: Mapping[Chord, sympy.Expr], weights: Sequence[Tuple[Chord, int]]) -> sympy.Expr:
    return sympy.Mul(*[values[chord(*c)] ** w for c, w in weights])


def is_zero(expr: sympy.Expr) -> bool:
    return sympy.cancel(sympy.together(expr)) == 0


def label_symbols(T: Triangulation) -> Dict[str, sympy.Symbol]:
    return {chord_label(c): s for c, s in zip(T.edges, edge_symbols(T))}
