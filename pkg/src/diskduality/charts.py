"""Poisson (X) and double (D) charts attached to a triangulation.

Lattices and normal monomials:

* A-chart: Z^I with pairing lambda_T; ``A^v`` is the normal monomial.
* X-chart: Z^J; ``X^a`` is the A-monomial of ``sum_j a_j x_j`` where
  ``x_j = sum_s eps_js e_s``.
* big double torus: Z^I + Z^I with pairing diag(lambda_T, -lambda_T).
* D-chart: Z^J + Z^J with coordinates (a, g); the normal monomial (a, g) is
  the big monomial of ``sum a_j X_j + sum g_j B_j`` where ``X_j = (x_j, 0)``
  and ``B_j = (-e_j, e_j)``.  The boundary relations ``r_i = (-e_i, e_i)``
  pair to zero with this sublattice and are set to 1.

All forms are computed by pairing the defining vectors, never by formula.
"""

from __future__ import annotations

from functools import lru_cache
from typing import List, Sequence, Tuple

from .cluster import chart_form
from .polygon import Triangulation, chord_label
from .torus import SkewForm, TorusElement, Vec, block_form, change_lattice

__all__ = ["XChart", "DoubleChart", "x_chart", "double_chart"]


class XChart:
    def __init__(self, T: Triangulation):
        self.T = T
        self.J = T.mutable
        eps = T.epsilon
        self.a_form = chart_form(T)
        self.xvecs: Tuple[Vec, ...] = tuple(tuple(eps[j]) for j in self.J)
        r = len(self.J)
        self.form = SkewForm(
            [[self.a_form.pairing(self.xvecs[i], self.xvecs[j]) for j in range(r)] for i in range(r)]
        )
        self.labels = [f"X[{chord_label(T.edges[j])}]" for j in self.J]

    @property
    def rank(self) -> int:
        return len(self.J)

    def generator(self, j: int, power: int = 1) -> TorusElement:
        """X_j for the j-th mutable index (position in ``J``)."""
        return TorusElement.generator(self.form, j, power)

    def monomial(self, a: Sequence[int], coeff=1) -> TorusElement:
        return TorusElement.monomial(self.form, a, coeff)

    def one(self) -> TorusElement:
        return TorusElement.one(self.form)

    def a_vector(self, a: Sequence[int]) -> Vec:
        m = self.T.rank
        out = [0] * m
        for aj, x in zip(a, self.xvecs):
            if aj:
                for s in range(m):
                    out[s] += aj * x[s]
        return tuple(out)

    def solve(self, v: Sequence[int]) -> Vec | None:
        """X-coordinates of the A-exponent v, or None if v is not in the x-lattice."""
        lam = self.T.lam
        m = self.T.rank
        a = []
        for j in self.J:
            s = sum(v[i] * lam[i][j] for i in range(m) if v[i])
            if s % 4:
                return None
            a.append(s // 4)
        if self.a_vector(a) != tuple(v):
            return None
        return tuple(a)

    def from_a_chart(self, x: TorusElement) -> TorusElement:
        def f(v: Vec) -> Vec:
            a = self.solve(v)
            if a is None:
                raise ArithmeticError("X-coordinate change failed")
            return a

        return change_lattice(x, self.form, f)

    def to_a_chart(self, x: TorusElement) -> TorusElement:
        return change_lattice(x, self.a_form, self.a_vector)

    def to_text(self, x: TorusElement, q_mode: bool = True) -> str:
        return x.to_text(self.labels, q_mode)


class DoubleChart:
    def __init__(self, T: Triangulation):
        self.T = T
        self.J = T.mutable
        self.xchart = x_chart(T)
        m = T.rank
        lam = T.lam
        self.big_form = block_form(lam, [[-x for x in row] for row in lam])
        r = len(self.J)
        vecs = [self.x_big(i) for i in range(r)] + [self.b_big(i) for i in range(r)]
        self.form = SkewForm([[self.big_form.pairing(u, v) for v in vecs] for u in vecs])
        self._vecs = vecs
        self.labels = [f"X[{chord_label(T.edges[j])}]" for j in self.J] + [
            f"B[{chord_label(T.edges[j])}]" for j in self.J
        ]
        self.boundary = [i for i in range(m) if i not in self.J]
        # the boundary relations must pair to zero with the chart sublattice
        for i in self.boundary:
            r_i = self.r_big(i)
            for v in vecs:
                if self.big_form.pairing(r_i, v):
                    raise AssertionError("boundary relation is not central on the D-chart")
            for i2 in self.boundary:
                if self.big_form.pairing(r_i, self.r_big(i2)):
                    raise AssertionError("boundary relations do not commute")

    @property
    def rank(self) -> int:
        return len(self.J)

    # -- big-lattice vectors --------------------------------------------------
    def x_big(self, pos: int) -> Vec:
        return tuple(self.xchart.xvecs[pos]) + (0,) * self.T.rank

    def b_big(self, pos: int) -> Vec:
        m = self.T.rank
        j = self.J[pos]
        v = [0] * (2 * m)
        v[j] = -1
        v[m + j] = 1
        return tuple(v)

    def r_big(self, i: int) -> Vec:
        m = self.T.rank
        v = [0] * (2 * m)
        v[i] = -1
        v[m + i] = 1
        return tuple(v)

    def big_vector(self, d: Sequence[int]) -> Vec:
        out = [0] * (2 * self.T.rank)
        for c, v in zip(d, self._vecs):
            if c:
                for s, x in enumerate(v):
                    out[s] += c * x
        return tuple(out)

    # -- D-chart generators ---------------------------------------------------
    def x_vec(self, pos: int) -> Vec:
        r = self.rank
        return tuple(1 if i == pos else 0 for i in range(2 * r))

    def b_vec(self, pos: int) -> Vec:
        r = self.rank
        return tuple(1 if i == r + pos else 0 for i in range(2 * r))

    def eps_row(self, pos: int) -> List[int]:
        eps = self.T.epsilon
        j = self.J[pos]
        return [eps[j][t] for t in self.J]

    def hat_x_vec(self, pos: int) -> Vec:
        return self.x_vec(pos)[: self.rank] + tuple(self.eps_row(pos))

    def bb_plus_vec(self, pos: int) -> Vec:
        return (0,) * self.rank + tuple(max(x, 0) for x in self.eps_row(pos))

    def bb_minus_vec(self, pos: int) -> Vec:
        return (0,) * self.rank + tuple(max(-x, 0) for x in self.eps_row(pos))

    def monomial(self, d: Sequence[int], coeff=1) -> TorusElement:
        return TorusElement.monomial(self.form, d, coeff)

    def X(self, pos: int, power: int = 1) -> TorusElement:
        return self.monomial([power * x for x in self.x_vec(pos)])

    def B(self, pos: int, power: int = 1) -> TorusElement:
        return self.monomial([power * x for x in self.b_vec(pos)])

    def one(self) -> TorusElement:
        return TorusElement.one(self.form)

    def from_x_chart(self, x: TorusElement) -> TorusElement:
        r = self.rank
        return change_lattice(x, self.form, lambda a: tuple(a) + (0,) * r)

    # -- reduction ----------------------------------------------------------------
    def reduce_vector(self, v: Sequence[int]) -> Vec:
        m = self.T.rank
        u, uo = v[:m], v[m:]
        g = [uo[j] for j in self.J]
        total = [p + q for p, q in zip(u, uo)]
        a = self.xchart.solve(total)
        if a is None:
            raise ArithmeticError("outside D-chart")
        return tuple(a) + tuple(g)

    def reduce(self, x: TorusElement) -> TorusElement:
        """Normal form in the D-chart of an element of the big double torus."""
        if x.form != self.big_form:
            raise ValueError("element does not live on the double torus of this chart")
        return change_lattice(x, self.form, self.reduce_vector)

    def specialize_b_to_one(self, x: TorusElement) -> TorusElement:
        r = self.rank
        return change_lattice(x, self.xchart.form, lambda d: tuple(d[:r]))

    def to_text(self, x: TorusElement, q_mode: bool = True) -> str:
        return x.to_text(self.labels, q_mode)


@lru_cache(maxsize=None)
def _xchart(n: int, diagonals: tuple) -> XChart:
    return XChart(Triangulation(n, diagonals, _check=False))


@lru_cache(maxsize=None)
def _dchart(n: int, diagonals: tuple) -> DoubleChart:
    return DoubleChart(Triangulation(n, diagonals, _check=False))


def x_chart(T: Triangulation) -> XChart:
    return _xchart(T.n, T.diagonals)


def double_chart(T: Triangulation) -> DoubleChart:
    return _dchart(T.n, T.diagonals)
