"""The duality maps I_A^q and I_D^q and their verifiers.

Conventions: chart monomials are normal-ordered; ``M_T(w)`` for a curve
system is the normal monomial of its chords (they pairwise quasi-commute
and the phase depends only on the chord pair).  I_A^q values live in the
X-chart of a triangulation, I_D^q values in its D-chart.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import sympy

from . import classical
from .charts import XChart, double_chart, x_chart
from .cluster import chart_form, chart_monomial, cluster_variable, f_polynomial, g_vector
from .coeff import OmegaLaurent
from .lamination import ALamination, DLamination
from .polygon import Chord, Triangulation, chord, chord_label, chord_lambda, completion, is_boundary
from .skein import Multicurve, superpose
from .torus import TorusElement, Vec, tensor

__all__ = [
    "IAResult",
    "IDResult",
    "Report",
    "lamination_chart",
    "i_a_q",
    "verify_ia_properties",
    "structure_constants",
    "verify_structure_constants",
    "n_l",
    "i_d_q",
    "pi_q",
    "verify_pi_phi",
    "verify_id_classical",
    "verify_commutation",
    "verify_x_mutation",
    "verify_b_mutation",
    "verify_gsum",
    "closed_vertex_paths",
]


@dataclass
class Report:
    """Named boolean checks with optional detail strings."""

    name: str
    checks: Dict[str, bool] = field(default_factory=dict)
    details: Dict[str, str] = field(default_factory=dict)

    def add(self, key: str, ok: bool, detail: str = "") -> None:
        self.checks[key] = bool(ok)
        if detail and not ok:
            self.details[key] = detail

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def failures(self) -> List[str]:
        return [f"{k}: {self.details.get(k, 'failed')}" for k, v in self.checks.items() if not v]

    def to_json(self) -> dict:
        return {"name": self.name, "ok": self.ok, "checks": dict(sorted(self.checks.items())),
                "failures": self.failures()}


# -- helpers -------------------------------------------------------------------

def _weights_on(T: Triangulation, items: Iterable[Tuple[Chord, int]]) -> List[int]:
    w = [0] * T.rank
    for c, x in items:
        w[T.index[chord(*c)]] += x
    return w


def lamination_chart(l: ALamination | DLamination) -> Triangulation:
    """Lexicographically smallest triangulation containing the curves of l."""
    if isinstance(l, ALamination):
        return completion(l.n, l.diagonals())
    return completion(l.n, [c for c, _ in l.front if not is_boundary(c, l.n)])


def _phase_form(n: int, a: Sequence[Tuple[Chord, int]], b: Sequence[Tuple[Chord, int]]) -> int:
    """Bilinear chord pairing L(a, b) = sum lambda(c, c') w w'."""
    return sum(chord_lambda(c1, c2, n) * w1 * w2 for c1, w1 in a for c2, w2 in b if c1 != c2)


# -- I_A -----------------------------------------------------------------------

@dataclass
class IAResult:
    chart: Triangulation
    value: TorusElement

    def to_text(self, q_mode: bool = True) -> str:
        return x_chart(self.chart).to_text(self.value, q_mode)

    def at_one_text(self) -> str:
        xc = x_chart(self.chart)
        return self.value.map_coefficients(lambda c: OmegaLaurent.const(c.eval_at_one())).to_text(xc.labels, True)


def a_chart_value(l: ALamination, T: Triangulation, T_l: Optional[Triangulation] = None) -> TorusElement:
    """``M_{T_l}(w)`` expanded in the A-chart of T."""
    if T_l is None:
        T_l = lamination_chart(l)
    return chart_monomial(T, T_l, _weights_on(T_l, l.weights))


def i_a_q(l: ALamination, T: Triangulation, T_l: Optional[Triangulation] = None) -> IAResult:
    err = l.validate()
    if err:
        raise ValueError(f"invalid lamination: {err}")
    if l.n != T.n:
        raise ValueError("lamination and chart live on different polygons")
    return IAResult(T, x_chart(T).from_a_chart(a_chart_value(l, T, T_l)))


def classical_ia(l: ALamination, T: Triangulation) -> sympy.Expr:
    vals = classical.ptolemy_expansions(T)
    return classical.product_of(vals, l.weights)


def leading_ordered_coefficient(x: TorusElement, eps_J: Sequence[Sequence[int]]) -> Tuple[Vec, OmegaLaurent]:
    """Leading exponent a and its coefficient when written as ordered X_1^a1 ... X_r^ar."""
    a, c = x.leading_term()
    s = sum(eps_J[i][j] * a[i] * a[j] for i in range(len(a)) for j in range(i + 1, len(a)))
    # X^a (normal) = q^{-s} X_1^{a_1} ... X_r^{a_r}
    return a, c * OmegaLaurent.q(-s)


def verify_ia_properties(l: ALamination, T: Triangulation) -> Report:
    rep = Report(f"ia-props {l.label()} @ {T.label()}")
    res = i_a_q(l, T)
    x = res.value
    rep.add("coefficients in Z>=0[q,q^-1]", all(c.is_nonneg_q_laurent() for _, c in x.items()))
    lhs = classical.torus_at_one(x, classical.x_substitution(T))
    rep.add("classical limit", classical.is_zero(lhs - classical_ia(l, T)))
    rep.add("star invariant", x.star() == x)
    eps = T.epsilon
    eps_J = [[eps[i][j] for j in T.mutable] for i in T.mutable]
    a, c = leading_ordered_coefficient(x, eps_J)
    s = sum(eps_J[i][j] * a[i] * a[j] for i in range(len(a)) for j in range(i + 1, len(a)))
    rep.add("highest term", c == OmegaLaurent.q(-s), f"coefficient {c.to_text(True)} at {a}")
    return rep


# -- structure constants ----------------------------------------------------------

def _split(l: ALamination) -> Tuple[List[Tuple[Chord, int]], List[Tuple[Chord, int]]]:
    pos = [(c, w) for c, w in l.weights if w > 0]
    neg = [(c, -w) for c, w in l.weights if w < 0]
    return pos, neg


def structure_constants(l: ALamination, lp: ALamination) -> Dict[ALamination, OmegaLaurent]:
    """Coefficients c with I(l) I(l') = sum c(l'') I(l'')."""
    for x in (l, lp):
        err = x.validate()
        if err:
            raise ValueError(f"invalid lamination: {err}")
    n = l.n
    wp, wm = _split(l)
    vp, vm = _split(lp)
    P = (-_phase_form(n, wm, wp) - _phase_form(n, vm, vp)
         + 2 * _phase_form(n, wp, vm) - _phase_form(n, wm, vm))
    W: Dict[Chord, int] = {}
    for c, w in wm + vm:
        W[c] = W.get(c, 0) + w
    Wl = sorted(W.items())
    prod = superpose(Multicurve(n, tuple(wp)), Multicurve(n, tuple(vp)))
    out: Dict[ALamination, OmegaLaurent] = {}
    for K, d in prod.items():
        phase = P + _phase_form(n, Wl, list(K.curves))
        items = list(K.curves) + [(c, -w) for c, w in Wl]
        li = ALamination(n, tuple(items))
        err = li.validate()
        if err:
            raise ArithmeticError(f"peel failure: {K.label()} gives {err}")
        out[li] = out.get(li, OmegaLaurent()) + d.shift(phase)
    return {k: v for k, v in sorted(out.items(), key=lambda kv: kv[0].weights) if not v.is_zero()}


def verify_structure_constants(l: ALamination, lp: ALamination, T: Optional[Triangulation] = None) -> Report:
    rep = Report(f"structure {l.label()} * {lp.label()}")
    if T is None:
        T = Triangulation.fan(l.n)
    sc = structure_constants(l, lp)
    rep.add("finite", len(sc) < 10**6)
    rep.add("coefficients in Z[q,q^-1]", all(c.is_q_laurent() for c in sc.values()))
    lhs = i_a_q(l, T).value * i_a_q(lp, T).value
    rhs = TorusElement.zero(lhs.form)
    for li, c in sc.items():
        rhs = rhs + i_a_q(li, T).value.scale(c)
    rep.add("reconstruction", lhs == rhs)
    return rep


# -- N_l and I_D -------------------------------------------------------------------

def _g_sum(items: Iterable[Tuple[Chord, int]], T: Triangulation, orientation: int) -> List[int]:
    g = [0] * T.rank
    for c, w in items:
        for i, x in enumerate(g_vector(c, T, orientation)):
            g[i] += w * x
    return g


def n_l(l: DLamination, T: Triangulation) -> int:
    # both sides use the g-vectors of the chart T itself, so that equal
    # front and back curves pair to zero
    gf = _g_sum(l.front, T, 1)
    gb = _g_sum(l.back, T, 1)
    return chart_form(T).pairing(gf, gb)


def _curve_product(items: Sequence[Tuple[Chord, int]], T: Triangulation, orientation: int) -> TorusElement:
    """Normal product of a noncrossing curve system in the chart of T."""
    form = chart_form(T, orientation)
    out = TorusElement.one(form)
    for c, w in items:
        out = out * (cluster_variable(c, T, orientation) ** w)
    phase = 0
    for i, (c1, w1) in enumerate(items):
        for c2, w2 in items[i + 1:]:
            phase += orientation * chord_lambda(c1, c2, T.n) * w1 * w2
    return out.shift(phase)


@dataclass
class IDResult:
    chart: Triangulation
    n_l: int
    den: TorusElement  # X-chart element D with [C] = A^{g_C} D
    denominators: List[Tuple[TorusElement, int]]  # F-polynomials of front curves in X variables
    numerator: TorusElement  # D-chart element; I_D = D^{-1} * numerator

    def to_json(self, q_mode: bool = True) -> dict:
        xc = x_chart(self.chart)
        dc = double_chart(self.chart)
        return {
            "n_l": self.n_l,
            "denominators": [{"f": xc.to_text(f, q_mode), "mult": m} for f, m in self.denominators],
            "numerator": dc.to_text(self.numerator, q_mode),
        }


def _f_in_x(c: Chord, T: Triangulation) -> TorusElement:
    xc = x_chart(T)
    data = f_polynomial(c, T)
    # Y_j coincides with X_j; F is written with normal Y-monomials
    return TorusElement(xc.form, data.f)


def i_d_q(l: DLamination, T: Triangulation) -> IDResult:
    err = l.validate()
    if err:
        raise ValueError(f"invalid lamination: {err}")
    if l.n != T.n:
        raise ValueError("lamination and chart live on different polygons")
    xc, dc = x_chart(T), double_chart(T)
    N = n_l(l, T)
    front = list(l.front)
    back = list(l.back)
    gC = _g_sum(front, T, 1)
    a_form = chart_form(T)
    C = _curve_product(front, T, 1)
    inv_g = TorusElement.monomial(a_form, [-x for x in gC])
    den = xc.from_a_chart(inv_g * C)
    Cb = _curve_product(back, T, -1)
    num_big = tensor(inv_g, Cb, dc.big_form).shift(-N)
    numerator = dc.reduce(num_big)
    denominators = [(_f_in_x(c, T), w) for c, w in front if not is_boundary(c, T.n)]
    return IDResult(T, N, den, denominators, numerator)


def pi_q(x: TorusElement, T: Triangulation) -> TorusElement:
    """Set every B to 1 in a D-chart Laurent polynomial.

    The normal D-monomial (a, g) goes to the normal X-monomial a.
    """
    return double_chart(T).specialize_b_to_one(x)


def verify_pi_phi(a: ALamination, T: Triangulation) -> Report:
    from .lamination import phi

    rep = Report(f"pi-phi {a.label()} @ {T.label()}")
    res = i_d_q(phi(a), T)
    rep.add("denominator trivial", res.den == x_chart(T).one())
    rep.add("pi(I_D(phi(l))) = I_A(l)", pi_q(res.numerator, T) == i_a_q(a, T).value)
    return rep


def classical_id(l: DLamination, T: Triangulation) -> sympy.Expr:
    front = classical.product_of(classical.ptolemy_expansions(T), l.front)
    back = classical.product_of(classical.mirror_expansions(T), l.back)
    return back / front


def verify_id_classical(l: DLamination, T: Triangulation) -> Report:
    rep = Report(f"id-classical {l.label()} @ {T.label()}")
    res = i_d_q(l, T)
    sub = classical.d_substitution(T)
    r = len(T.mutable)
    xsub = {i: sub[i] for i in range(r)}
    den = classical.torus_at_one(res.den, xsub)
    num = classical.torus_at_one(res.numerator, sub)
    rep.add("omega = 1 agrees with the commutative evaluation", classical.is_zero(num / den - classical_id(l, T)))
    fprod = sympy.Mul(*[classical.torus_at_one(f, xsub) ** m for f, m in res.denominators])
    rep.add("denominator is the product of F-polynomials at omega = 1", classical.is_zero(den - fprod))
    rep.add("denominators positive with constant term 1",
            all(f.coefficient((0,) * r).is_one() and all(c.is_nonneg_q_laurent() for _, c in f.items())
                for f, _ in res.denominators))
    return rep


# -- commutation relations -----------------------------------------------------------

def verify_commutation(T: Triangulation) -> Report:
    rep = Report(f"commutation {T.label()}")
    xc, dc = x_chart(T), double_chart(T)
    eps = T.epsilon
    J = T.mutable
    r = len(J)
    for p in range(r):
        for s in range(r):
            e = eps[J[p]][J[s]]
            Xi, Xj = xc.generator(p), xc.generator(s)
            rep.add(f"X{p}X{s}", Xi * Xj == (Xj * Xi).scale(OmegaLaurent.q(2 * e)))
            DXi, DXj, DBi, DBj = dc.X(p), dc.X(s), dc.B(p), dc.B(s)
            rep.add(f"D:X{p}X{s}", DXi * DXj == (DXj * DXi).scale(OmegaLaurent.q(2 * e)))
            rep.add(f"D:B{p}B{s}", DBi * DBj == DBj * DBi)
            rep.add(f"D:X{p}B{s}", DXi * DBj == (DBj * DXi).scale(OmegaLaurent.q(2 * (p == s))))
        hat = dc.monomial(dc.hat_x_vec(p))
        rep.add(f"X{p} commutes with its hat", dc.X(p) * hat == hat * dc.X(p))
    return rep


# -- transformation formulas ------------------------------------------------------------

def _x_poly(xc: XChart, pos: int, coeffs: Sequence[int]) -> TorusElement:
    """prod (1 + q^{c} X) over the given q-exponents, X the pos-th generator."""
    out = xc.one()
    for c in coeffs:
        out = out * (xc.one() + xc.generator(pos).scale(OmegaLaurent.q(c)))
    return out


def verify_x_mutation(T: Triangulation, k: Chord) -> Report:
    k = chord(*k)
    rep = Report(f"x-mutation {T.label()} at {chord_label(k)}")
    Tp = T.flip(k)
    emap = T.edge_map(k)
    xc = x_chart(T)
    J = T.mutable
    kp = Tp.index[emap[k]]
    kpos = J.index(T.index[k])
    Xk = xc.generator(kpos)
    values = {c: cluster_variable(c, T) for c in Tp.edges}
    epsp = Tp.epsilon
    eps = T.epsilon
    for pos, j in enumerate(J):
        c = T.edges[j]
        jp = Tp.index[emap[c]]
        v = list(epsp[jp])
        m = v[kp]
        e = eps[j][T.index[k]]
        Xi = xc.generator(pos)
        key = f"X'[{chord_label(emap[c])}]"
        if c == k:
            lhs = xc.from_a_chart(chart_monomial(T, Tp, v))
            rep.add(key, lhs == Xk ** -1)
            continue
        if m >= 0:
            lhs = xc.from_a_chart(chart_monomial(T, Tp, v))
            rhs = Xi * _x_poly(xc, kpos, [2 * p + 1 for p in range(-e)]) if e <= 0 else None
            rep.add(key, rhs is not None and lhs == rhs)
            continue
        # X'_i = w^{L'(v0, m e')} M'(v0) [k']^{m}; clear the inverse power on the right
        v0 = list(v)
        v0[kp] = 0
        me = [0] * Tp.rank
        me[kp] = m
        lamp = Tp.lam
        phase = sum(v0[a] * lamp[a][b] * me[b] for a in range(Tp.rank) for b in range(Tp.rank))
        lhs_a = chart_monomial(T, Tp, v0).shift(phase)  # = X'_i [k']^{|m|}
        kvar = values[Tp.edges[kp]] ** (-m)
        P = xc.one()
        for p in range(e):
            P = P * (Xk + xc.one().scale(OmegaLaurent.q(2 * p + 1)))
        P_a = xc.to_a_chart(P)
        # claimed X'_i = X_i X_k^e P^{-1}, so X'_i [k'] ^{|m|} = X_i X_k^e P^{-1} [k']^{|m|}
        # and P^{-1} [k']^{|m|} = [k']^{|m|} Pt^{-1} with Pt = [k']^{-|m|} P [k']^{|m|}
        Pt = (P_a * kvar).left_divide(kvar)
        if Pt is None:
            rep.add(key, False, "conjugated denominator is not Laurent")
            continue
        target = xc.to_a_chart(Xi * Xk ** e) * kvar
        rep.add(key, lhs_a * Pt == target)
    return rep


def verify_b_mutation(T: Triangulation, k: Chord, classical_check: bool = True) -> Report:
    k = chord(*k)
    rep = Report(f"b-mutation {T.label()} at {chord_label(k)}")
    Tp = T.flip(k)
    emap = T.edge_map(k)
    dc = double_chart(T)
    big = dc.big_form
    J = T.mutable
    kpos = J.index(T.index[k])

    def big_of(d):
        return TorusElement.monomial(big, dc.big_vector(d))

    def front(x):
        return tensor(x, TorusElement.one(chart_form(T, -1)), big)

    def back(x):
        return tensor(TorusElement.one(chart_form(T)), x, big)

    for pos, j in enumerate(J):
        c = T.edges[j]
        key = f"B'[{chord_label(emap[c])}]"
        if c != k:
            jp = Tp.index[emap[c]]
            e = [0] * Tp.rank
            e[jp] = 1
            val = front(chart_monomial(T, Tp, [-x for x in e])) * back(chart_monomial(T, Tp, e, -1))
            rep.add(key, dc.reduce(val) == dc.B(pos))
            continue
        kk = emap[k]
        kf = cluster_variable(kk, T)
        kb = cluster_variable(kk, T, -1)
        one = TorusElement.one(big)
        Xk = big_of(dc.x_vec(kpos))
        # [k'] (x) 1 = (1 + Z) c A^{m}, so B'_k = (1 + Z'')^{-1} Mon (1 (x) [k']) with
        # Mon = (c A^m (x) 1)^{-1} and Z'' = Mon Z Mon^{-1}; every factor below
        # lies in the D-chart sublattice
        m1, c1 = kf.leading_term()
        lead = TorusElement.monomial(chart_form(T), m1, c1)
        Z = (kf - lead) * lead.monomial_inverse()
        if not Z.is_monomial():
            rep.add(key, False, "exchange relation is not binomial")
            continue
        mon = front(lead.monomial_inverse())
        Zpp = mon * front(Z) * mon.monomial_inverse()
        lhs = dc.reduce(mon * back(kb) * (one + Xk.scale(OmegaLaurent.q(-1))))
        bbp = big_of(dc.bb_plus_vec(pos))
        bbm = big_of(dc.bb_minus_vec(pos))
        Bk_inv = big_of([-x for x in dc.b_vec(pos)])
        rhs = dc.reduce((one + Zpp) * ((Xk * bbp).scale(OmegaLaurent.q(1)) + bbm) * Bk_inv)
        rep.add(key, lhs == rhs)
        if classical_check:
            xs = classical.edge_symbols(T, "x")
            ys = classical.boundary_identified_symbols(T)
            fx = classical.ptolemy_expansions(T)[kk]
            fy = classical.mirror_expansions(T)[kk]
            sub = classical.d_substitution(T)
            Xs = sub[kpos]
            row = dc.eps_row(pos)
            bp = sympy.Mul(*[(ys[J[t]] / xs[J[t]]) ** x for t, x in enumerate(row) if x > 0])
            bm = sympy.Mul(*[(ys[J[t]] / xs[J[t]]) ** -x for t, x in enumerate(row) if x < 0])
            Bk = ys[j] / xs[j]
            formula = (Xs * bp + bm) / ((1 + Xs) * Bk)
            rep.add(key + " classical", classical.is_zero(fy / fx - formula))
    return rep


# -- g-vector sums ------------------------------------------------------------------

def verify_gsum(T: Triangulation, path: Sequence[int]) -> Tuple[bool, Optional[Vec]]:
    """Alternating g-vector sum along a closed vertex path lies in the x-lattice.

    ``path`` lists vertices v_0, ..., v_{2k-1}; the curves are the chords
    v_{i-1} v_i taken cyclically.  Returns (ok, X-coordinates).
    """
    L = len(path)
    if L % 2:
        raise ValueError("closed paths must have even length")
    s = [0] * T.rank
    for i in range(1, L + 1):
        a, b = path[i - 1], path[i % L]
        if a == b:
            raise ValueError("consecutive path vertices must differ")
        g = g_vector(chord(a, b), T)
        sign = -1 if i % 2 else 1
        for t, x in enumerate(g):
            s[t] += sign * x
    coords = x_chart(T).solve(s)
    return coords is not None, coords


def closed_vertex_paths(n: int, max_len: int) -> List[Tuple[int, ...]]:
    """Closed vertex walks of even length <= max_len, up to nothing (all starts kept)."""
    out = []
    for L in range(2, max_len + 1, 2):
        for walk in itertools.product(range(n), repeat=L):
            if all(walk[i] != walk[(i + 1) % L] for i in range(L)):
                out.append(walk)
    return out
