"""Skein algebra of the marked polygon.

Basis: simple multicurves (multisets of pairwise noncrossing chords).  The
product ``[K][L]`` stacks K over L and resolves the picture.

Combinatorial model used by ``superpose``: every marked point is blown up
into a small cluster of distinct points on the circle, one per strand end,
so the superposed picture becomes a chord diagram with straight chords.
Strands of K get height 1, strands of L height 0.  Then

* each K/L crossing is smoothed in both ways with weights w^{-2}, w^{+2};
* a closed loop is the scalar -(w^4 + w^-4);
* an arc with both ends in one cluster bounds a corner and kills the term;
* ends of different heights at one marked point are brought to the same
  height with a factor w^{-1} or w^{+1}, depending on their order.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

from .coeff import OmegaLaurent
from .polygon import Chord, Triangulation, chord, chord_label, chord_lambda, crosses, offset
from .torus import TorusElement
from .cluster import cluster_variable, chart_form

# Pinned conventions (see the decision ledger).  CROSSING_SIGN decides
# which smoothing carries w^{-2}; MARKED_POINT_SIGN decides which order of
# heights at a marked point costs w^{-1}.
CROSSING_SIGN = 1
MARKED_POINT_SIGN = 1

# above this many crossings the product is split into single-chord steps
_DIRECT_LIMIT = 10

Raw = Dict[int, int]


@dataclass(frozen=True)
class Multicurve:
    n: int
    curves: Tuple[Tuple[Chord, int], ...]

    def __post_init__(self):
        acc: Dict[Chord, int] = {}
        for c, m in self.curves:
            c = chord(*c)
            if m < 0:
                raise ValueError("multiplicities must be nonnegative")
            if not (0 <= c[0] < c[1] < self.n):
                raise ValueError(f"{chord_label(c)} is not a chord of the {self.n}-gon")
            if m:
                acc[c] = acc.get(c, 0) + m
        object.__setattr__(self, "curves", tuple(sorted(acc.items())))

    @classmethod
    def of(cls, n: int, chords: Iterable[Chord]) -> "Multicurve":
        return cls(n, tuple((c, 1) for c in chords))

    @classmethod
    def empty(cls, n: int) -> "Multicurve":
        return cls(n, ())

    def chords(self) -> List[Chord]:
        return [c for c, _ in self.curves]

    def mult(self, c: Chord) -> int:
        return dict(self.curves).get(chord(*c), 0)

    def strands(self) -> List[Chord]:
        out = []
        for c, m in self.curves:
            out.extend([c] * m)
        return out

    def is_simple(self) -> bool:
        cs = self.chords()
        return all(not crosses(a, b) for i, a in enumerate(cs) for b in cs[i + 1:])

    def __add__(self, other: "Multicurve") -> "Multicurve":
        return Multicurve(self.n, self.curves + other.curves)

    def to_json(self) -> dict:
        return {"curves": [{"chord": list(c), "mult": m} for c, m in self.curves]}

    @classmethod
    def from_json(cls, n: int, data: Mapping) -> "Multicurve":
        return cls(n, tuple((tuple(d["chord"]), int(d.get("mult", 1))) for d in data.get("curves", [])))

    def label(self) -> str:
        if not self.curves:
            return "[]"
        return "[" + " ".join(chord_label(c) if m == 1 else f"{chord_label(c)}^{m}" for c, m in self.curves) + "]"


class SkeinElement:
    __slots__ = ("n", "_t")

    def __init__(self, n: int, terms: Mapping[Multicurve, OmegaLaurent | int] | None = None):
        self.n = n
        t: Dict[Multicurve, OmegaLaurent] = {}
        for k, c in (terms or {}).items():
            c = OmegaLaurent.coerce(c)
            if not k.is_simple():
                raise ValueError("skein basis elements must be simple multicurves")
            s = t.get(k, OmegaLaurent()) + c
            if s.is_zero():
                t.pop(k, None)
            else:
                t[k] = s
        self._t = t

    @classmethod
    def of(cls, K: Multicurve) -> "SkeinElement":
        return cls(K.n, {K: 1})

    def terms(self) -> Dict[Multicurve, OmegaLaurent]:
        return dict(self._t)

    def items(self) -> List[Tuple[Multicurve, OmegaLaurent]]:
        return sorted(self._t.items(), key=lambda kv: kv[0].curves)

    def is_zero(self) -> bool:
        return not self._t

    def __add__(self, other: "SkeinElement") -> "SkeinElement":
        t = dict(self._t)
        for k, c in other._t.items():
            t[k] = t.get(k, OmegaLaurent()) + c
        return SkeinElement(self.n, {k: c for k, c in t.items() if not c.is_zero()})

    def scale(self, c: OmegaLaurent | int) -> "SkeinElement":
        c = OmegaLaurent.coerce(c)
        return SkeinElement(self.n, {k: v * c for k, v in self._t.items()})

    def __mul__(self, other: "SkeinElement") -> "SkeinElement":
        acc: Dict[Multicurve, OmegaLaurent] = {}
        for k1, c1 in self._t.items():
            for k2, c2 in other._t.items():
                for k, c in superpose(k1, k2)._t.items():
                    acc[k] = acc.get(k, OmegaLaurent()) + c * c1 * c2
        return SkeinElement(self.n, {k: c for k, c in acc.items() if not c.is_zero()})

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SkeinElement) and self.n == other.n and self._t == other._t

    def to_text(self, q_mode: bool = False) -> str:
        if not self._t:
            return "0"
        parts = []
        for k, c in self.items():
            parts.append(k.label() if c.is_one() else f"({c.to_text(q_mode)})*{k.label()}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"SkeinElement({self.to_text()!r})"


def monomial_class(T: Triangulation, v: Sequence[int]) -> SkeinElement:
    if any(x < 0 for x in v):
        raise ValueError("monomial classes need nonnegative exponents")
    return SkeinElement.of(Multicurve(T.n, tuple((c, x) for c, x in zip(T.edges, v))))


# -- the resolution engine ------------------------------------------------------

def _layout(n: int, strands: Sequence[Chord]) -> List[Tuple[Tuple[int, int], Tuple[int, int]]]:
    """Circle positions ``(vertex, slot)`` of both ends of every strand.

    Within a cluster the ends are sorted by decreasing offset, which is the
    only order that keeps chords sharing a vertex from crossing.  Parallel
    copies are nested.
    """
    copy_index: List[int] = []
    seen: Dict[Chord, int] = {}
    for c in strands:
        copy_index.append(seen.get(c, 0))
        seen[c] = seen.get(c, 0) + 1
    ends: Dict[int, List[Tuple[tuple, int, int]]] = {}
    for s, (a, b) in enumerate(strands):
        r = copy_index[s]
        ends.setdefault(a, []).append(((-offset(a, b, n), r), s, 0))
        ends.setdefault(b, []).append(((-offset(b, a, n), -r), s, 1))
    pos: List[List[Tuple[int, int]]] = [[(0, 0), (0, 0)] for _ in strands]
    for v, lst in ends.items():
        lst.sort()
        for slot, (_, s, e) in enumerate(lst):
            pos[s][e] = (v, slot)
    return [tuple(p) for p in pos]


def _resolve(n: int, strands: Sequence[Chord], heights: Sequence[int]) -> Dict[Tuple[Tuple[Chord, int], ...], Raw]:
    pos = _layout(n, strands)
    # global circle order of all ends
    flat = sorted((pos[s][e], s, e) for s in range(len(strands)) for e in (0, 1))
    rank: Dict[Tuple[int, int], int] = {}
    for r, (_, s, e) in enumerate(flat):
        rank[(s, e)] = r
    lo = [min(rank[(s, 0)], rank[(s, 1)]) for s in range(len(strands))]
    hi = [max(rank[(s, 0)], rank[(s, 1)]) for s in range(len(strands))]
    lo_end = [0 if rank[(s, 0)] < rank[(s, 1)] else 1 for s in range(len(strands))]

    def inside(s: int, t: int) -> int | None:
        # rank of the end of t strictly between the ends of s
        for e in (0, 1):
            if lo[s] < rank[(t, e)] < hi[s]:
                return rank[(t, e)]
        return None

    crossings: List[Tuple[int, int]] = []
    for s in range(len(strands)):
        for t in range(s + 1, len(strands)):
            if (lo[s] < lo[t] < hi[s]) != (lo[s] < hi[t] < hi[s]):
                if heights[s] == heights[t]:
                    raise ValueError("input multicurves must be simple")
                over, under = (s, t) if heights[s] > heights[t] else (t, s)
                crossings.append((over, under))

    # node ids: ends are 2*s + e, ports come after
    n_ends = 2 * len(strands)
    port_id: Dict[Tuple[int, int, int], int] = {}

    def port(c: int, s: int, e: int) -> int:
        key = (c, s, e)
        if key not in port_id:
            port_id[key] = n_ends + len(port_id)
        return port_id[key]

    along: Dict[int, List[Tuple[int, int]]] = {s: [] for s in range(len(strands))}
    for ci, (o, u) in enumerate(crossings):
        along[o].append((inside(o, u), ci))
        along[u].append((inside(u, o), ci))
    fixed_edges: List[Tuple[int, int]] = []
    for s in range(len(strands)):
        seq = [ci for _, ci in sorted(along[s])]
        a_end, b_end = lo_end[s], 1 - lo_end[s]
        prev = 2 * s + a_end
        for ci in seq:
            fixed_edges.append((prev, port(ci, s, a_end)))
            prev = port(ci, s, b_end)
        fixed_edges.append((prev, 2 * s + b_end))

    # for each crossing: the two possible matchings, ordered (pred, succ)
    smoothings: List[Tuple[List[Tuple[int, int]], List[Tuple[int, int]]]] = []
    for ci, (o, u) in enumerate(crossings):
        ports = sorted(
            [(rank[(o, 0)], o, 0), (rank[(o, 1)], o, 1), (rank[(u, 0)], u, 0), (rank[(u, 1)], u, 1)]
        )
        pred, succ = [], []
        for i, (_, s, e) in enumerate(ports):
            if s != o:
                continue
            _, sp, ep = ports[i - 1]
            _, sn, en = ports[(i + 1) % 4]
            pred.append((port(ci, s, e), port(ci, sp, ep)))
            succ.append((port(ci, s, e), port(ci, sn, en)))
        smoothings.append((pred, succ))

    total = n_ends + len(port_id)
    cluster_of = [pos[s][e][0] for s in range(len(strands)) for e in (0, 1)]
    slot_of = [pos[s][e][1] for s in range(len(strands)) for e in (0, 1)]
    height_of = [heights[s] for s in range(len(strands)) for e in (0, 1)]

    # marked-point phase depends only on the ends, not on the state
    mp = 0
    by_cluster: Dict[int, List[Tuple[int, int]]] = {}
    for node in range(n_ends):
        by_cluster.setdefault(cluster_of[node], []).append((slot_of[node], height_of[node]))
    for lst in by_cluster.values():
        lst.sort()
        for i in range(len(lst)):
            for j in range(i + 1, len(lst)):
                hx, hy = lst[i][1], lst[j][1]
                if hx != hy:
                    mp += -MARKED_POINT_SIGN if hy > hx else MARKED_POINT_SIGN

    out: Dict[Tuple[Tuple[Chord, int], ...], Raw] = {}
    loop_value = {4: -1, -4: -1}
    for state in iproduct((0, 1), repeat=len(crossings)):
        adj: List[List[int]] = [[] for _ in range(total)]
        for a, b in fixed_edges:
            adj[a].append(b)
            adj[b].append(a)
        w = 0
        for ci, choice in enumerate(state):
            for a, b in smoothings[ci][choice]:
                adj[a].append(b)
                adj[b].append(a)
            w += (-2 if choice == 0 else 2) * CROSSING_SIGN
        visited = [False] * total
        arcs: Dict[Chord, int] = {}
        dead = False
        for start in range(n_ends):
            if visited[start]:
                continue
            visited[start] = True
            prev, cur = start, adj[start][0]
            while cur >= n_ends:
                visited[cur] = True
                a0, a1 = adj[cur]
                prev, cur = cur, (a1 if a0 == prev else a0)
            visited[cur] = True
            va, vb = cluster_of[start], cluster_of[cur]
            if va == vb:
                dead = True
                break
            c = chord(va, vb)
            arcs[c] = arcs.get(c, 0) + 1
        if dead:
            continue
        loops = 0
        for node in range(n_ends, total):
            if visited[node]:
                continue
            loops += 1
            prev, cur = -1, node
            while not visited[cur]:
                visited[cur] = True
                a0, a1 = adj[cur]
                prev, cur = cur, (a1 if a0 == prev else a0)
        coeff: Raw = {w + mp: 1}
        for _ in range(loops):
            nc: Raw = {}
            for e, x in coeff.items():
                for e2, y in loop_value.items():
                    nc[e + e2] = nc.get(e + e2, 0) + x * y
            coeff = {e: x for e, x in nc.items() if x}
        key = tuple(sorted(arcs.items()))
        slot = out.setdefault(key, {})
        for e, x in coeff.items():
            s = slot.get(e, 0) + x
            if s:
                slot[e] = s
            else:
                slot.pop(e, None)
    return {k: v for k, v in out.items() if v}


def _crossing_count(K: Multicurve, L: Multicurve) -> int:
    return sum(mk * ml for ck, mk in K.curves for cl, ml in L.curves if crosses(ck, cl))


def _superpose_direct(K: Multicurve, L: Multicurve) -> SkeinElement:
    strands = K.strands() + L.strands()
    heights = [1] * sum(m for _, m in K.curves) + [0] * sum(m for _, m in L.curves)
    res = _resolve(K.n, strands, heights)
    return SkeinElement(K.n, {Multicurve(K.n, key): OmegaLaurent(c) for key, c in res.items()})


def superpose(K: Multicurve, L: Multicurve) -> SkeinElement:
    """The product ``[K][L]`` expanded in the basis of simple multicurves."""
    if K.n != L.n:
        raise ValueError("multicurves on different polygons")
    if not K.is_simple() or not L.is_simple():
        raise ValueError("superpose expects simple multicurves")
    if len(L.strands()) <= 1 or _crossing_count(K, L) <= _DIRECT_LIMIT:
        return _superpose_direct(K, L)
    # [L] = w^{-s} l_1 l_2 ... l_r, with s read off the chord-by-chord product
    pieces = [Multicurve.of(K.n, [c]) for c in L.strands()]
    acc = SkeinElement.of(pieces[0])
    for p in pieces[1:]:
        acc = _mul_by_chord(acc, p)
    ((_, coeff),) = acc.items()
    s = coeff.min_exp()
    out = SkeinElement.of(K)
    for p in pieces:
        out = _mul_by_chord(out, p)
    return out.scale(OmegaLaurent.omega(-s))


def _mul_by_chord(x: SkeinElement, p: Multicurve) -> SkeinElement:
    acc: Dict[Multicurve, OmegaLaurent] = {}
    for k, c in x._t.items():
        for k2, c2 in superpose(k, p)._t.items():
            acc[k2] = acc.get(k2, OmegaLaurent()) + c * c2
    return SkeinElement(x.n, {k: c for k, c in acc.items() if not c.is_zero()})


# -- passage to a cluster chart -----------------------------------------------

def multicurve_to_chart(K: Multicurve, T: Triangulation, orientation: int = 1) -> TorusElement:
    """``w^{sum_{i<j} lambda_ij v_i v_j} prod [c_i]^{v_i}`` in the chart of T."""
    form = chart_form(T, orientation)
    out = TorusElement.one(form)
    phase = 0
    cs = K.curves
    for i, (ci, mi) in enumerate(cs):
        for cj, mj in cs[i + 1:]:
            phase += orientation * chord_lambda(ci, cj, K.n) * mi * mj
    for c, m in cs:
        out = out * (cluster_variable(c, T, orientation) ** m)
    return out.shift(phase)


def to_chart(x: SkeinElement, T: Triangulation, orientation: int = 1) -> TorusElement:
    form = chart_form(T, orientation)
    out = TorusElement.zero(form)
    for K, c in x.items():
        out = out + multicurve_to_chart(K, T, orientation).scale(c)
    return out
