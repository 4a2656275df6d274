"""Integer laminations on the polygon.

An ``ALamination`` assigns integers to chords: diagonals get positive
weights and must not cross, boundary edges may carry any sign, and the
weights around each vertex sum to zero.

A ``DLamination`` is a pair of positive curve systems, one on the disk and
one on its mirror, with equal weight totals at every vertex.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .polygon import Chord, all_diagonals, chord, chord_label, crosses, is_boundary

MAX_ENUMERATION_WEIGHT = 4


def _clean(n: int, weights: Mapping[Chord, int] | Iterable[Tuple[Chord, int]]) -> Tuple[Tuple[Chord, int], ...]:
    items = weights.items() if isinstance(weights, Mapping) else weights
    acc: Dict[Chord, int] = {}
    for c, w in items:
        c = chord(*c)
        if not (0 <= c[0] < c[1] < n):
            raise ValueError(f"{chord_label(c)} is not a chord of the {n}-gon")
        acc[c] = acc.get(c, 0) + int(w)
    return tuple(sorted((c, w) for c, w in acc.items() if w))


def _vertex_totals(n: int, weights: Iterable[Tuple[Chord, int]]) -> List[int]:
    tot = [0] * n
    for (a, b), w in weights:
        tot[a] += w
        tot[b] += w
    return tot


def _first_crossing(chords: Sequence[Chord]) -> Optional[Tuple[Chord, Chord]]:
    for i, a in enumerate(chords):
        for b in chords[i + 1:]:
            if crosses(a, b):
                return a, b
    return None


def _weights_json(items: Iterable[Tuple[Chord, int]]) -> list:
    return [{"chord": list(c), "w": w} for c, w in items]


def _weights_from_json(data: Sequence[Mapping]) -> List[Tuple[Chord, int]]:
    return [(tuple(d["chord"]), int(d["w"])) for d in data]


@dataclass(frozen=True)
class ALamination:
    n: int
    weights: Tuple[Tuple[Chord, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "weights", _clean(self.n, self.weights))

    @classmethod
    def from_dict(cls, n: int, weights: Mapping[Chord, int]) -> "ALamination":
        return cls(n, tuple(weights.items()))

    def as_dict(self) -> Dict[Chord, int]:
        return dict(self.weights)

    def weight(self, c: Chord) -> int:
        return self.as_dict().get(chord(*c), 0)

    def diagonals(self) -> List[Chord]:
        return [c for c, _ in self.weights if not is_boundary(c, self.n)]

    def is_zero(self) -> bool:
        return not self.weights

    def validate(self) -> Optional[str]:
        """None when valid, else a short description of the first violation."""
        for c, w in self.weights:
            if not is_boundary(c, self.n) and w <= 0:
                return f"diagonal positivity: {chord_label(c)} has weight {w}"
        pair = _first_crossing(self.diagonals())
        if pair:
            return f"noncrossing: {chord_label(pair[0])} crosses {chord_label(pair[1])}"
        for v, t in enumerate(_vertex_totals(self.n, self.weights)):
            if t:
                return f"vertex sum: vertex {v} has total {t}"
        return None

    def is_valid(self) -> bool:
        return self.validate() is None

    def __add__(self, other: "ALamination") -> "ALamination":
        return ALamination(self.n, self.weights + other.weights)

    def to_json(self) -> dict:
        return {"front": _weights_json(self.weights), "back": []}

    @classmethod
    def from_json(cls, n: int, data: Mapping) -> "ALamination":
        items = _weights_from_json(data.get("front", data.get("weights", [])))
        if data.get("back"):
            raise ValueError("an A-lamination has no back side")
        return cls(n, tuple(items))

    def label(self) -> str:
        if not self.weights:
            return "0"
        return " ".join(f"{chord_label(c)}:{w}" for c, w in self.weights)


@dataclass(frozen=True)
class DLamination:
    n: int
    front: Tuple[Tuple[Chord, int], ...]
    back: Tuple[Tuple[Chord, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "front", _clean(self.n, self.front))
        object.__setattr__(self, "back", _clean(self.n, self.back))

    def validate(self) -> Optional[str]:
        for side, items in (("front", self.front), ("back", self.back)):
            for c, w in items:
                if w <= 0:
                    return f"positive weights: {side} {chord_label(c)} has weight {w}"
            pair = _first_crossing([c for c, _ in items])
            if pair:
                return f"noncrossing: {side} {chord_label(pair[0])} crosses {chord_label(pair[1])}"
        f = _vertex_totals(self.n, self.front)
        b = _vertex_totals(self.n, self.back)
        for v in range(self.n):
            if f[v] != b[v]:
                return f"vertex totals: vertex {v} has {f[v]} in front and {b[v]} behind"
        back = dict(self.back)
        for c, _ in self.front:
            if is_boundary(c, self.n) and c in back:
                return f"boundary edge on both sides: {chord_label(c)}"
        return None

    def is_valid(self) -> bool:
        return self.validate() is None

    def is_empty(self) -> bool:
        return not self.front and not self.back

    def to_json(self) -> dict:
        return {"front": _weights_json(self.front), "back": _weights_json(self.back)}

    @classmethod
    def from_json(cls, n: int, data: Mapping) -> "DLamination":
        return cls(n, tuple(_weights_from_json(data.get("front", []))), tuple(_weights_from_json(data.get("back", []))))

    def label(self) -> str:
        f = " ".join(f"{chord_label(c)}:{w}" for c, w in self.front) or "-"
        b = " ".join(f"{chord_label(c)}:{w}" for c, w in self.back) or "-"
        return f"front {f} / back {b}"


def validate(l: ALamination | DLamination) -> Optional[str]:
    return l.validate()


def phi(l: ALamination) -> DLamination:
    """Positive curves go behind; negative boundary edges go in front, unsigned."""
    err = l.validate()
    if err:
        raise ValueError(f"invalid lamination: {err}")
    back = tuple((c, w) for c, w in l.weights if w > 0)
    front = tuple((c, -w) for c, w in l.weights if w < 0)
    return DLamination(l.n, front, back)


# -- enumeration ---------------------------------------------------------------

def noncrossing_sets(n: int) -> List[Tuple[Chord, ...]]:
    """All sets of pairwise noncrossing diagonals, in a deterministic order."""
    diags = all_diagonals(n)
    out: List[Tuple[Chord, ...]] = []

    def rec(start: int, chosen: List[Chord]) -> None:
        out.append(tuple(chosen))
        for i in range(start, len(diags)):
            d = diags[i]
            if all(not crosses(d, c) for c in chosen):
                chosen.append(d)
                rec(i + 1, chosen)
                chosen.pop()

    rec(0, [])
    return out


def boundary_solutions(n: int, demand: Sequence[int], box: int) -> List[List[int]]:
    """Integer b with ``b[v-1] + b[v] = demand[v]`` and ``|b_i| <= box``.

    ``b[i]`` is the weight of the boundary edge from i to i+1 (mod n).
    """
    # b[v] = demand[v] - b[v-1]; start from b[n-1] = t
    def run(t: int) -> Optional[List[int]]:
        b = [0] * n
        prev = t
        for v in range(n):
            b[v] = demand[v] - prev
            prev = b[v]
        return b if b[n - 1] == t else None

    if n % 2:
        # unique solution: 2 t = alternating sum
        s = 0
        for v in range(n):
            s += demand[v] if (n - 1 - v) % 2 == 0 else -demand[v]
        if s % 2:
            return []
        b = run(s // 2)
        return [b] if b is not None else []
    b0 = run(0)
    if b0 is None:
        return []
    out = []
    for t in range(-box - max(map(abs, b0), default=0), box + max(map(abs, b0), default=0) + 1):
        b = run(t)
        if b is not None and max(abs(x) for x in b) <= box:
            out.append(b)
    return out


def _assemble(n: int, diags: Sequence[Chord], ws: Sequence[int], b: Sequence[int]) -> ALamination:
    items = list(zip(diags, ws))
    items += [(chord(i, (i + 1) % n), b[i]) for i in range(n)]
    return ALamination(n, tuple(items))


def default_box(n: int, bound: int) -> int:
    return max(1, bound * (n - 3))


def enumerate_alaminations(n: int, weight_bound: int, box: Optional[int] = None) -> List[ALamination]:
    """All valid A-laminations with diagonal weights in 1..weight_bound.

    For odd n the boundary weights are forced.  For even n they form a
    one-parameter family; it is cut off at ``|boundary weight| <= box``.
    """
    if weight_bound > MAX_ENUMERATION_WEIGHT:
        raise ValueError(f"weight bound {weight_bound} exceeds the cap {MAX_ENUMERATION_WEIGHT}")
    if box is None:
        box = default_box(n, weight_bound)
    out = []
    for diags in noncrossing_sets(n) if weight_bound > 0 else [()]:
        ranges = [range(1, weight_bound + 1)] * len(diags)
        for ws in itertools.product(*ranges):
            demand = [0] * n
            for (a, c), w in zip(diags, ws):
                demand[a] -= w
                demand[c] -= w
            for b in boundary_solutions(n, demand, box):
                out.append(_assemble(n, diags, ws, b))
    out = sorted(set(out), key=lambda l: l.weights)
    return out


def random_alamination(n: int, weight_bound: int, rng: random.Random, box: Optional[int] = None) -> ALamination:
    if box is None:
        box = default_box(n, weight_bound)
    sets = noncrossing_sets(n)
    while True:
        diags = rng.choice(sets)
        ws = [rng.randint(1, weight_bound) for _ in diags]
        demand = [0] * n
        for (a, c), w in zip(diags, ws):
            demand[a] -= w
            demand[c] -= w
        sols = boundary_solutions(n, demand, box)
        if sols:
            return _assemble(n, diags, ws, rng.choice(sols))


def random_dlamination(n: int, weight_bound: int, rng: random.Random) -> DLamination:
    """A random valid D-lamination with diagonal weights up to ``weight_bound``."""
    sets = noncrossing_sets(n)
    box = default_box(n, weight_bound)
    while True:
        fd, bd = rng.choice(sets), rng.choice(sets)
        fw = [rng.randint(1, weight_bound) for _ in fd]
        bw = [rng.randint(1, weight_bound) for _ in bd]
        demand = [0] * n  # back minus front, to be made up by boundary edges
        for (a, c), w in zip(bd, bw):
            demand[a] += w
            demand[c] += w
        for (a, c), w in zip(fd, fw):
            demand[a] -= w
            demand[c] -= w
        sols = boundary_solutions(n, demand, box)
        if not sols:
            continue
        net = rng.choice(sols)  # net[i] = front weight minus back weight of edge i
        front = list(zip(fd, fw)) + [(chord(i, (i + 1) % n), net[i]) for i in range(n) if net[i] > 0]
        back = list(zip(bd, bw)) + [(chord(i, (i + 1) % n), -net[i]) for i in range(n) if net[i] < 0]
        d = DLamination(n, tuple(front), tuple(back))
        assert d.is_valid(), d.validate()
        return d
