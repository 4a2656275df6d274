"""Verification suites shared by the command line and the test-suite.

Every suite returns a :class:`SuiteResult`: a count of performed checks,
the failures (capped), and a few informational notes.  Suites are pure
functions of their options, so results are reproducible.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from . import dilog
from .cluster import check_cluster_positivity
from .duality import (
    closed_vertex_paths,
    n_l,
    verify_b_mutation,
    verify_commutation,
    verify_gsum,
    verify_ia_properties,
    verify_id_classical,
    verify_pi_phi,
    verify_structure_constants,
    verify_x_mutation,
)
from .lamination import enumerate_alaminations, noncrossing_sets, phi, random_alamination, random_dlamination
from .polygon import (
    boundary_edges,
    chord_label,
    compatibility_product,
    enumerate_triangulations,
    mutate_matrix,
    permute_to,
)
from .skein import Multicurve, SkeinElement, to_chart

MAX_REPORTED_FAILURES = 20


@dataclass
class SuiteOptions:
    n: Optional[int] = None
    weights: Optional[int] = None
    order: Optional[int] = None
    samples: Optional[int] = None
    seed: int = 0


@dataclass
class SuiteResult:
    name: str
    count: int = 0
    failures: List[str] = field(default_factory=list)
    failed: int = 0
    notes: Dict[str, object] = field(default_factory=dict)

    def check(self, ok: bool, what: str) -> None:
        self.count += 1
        if not ok:
            self.failed += 1
            if len(self.failures) < MAX_REPORTED_FAILURES:
                self.failures.append(what)

    def absorb(self, report, prefix: str) -> None:
        """Fold a Report or DilogReport in as a single check."""
        ok = report.ok
        if ok:
            self.check(True, prefix)
            return
        if hasattr(report, "failures"):
            detail = "; ".join(report.failures()[:3])
        else:
            detail = "; ".join(l for l in report.lines() if l.startswith("FAIL"))[:300]
        self.check(False, f"{prefix}: {detail}")

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def to_json(self) -> dict:
        return {
            "suite": self.name,
            "status": "PASS" if self.ok else "FAIL",
            "count": self.count,
            "failed": self.failed,
            "failures": list(self.failures),
            "notes": dict(sorted(self.notes.items())),
        }


def _ns(opts: SuiteOptions, default: Sequence[int]) -> List[int]:
    return [opts.n] if opts.n is not None else list(default)


# -- suites ---------------------------------------------------------------------

def suite_flips(opts: SuiteOptions) -> SuiteResult:
    """Flip involutivity and agreement of flips with matrix mutation."""
    res = SuiteResult("flips")
    for n in _ns(opts, range(4, 8)):
        for T in enumerate_triangulations(n):
            for k in T.diagonals:
                Tp = T.flip(k)
                res.check(Tp.flip(T.flip_partner(k)) == T, f"n={n} {T.label()} flip twice at {chord_label(k)}")
                want = permute_to(T, k, mutate_matrix(T.epsilon, T.index[k]))
                res.check(want == Tp.epsilon, f"n={n} {T.label()} matrix mutation at {chord_label(k)}")
    return res


def suite_transformations(opts: SuiteOptions) -> SuiteResult:
    """The X- and B-coordinate transformation formulas for every flip."""
    res = SuiteResult("transformations")
    for n in _ns(opts, range(4, 7)):
        for T in enumerate_triangulations(n):
            for k in T.diagonals:
                res.absorb(verify_x_mutation(T, k), f"n={n} {T.label()} X at {chord_label(k)}")
                res.absorb(verify_b_mutation(T, k), f"n={n} {T.label()} B at {chord_label(k)}")
    return res


def suite_mutation(opts: SuiteOptions) -> SuiteResult:
    res = SuiteResult("mutation")
    for part in (suite_flips(opts), suite_transformations(opts)):
        res.count += part.count
        res.failed += part.failed
        res.failures += part.failures[: MAX_REPORTED_FAILURES - len(res.failures)]
    return res


def suite_compat(opts: SuiteOptions) -> SuiteResult:
    res = SuiteResult("compat")
    for n in _ns(opts, range(3, 9)):
        Ts = enumerate_triangulations(n)
        res.notes[f"triangulations n={n}"] = len(Ts)
        for T in Ts:
            prod = compatibility_product(T.exchange)
            ok = all(
                prod[row][i] == (4 if i == j else 0)
                for row, j in enumerate(T.mutable)
                for i in range(T.rank)
            )
            res.check(ok, f"n={n} {T.label()}")
    return res


def suite_commutation(opts: SuiteOptions) -> SuiteResult:
    res = SuiteResult("commutation")
    for n in _ns(opts, range(4, 8)):
        for T in enumerate_triangulations(n):
            res.absorb(verify_commutation(T), f"n={n} {T.label()}")
    return res


def _diagonal_parts(n: int, bound: int) -> List[Tuple[Tuple[tuple, int], ...]]:
    out = []
    for diags in noncrossing_sets(n):
        for ws in itertools.product(range(1, bound + 1), repeat=len(diags)):
            out.append(tuple(zip(diags, ws)))
    return out


def suite_skein_oracle(opts: SuiteOptions) -> SuiteResult:
    """Superposition against chart multiplication.

    Diagonal parts are exhaustive up to the weight bound; boundary parts
    and the comparison chart are drawn from a seeded generator.
    """
    res = SuiteResult("skein-oracle")
    bound = opts.weights if opts.weights is not None else 2
    for n in _ns(opts, (4, 5, 6)):
        rng = random.Random(opts.seed * 1000 + n)
        Ts = enumerate_triangulations(n)
        parts = _diagonal_parts(n, bound)
        pairs = list(itertools.product(parts, repeat=2))
        limit = opts.samples if opts.samples is not None else (None if n <= 5 else 200)
        if limit is not None and limit < len(pairs):
            pairs = rng.sample(pairs, limit)
        edges = boundary_edges(n)
        for dk, dl in pairs:
            bk = tuple((e, rng.randint(0, bound)) for e in edges)
            bl = tuple((e, rng.randint(0, bound)) for e in edges)
            K = Multicurve(n, dk + bk)
            L = Multicurve(n, dl + bl)
            T = rng.choice(Ts)
            lhs = to_chart(SkeinElement.of(K) * SkeinElement.of(L), T)
            rhs = to_chart(SkeinElement.of(K), T) * to_chart(SkeinElement.of(L), T)
            res.check(lhs == rhs, f"n={n} {K.label()} * {L.label()} in {T.label()}")
        res.notes[f"pairs n={n}"] = len(pairs)
    return res


def suite_ia_props(opts: SuiteOptions) -> SuiteResult:
    res = SuiteResult("ia-props")
    bound = opts.weights if opts.weights is not None else 2
    for n in _ns(opts, (5, 6)):
        Ts = enumerate_triangulations(n)
        if n <= 5:
            for l in enumerate_alaminations(n, bound):
                for T in Ts:
                    res.absorb(verify_ia_properties(l, T), f"n={n} [{l.label()}] in {T.label()}")
        else:
            rng = random.Random(opts.seed * 1000 + n)
            for _ in range(opts.samples or 100):
                l = random_alamination(n, bound, rng)
                T = rng.choice(Ts)
                res.absorb(verify_ia_properties(l, T), f"n={n} [{l.label()}] in {T.label()}")
    return res


def suite_structure(opts: SuiteOptions) -> SuiteResult:
    res = SuiteResult("structure")
    n = opts.n or 5
    small = enumerate_alaminations(n, 1)
    for a, b in itertools.product(small, repeat=2):
        res.absorb(verify_structure_constants(a, b), f"[{a.label()}] x [{b.label()}]")
    rng = random.Random(opts.seed)
    big = enumerate_alaminations(n, opts.weights or 2)
    for _ in range(opts.samples or 60):
        a, b = rng.choice(big), rng.choice(big)
        res.absorb(verify_structure_constants(a, b), f"[{a.label()}] x [{b.label()}]")
    return res


def suite_dilog(opts: SuiteOptions) -> SuiteResult:
    res = SuiteResult("dilog")
    order = opts.order or 8
    for name, ok in dilog.check_functional_equations(max(order, 12)).items():
        res.check(ok, f"functional equation {name}")
    for n in _ns(opts, (5, 6)):
        Ts = enumerate_triangulations(n)
        for T in Ts if n <= 5 else Ts[:: max(1, len(Ts) // 4)]:
            for S in dilog.rank_two_subsets(T):
                seed = dilog.seed_from_chart(T, S)
                for k in range(seed.rank):
                    tag = f"n={n} {T.label()} {S} k={k}"
                    res.absorb(dilog.verify_conjugation_closed_forms(seed, k, order), tag + " conjugation")
                    res.absorb(dilog.verify_mutation_formulas(seed, k, order), tag + " mutation")
                    res.absorb(dilog.verify_flip_back(seed, k), tag + " flip back")
    return res


def suite_double(opts: SuiteOptions) -> SuiteResult:
    """D-chart relations, the projection identity and the classical I_D check."""
    res = SuiteResult("double")
    n = opts.n or 5
    Ts = enumerate_triangulations(n)
    for T in Ts:
        res.absorb(verify_commutation(T), f"commutation {T.label()}")
    for l in enumerate_alaminations(n, opts.weights or 2):
        for T in Ts:
            res.absorb(verify_pi_phi(l, T), f"projection [{l.label()}] in {T.label()}")
    rng = random.Random(opts.seed)
    for _ in range(opts.samples or 20):
        d = random_dlamination(n, 1, rng)
        T = rng.choice(Ts)
        res.absorb(verify_id_classical(d, T), f"classical [{d.label()}] in {T.label()}")
    for l in enumerate_alaminations(n, 1)[:10]:
        T = rng.choice(Ts)
        res.absorb(verify_id_classical(phi(l), T), f"classical phi[{l.label()}] in {T.label()}")
    return res


def suite_gsum(opts: SuiteOptions) -> SuiteResult:
    res = SuiteResult("gsum")
    length = opts.order or 6
    for n in _ns(opts, (5, 6)):
        paths = closed_vertex_paths(n, length)
        for T in enumerate_triangulations(n):
            for p in paths:
                ok, _ = verify_gsum(T, p)
                res.check(ok, f"n={n} {T.label()} path {p}")
    return res


def suite_nl(opts: SuiteOptions) -> SuiteResult:
    """Chart independence of the integer N_l."""
    res = SuiteResult("nl")
    for n in _ns(opts, (5, 6)):
        rng = random.Random(opts.seed * 1000 + n)
        Ts = enumerate_triangulations(n)
        for _ in range(opts.samples or 100):
            d = random_dlamination(n, opts.weights or 1, rng)
            values = sorted({n_l(d, T) for T in Ts})
            res.check(len(values) == 1, f"n={n} [{d.label()}] takes values {values}")
    return res


def suite_cluster(opts: SuiteOptions) -> SuiteResult:
    """Shift, constant term and positivity of every F-polynomial."""
    res = SuiteResult("cluster")
    for n in _ns(opts, range(4, 9)):
        for T in enumerate_triangulations(n):
            problems = check_cluster_positivity(T)
            res.check(not problems, f"n={n} {T.label()}: {problems[:3]}")
    return res


SUITES: Dict[str, Callable[[SuiteOptions], SuiteResult]] = {
    "mutation": suite_mutation,
    "flips": suite_flips,
    "transformations": suite_transformations,
    "compat": suite_compat,
    "commutation": suite_commutation,
    "skein-oracle": suite_skein_oracle,
    "ia-props": suite_ia_props,
    "structure": suite_structure,
    "dilog": suite_dilog,
    "double": suite_double,
    "gsum": suite_gsum,
    "nl": suite_nl,
    "cluster": suite_cluster,
}


def run_suite(name: str, opts: SuiteOptions) -> SuiteResult:
    return SUITES[name](opts)
