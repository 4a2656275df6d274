"""Command line entry point.

Exit codes: 0 success, 1 verification failure, 2 usage or validation error.
All output is deterministic: JSON keys are sorted and suites are reported
in the order they were requested, whatever ``--jobs`` is.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Optional, Sequence

from .charts import x_chart
from .coeff import OmegaLaurent
from .duality import i_a_q, i_d_q, pi_q, structure_constants
from .lamination import ALamination, DLamination, phi
from .polygon import Triangulation, parse_chord
from .suites import SUITES, SuiteOptions, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    """Bad flags or inputs; reported as a structured violation with exit code 2."""

    def __init__(self, kind: str, message: str):
        super().__init__(message)
        self.kind = kind


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError("usage", message)


# -- input parsing ---------------------------------------------------------------

def _polygon(args) -> int:
    n = args.polygon
    if n is None or n < 3:
        raise UsageError("usage", "--polygon N with N >= 3 is required")
    return n


def _chart(args, n: int) -> Triangulation:
    if not args.chart:
        return Triangulation.fan(n)
    try:
        chords = [parse_chord(tok) for tok in args.chart.split(",") if tok.strip()]
        return Triangulation(n, tuple(sorted(chords)))
    except ValueError as exc:
        raise UsageError("chart", f"chart {args.chart!r} is not a triangulation of the {n}-gon: {exc}")


def _read_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError("file", f"cannot read {path}: {exc.strerror}")
    except json.JSONDecodeError as exc:
        raise UsageError("file", f"{path} is not valid JSON: {exc.msg}")


def _lamination(path: Optional[str], n: int, kind: type):
    if path is None:
        return kind.from_json(n, {})
    data = _read_json(path)
    try:
        lam = kind.from_json(n, data)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError("lamination", f"{path}: {exc}")
    err = lam.validate()
    if err:
        raise UsageError("lamination", f"{path}: {err}")
    return lam


def _laminations(args, n: int, kind: type, count: int) -> list:
    paths = args.lamination or []
    if len(paths) != count:
        raise UsageError("usage", f"expected {count} --lamination file(s), got {len(paths)}")
    return [_lamination(p, n, kind) for p in paths]


def _single(args, n: int, kind: type):
    paths = args.lamination or []
    if len(paths) > 1:
        raise UsageError("usage", "expected at most one --lamination file")
    return _lamination(paths[0] if paths else None, n, kind)


# -- commands ----------------------------------------------------------------------

def _ia_text(res, q_one: bool) -> str:
    return res.at_one_text() if q_one else res.to_text()


def cmd_ia(args) -> tuple:
    n = _polygon(args)
    T = _chart(args, n)
    lam = _single(args, n, ALamination)
    res = i_a_q(lam, T)
    if args.format == "text":
        return EXIT_OK, _ia_text(res, args.q_one)
    return EXIT_OK, {"chart": T.label(), "lamination": lam.to_json(), "q_one": args.q_one,
                     "value": _ia_text(res, args.q_one)}


def _as_phi_image(d: DLamination) -> Optional[ALamination]:
    """The A-lamination a with phi(a) = d, if there is one."""
    weights = {}
    for c, w in d.back:
        weights[c] = weights.get(c, 0) + w
    for c, w in d.front:
        weights[c] = weights.get(c, 0) - w
    a = ALamination.from_dict(d.n, weights)
    if a.is_valid() and phi(a) == d:
        return a
    return None


def cmd_id(args) -> tuple:
    n = _polygon(args)
    T = _chart(args, n)
    lam = _single(args, n, DLamination)
    res = i_d_q(lam, T)
    out = res.to_json(q_mode=True)
    out["chart"] = T.label()
    out["lamination"] = lam.to_json()
    a = _as_phi_image(lam)
    if a is None:
        out["projection_check"] = None
    else:
        out["projection_check"] = res.den == x_chart(T).one() and pi_q(res.numerator, T) == i_a_q(a, T).value
    if args.format == "text":
        return EXIT_OK, out["numerator"]
    return EXIT_OK, out


def cmd_product(args) -> tuple:
    n = _polygon(args)
    T = _chart(args, n)
    l1, l2 = _laminations(args, n, ALamination, 2)
    x = i_a_q(l1, T).value * i_a_q(l2, T).value
    xc = x_chart(T)
    if args.q_one:
        x = x.map_coefficients(lambda c: OmegaLaurent.const(c.eval_at_one()))
    text = xc.to_text(x)
    if args.format == "text":
        return EXIT_OK, text
    return EXIT_OK, {"chart": T.label(), "product": text}


def cmd_structure(args) -> tuple:
    n = _polygon(args)
    l1, l2 = _laminations(args, n, ALamination, 2)
    consts = structure_constants(l1, l2)
    terms = [{"lamination": k.to_json(), "label": k.label(), "c": v.to_text(True)}
             for k, v in sorted(consts.items(), key=lambda kv: kv[0].weights)]
    if args.format == "text":
        return EXIT_OK, "\n".join(f"{t['c']}  [{t['label']}]" for t in terms)
    return EXIT_OK, {"terms": terms}


def _run_named(job):
    name, opts = job
    return run_suite(name, opts).to_json()


def cmd_verify(args) -> tuple:
    names = args.suites or list(SUITES)
    unknown = [s for s in names if s not in SUITES]
    if unknown:
        raise UsageError("suite", f"unknown suite(s): {', '.join(unknown)}; known: {', '.join(SUITES)}")
    n = args.n if args.n is not None else args.polygon
    opts = SuiteOptions(n=n, weights=args.weights, order=args.order, samples=args.samples, seed=args.seed)
    jobs = [(s, opts) for s in names]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            results = list(ex.map(_run_named, jobs))
    else:
        results = [_run_named(j) for j in jobs]
    ok = all(r["status"] == "PASS" for r in results)
    if args.format == "text":
        lines = [f"{r['status']} {r['suite']} count={r['count']} failed={r['failed']}" for r in results]
        for r in results:
            lines += [f"  {r['suite']}: {f}" for f in r["failures"]]
        return (EXIT_OK if ok else EXIT_FAIL), "\n".join(lines)
    return (EXIT_OK if ok else EXIT_FAIL), {"status": "PASS" if ok else "FAIL", "suites": results}


# -- argument parsing -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="diskduality", description="Quantum duality maps for triangulated polygons.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def common(sp, fmt: str, lam: bool = True):
        sp.add_argument("--polygon", "--n", dest="polygon", type=int, help="number of polygon vertices")
        sp.add_argument("--chart", help='diagonals of the chart, e.g. "0-2,0-3" (default: fan at vertex 0)')
        if lam:
            sp.add_argument("--lamination", action="append", metavar="FILE", help="lamination JSON file ('-' for stdin)")
        sp.add_argument("--q-one", action="store_true", help="print the specialisation at q = 1")
        sp.add_argument("--format", choices=("json", "text"), default=fmt)
        sp.add_argument("--output", metavar="FILE", help="write the result here instead of stdout")

    common(sub.add_parser("ia", help="the A-duality map of a lamination"), "text")
    common(sub.add_parser("id", help="the D-duality map of a double lamination"), "json")
    common(sub.add_parser("product", help="product of two A-duality values"), "text")
    common(sub.add_parser("structure", help="structure constants of two A-laminations"), "json")
    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("suites", nargs="*", metavar="SUITE", help=f"any of: {', '.join(SUITES)} (default: all)")
    v.add_argument("--n", type=int, dest="n", help="restrict to one polygon size")
    v.add_argument("--polygon", type=int, dest="polygon")
    v.add_argument("--order", type=int, help="series truncation order or path length")
    v.add_argument("--weights", type=int, help="weight bound")
    v.add_argument("--samples", type=int, help="number of random samples")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--format", choices=("json", "text"), default="json")
    v.add_argument("--output", metavar="FILE")
    return p


COMMANDS = {"ia": cmd_ia, "id": cmd_id, "product": cmd_product, "structure": cmd_structure, "verify": cmd_verify}


def _emit(payload, path: Optional[str]) -> None:
    text = payload if isinstance(payload, str) else json.dumps(payload, sort_keys=True, indent=2)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
        if not args.command:
            raise UsageError("usage", f"a command is required: {', '.join(COMMANDS)}")
        code, payload = COMMANDS[args.command](args)
    except UsageError as exc:
        _emit({"error": exc.kind, "message": str(exc)}, None)
        return EXIT_USAGE
    except ValueError as exc:
        _emit({"error": "validation", "message": str(exc)}, None)
        return EXIT_USAGE
    _emit(payload, args.output)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
