"""Command-line interface.

Usage:
    wilsonloops compute LOOP.json [--strategy boundary] [--json] [--parallel N]
    wilsonloops analyze LOOP.json [--json]
    wilsonloops verify --suite {vanishing,edge-independence,table1,winding,series,spectrum,geometry,all}
    wilsonloops spectrum --area 2 --beta 0.25 [--points 64] [--tol 1e-13]
    wilsonloops table1 [--row N --areas s=1,t=2]
    wilsonloops selfcheck

Exit codes: 0 success, 1 usage or input error, 2 verification failure,
3 internal invariant violation (including an exhausted memo budget).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__, closedform, kernels
from .canonical import ParityViolation, canonical_collection, collection_size, layer_counts
from .engine import DEFAULT_STRATEGY, STRATEGIES, MemoConflict, MemoLimitExceeded, TerminationViolation, compute
from .fixtures import all_fixtures
from .geometry import HDnotConstant, InvariantViolation, regions
from .lattice import LoopError, load_loop, remove_backtracks
from .verify import SUITES, run_suite, selfcheck, spectrum_table

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_INVARIANT = 0, 1, 2, 3

_INVARIANT_ERRORS = (InvariantViolation, HDnotConstant, ParityViolation, MemoLimitExceeded, MemoConflict,
                     TerminationViolation)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False)


def _load(path):
    try:
        return load_loop(path)
    except FileNotFoundError:
        raise _UsageError(f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise _UsageError(f"{path}: not valid JSON ({exc})") from None
    except (LoopError, KeyError, TypeError, ValueError) as exc:
        raise _UsageError(f"{path}: {exc}") from None


class _UsageError(Exception):
    pass


def _terms(poly) -> list[str]:
    out = []
    for exp, c in poly.coeffs().items():
        coeff = str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
        out.append(f"β^{exp} (coeff {coeff})")
    return out or ["0"]


def cmd_compute(args) -> int:
    loop = _load(args.loop)
    res = compute(loop, strategy=args.strategy, parallel=args.parallel)
    if not res.polynomial.is_integral():
        print("warning: non-integer coefficient in the result", file=sys.stderr)
    if args.json:
        report = res.to_json()
        if not args.timing:
            report["stats"].pop("seconds", None)
        print(_dump(report))
        return EXIT_OK
    for line in _terms(res.polynomial):
        print(line)
    s = res.stats
    print(f"# |K_l|={res.canonical_count} strategy={s['strategy']} memo_entries={s['memo_entries']} "
          f"recursion_calls={s['recursion_calls']} backend={s['backend']} seconds={s['seconds']:.4f}")
    return EXIT_OK


def _analysis(loop) -> dict:
    loop = remove_backtracks(loop)
    dec = regions(loop)
    layers = [k for _, k in layer_counts(loop)]
    coll = canonical_collection(loop)
    expected = collection_size(loop)
    return {
        "loop": loop.to_json(),
        "simple": loop.is_simple(),
        "box": [dec.box.x0, dec.box.y0, dec.box.x1, dec.box.y1],
        "regions": [dict(r.to_json(), layers=k) for r, k in zip(dec.interior, layers)],
        "height_grid": dec.heights.grid(),
        "distance_grid": dec.distances.grid(),
        "canonical_collection": [{"K": K.to_json(), "area": K.area} for K in coll],
        "canonical_count": len(coll),
        "canonical_count_expected": expected,
        "cardinality_ok": len(coll) == expected,
    }


def cmd_analyze(args) -> int:
    loop = _load(args.loop)
    rep = _analysis(loop)
    if args.json:
        print(_dump(rep))
        return EXIT_OK if rep["cardinality_ok"] else EXIT_INVARIANT
    print(f"loop: {remove_backtracks(loop)}  simple={rep['simple']}")
    print(f"interior regions: {len(rep['regions'])}")
    for i, r in enumerate(rep["regions"]):
        first = r["plaquettes"][0]
        print(f"  R{i}: area={r['area']} h={r['h']} d={r['d']} (d-|h|)/2={r['layers']} at {tuple(first)}")
    x0, y0, x1, y1 = rep["box"]
    print(f"h grid (rows y={y1}..{y0}, columns x={x0}..{x1}):")
    for row in rep["height_grid"]:
        print("  " + " ".join(f"{v:3d}" for v in row))
    print("d grid:")
    for row in rep["distance_grid"]:
        print("  " + " ".join(f"{v:3d}" for v in row))
    print(f"canonical collection: {rep['canonical_count']} (product formula {rep['canonical_count_expected']})")
    for item in rep["canonical_collection"]:
        parts = ", ".join(f"{e['base'][0]},{e['base'][1]}{e['sign']}x{e['count']}" for e in item["K"])
        print(f"  area={item['area']}: {parts}")
    if not rep["cardinality_ok"]:
        print("cardinality check FAILED", file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


def _report(cases, quiet=False) -> int:
    failed = [c for c in cases if not c.ok]
    for c in cases:
        if not quiet or not c.ok:
            print(c.line())
    print(f"{len(cases) - len(failed)}/{len(cases)} passed")
    return EXIT_OK if not failed else EXIT_VERIFY


def cmd_verify(args) -> int:
    return _report(run_suite(args.suite), args.quiet)


def cmd_spectrum(args) -> int:
    try:
        rows = spectrum_table(args.area, args.beta, args.points, args.tol)
    except closedform.OutOfRegime as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ArithmeticError as exc:
        print(f"error: {exc}; try a looser --tol", file=sys.stderr)
        return EXIT_USAGE
    try:
        mass_s = closedform.spectral_mass(args.area, args.beta, mode="series")
    except ArithmeticError:
        # quadrature probes points next to the boundary singularity
        print("note: series mass unavailable on the convergence boundary", file=sys.stderr)
        mass_s = None
    try:
        mass_c = closedform.spectral_mass(args.area, args.beta, mode="closed")
    except closedform.UnsupportedClosedForm:
        mass_c = None

    def fmt(v):
        return "" if v is None else repr(float(v))

    print("x,f_series,f_closed,abs_diff")
    for x, fs, fc, d in rows:
        print(f"{fmt(x)},{fmt(fs)},{fmt(fc)},{fmt(d)}")
    diff = None if mass_s is None or mass_c is None else abs(mass_s - mass_c)
    print(f"mass,{fmt(mass_s)},{fmt(mass_c)},{fmt(diff)}")
    return EXIT_OK


def _parse_areas(text: str) -> dict:
    out = {}
    for item in filter(None, (t.strip() for t in text.split(","))):
        name, _, val = item.partition("=")
        if not val:
            raise _UsageError(f"bad area assignment {item!r}; expected name=value")
        try:
            out[name.strip()] = int(val)
        except ValueError:
            raise _UsageError(f"area {name.strip()!r} must be an integer, got {val!r}") from None
    return out


def cmd_table1(args) -> int:
    if args.row is not None:
        entry = closedform.table1_entry(args.row)
        areas = _parse_areas(args.areas or "")
        try:
            poly = entry.polynomial(**areas)
        except (TypeError, ValueError) as exc:
            raise _UsageError(str(exc)) from None
        print(_dump({"row": entry.row, "class": entry.slug, "slug": entry.slug, "areas": areas, "k_count": entry.k_count,
                     "polynomial": poly.to_json(), "text": str(poly)}))
        return EXIT_OK
    shipped = {}
    for fx in all_fixtures():
        if fx.kind == "table1":
            shipped.setdefault(fx.row, []).append(fx.name)
    rows = [
        {"row": e.row, "slug": e.slug, "params": list(e.params), "k_count": e.k_count,
         "fixtures": shipped.get(e.row, [])}
        for e in closedform.TABLE1.values()
    ]
    print(_dump(rows))
    return EXIT_OK


def cmd_selfcheck(args) -> int:
    print(f"wilsonloops {__version__}, kernels: {kernels.BACKEND}")
    return _report(selfcheck(), args.quiet)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wilsonloops", description="Exact lattice Wilson loop polynomials.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("compute", help="Wilson polynomial of a loop file")
    p.add_argument("loop", help="loop JSON file (origin + moves, or vertices)")
    p.add_argument("--strategy", choices=STRATEGIES, default=DEFAULT_STRATEGY)
    p.add_argument("--json", action="store_true", help="machine-readable report")
    p.add_argument("--timing", action="store_true", help="include wall time in the JSON stats")
    p.add_argument("--parallel", type=int, default=0, metavar="N",
                   help="evaluate canonical assignments in N worker processes")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("analyze", help="regions, height/distance fields and the canonical collection")
    p.add_argument("loop")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", choices=SUITES + ("all",), default="all")
    p.add_argument("-q", "--quiet", action="store_true", help="print failing cases only")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("spectrum", help="spectral density CSV, series against closed form")
    p.add_argument("--area", type=int, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--points", type=int, default=64)
    p.add_argument("--tol", type=float, default=1e-13)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("table1", help="catalogue of closed forms, or one evaluated row")
    p.add_argument("--row", help="row number or slug")
    p.add_argument("--areas", help="comma-separated name=value pairs")
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("selfcheck", help="quick end-to-end health check")
    p.add_argument("-q", "--quiet", action="store_true")
    p.set_defaults(func=cmd_selfcheck)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except closedform.UnknownClass as exc:
        print(f"error: {exc.args[0] if exc.args else exc}", file=sys.stderr)
        return EXIT_USAGE
    except _INVARIANT_ERRORS as exc:
        print(f"invariant violation: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
