"""
Command-line front end.

    torusear spectrum --torus 2,3,5
    torusear spectrum --circulant 20:2,3,4,7 --format table
    torusear spectrum --torus 2,4,4 | torusear hear
    torusear isospectral --torus 2,8 --torus 4,4
    torusear theta --torus 3,3 --at 0.5
    torusear search --n 3..19 --workers 4
    torusear verify-counterexample

Exit status: 0 success or affirmative verdict, 1 negative verdict, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path
from typing import Sequence

import mpmath

from .circulants import MAX_SEARCH_N, CirculantSpec, search_cospectral, verify_counterexample
from .errors import InvalidParameter, NotATorusSpectrum, TorusearError
from .graphs import MultiGraph, laplacian, torus_graph
from .hearing import canonical_shape, hear_torus
from .spectra import Spectrum, char_poly, circulant_spectrum, isospectral, numeric_spectrum, torus_spectrum
from .theta import theta_from_spectrum

DEFAULT_PRECISION = 53
OK, NEGATIVE, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _digits(precision: int) -> int:
    # 53 bits renders the default 12 significant digits
    return max(12, int(precision * math.log10(2)) - 3)


def _parse_torus(text: str) -> tuple[int, ...]:
    try:
        return tuple(canonical_shape(int(x) for x in text.split(",")))
    except ValueError as exc:
        raise UsageError(f"bad torus {text!r}: {exc}") from exc


def _parse_range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    try:
        return (int(lo), int(hi)) if sep else (int(lo), int(lo))
    except ValueError as exc:
        raise UsageError(f"bad range {text!r}, expected A..B") from exc


def _operands(args) -> list[tuple[str, object]]:
    """Graph operands in command-line order: ("torus", shape), ("circulant", spec), ("graph", MultiGraph)."""
    out = []
    for kind, raw in args.operands or []:
        try:
            if kind == "torus":
                out.append((kind, _parse_torus(raw)))
            elif kind == "circulant":
                out.append((kind, CirculantSpec.parse(raw)))
            else:
                out.append((kind, MultiGraph.from_json(Path(raw).read_text())))
        except (InvalidParameter, OSError) as exc:
            raise UsageError(str(exc)) from exc
    return out


def _exact_spectrum(kind: str, obj) -> Spectrum:
    if kind == "torus":
        return torus_spectrum(obj)
    if kind == "circulant":
        return circulant_spectrum(obj.n, obj.jumps)
    raise UsageError("this subcommand needs --torus or --circulant (graph files are numeric only)")


def _graph_of(kind: str, obj) -> MultiGraph:
    if kind == "torus":
        return torus_graph(obj)
    if kind == "circulant":
        return obj.graph()
    return obj


def _numeric_entries(values: Sequence[float], digits: int, tol: float = 1e-9) -> list[dict]:
    entries: list[dict] = []
    anchor = None
    for v in values:
        if anchor is not None and abs(v - anchor) <= tol:
            entries[-1]["mult"] += 1
        else:
            anchor = v
            entries.append({"value_decimal": f"{v:.{min(digits, 15)}g}", "mult": 1})
    return entries


def _table(rows: Sequence[Sequence[str]], header: Sequence[str]) -> str:
    widths = [max(len(str(r[i])) for r in [header, *rows]) for i in range(len(header))]
    fmt = "  ".join(f"{{:<{w}}}" for w in widths)
    lines = [fmt.format(*header), fmt.format(*("-" * w for w in widths))]
    lines.extend(fmt.format(*map(str, r)) for r in rows)
    return "\n".join(lines)


def _emit(args, data, table: str | None = None) -> None:
    if args.format == "table" and table is not None:
        print(table)
    else:
        print(json.dumps(data, indent=2))


# ---------------------------------------------------------------------------
# subcommands

def cmd_spectrum(args) -> int:
    ops = _operands(args)
    if len(ops) != 1:
        raise UsageError("spectrum takes exactly one of --torus, --circulant, --graph")
    kind, obj = ops[0]
    digits = _digits(args.precision)
    if kind == "graph":
        data = {"entries": _numeric_entries(numeric_spectrum(laplacian(obj)), digits), "numeric": True}
        rows = [(e["value_decimal"], e["mult"]) for e in data["entries"]]
        _emit(args, data, _table(rows, ("value", "mult")))
        return OK
    s = _exact_spectrum(kind, obj)
    data = s.to_dict(digits)
    rows = [(e["value_decimal"], e["mult"], e["value_exact"]) for e in data["entries"]]
    _emit(args, data, _table(rows, ("value", "mult", "exact")))
    return OK


def cmd_hear(args) -> int:
    try:
        text = sys.stdin.read() if args.input == "-" else Path(args.input).read_text()
    except OSError as exc:
        raise UsageError(str(exc)) from exc
    try:
        s = Spectrum.from_json(text)
    except InvalidParameter as exc:
        raise UsageError(str(exc)) from exc
    try:
        shape = hear_torus(s)
    except NotATorusSpectrum as exc:
        data = {"error": "not_a_torus_spectrum", "partial": list(exc.partial), "message": str(exc)}
        _emit(args, data, f"not a torus spectrum: {exc} (factors found: {list(exc.partial)})")
        return NEGATIVE
    _emit(args, {"shape": list(shape)}, " x ".join(f"C{m}" for m in shape))
    return OK


def cmd_isospectral(args) -> int:
    ops = _operands(args)
    if len(ops) != 2:
        raise UsageError("isospectral needs exactly two graphs")
    if any(kind == "graph" for kind, _ in ops):
        # a graph file has no closed-form spectrum; compare characteristic polynomials
        mats = [laplacian(_graph_of(kind, obj)) for kind, obj in ops]
        verdict = isospectral(char_poly(mats[0]), char_poly(mats[1]))
    else:
        verdict = isospectral(_exact_spectrum(*ops[0]), _exact_spectrum(*ops[1]))
    _emit(args, verdict, "true" if verdict else "false")
    return OK if verdict else NEGATIVE


def cmd_theta(args) -> int:
    ops = _operands(args)
    if len(ops) != 1:
        raise UsageError("theta takes exactly one of --torus, --circulant")
    theta = theta_from_spectrum(_exact_spectrum(*ops[0]))
    digits = _digits(args.precision)
    data = theta.to_dict(digits)
    rows = [(e["exponent_decimal"], e["mult"], e["exponent_exact"]) for e in data["entries"]]
    table = _table(rows, ("exponent", "mult", "exact"))
    if args.at:
        with mpmath.workprec(args.precision + 16):
            values = [(t, mpmath.nstr(theta(mpmath.mpf(t)), digits)) for t in args.at]
        data["values"] = [{"t": t, "theta": v} for t, v in values]
        table += "\n\n" + _table(values, ("t", "theta(t)"))
    _emit(args, data, table)
    return OK


def cmd_search(args) -> int:
    lo, hi = _parse_range(args.n)
    if not 3 <= lo <= hi <= MAX_SEARCH_N:
        raise UsageError(f"--n must satisfy 3 <= A <= B <= {MAX_SEARCH_N}")
    report = search_cospectral(lo, hi, connected_only=args.connected_only, workers=args.workers)
    _emit(args, report.to_dict(), report.to_table())
    tripwire = [p for p in report.non_isomorphic_pairs if p[0].n < 20]
    return NEGATIVE if tripwire else OK


def cmd_verify_counterexample(args) -> int:
    result = verify_counterexample()
    table = "\n".join([
        f"pair:        {result['pair'][0]}  vs  {result['pair'][1]}",
        f"charpoly:    {result['charpoly']} / {result['charpoly_b']}"
        f" ({'identical' if result['charpoly_equal'] else 'DIFFERENT'})",
        f"isomorphic:  {str(result['isomorphic']).lower()}",
        f"certificate: {json.dumps(result['certificate'])}",
        f"verdict:     {'cospectral, not isomorphic' if result['ok'] else 'FAILED'}",
    ])
    _emit(args, result, table)
    return OK if result["ok"] else NEGATIVE


# ---------------------------------------------------------------------------

class _Operand(argparse.Action):
    """Collect --torus/--circulant/--graph into one ordered list."""

    def __call__(self, parser, namespace, values, option_string=None):
        items = list(getattr(namespace, "operands", None) or [])
        items.append((self.dest, values))
        namespace.operands = items


def _precision_default() -> int:
    raw = os.environ.get("TORUSEAR_PRECISION")
    if raw is None:
        return DEFAULT_PRECISION
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"TORUSEAR_PRECISION must be an integer, got {raw!r}") from None


def build_parser(default_precision: int = DEFAULT_PRECISION) -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "table"), default="json")
    common.add_argument("--precision", type=int, default=default_precision, metavar="BITS",
                        help="working precision in bits (>= 53; env TORUSEAR_PRECISION)")

    graphs = argparse.ArgumentParser(add_help=False)
    graphs.set_defaults(operands=None)
    graphs.add_argument("--torus", action=_Operand, metavar="LIST", help="cycle lengths, e.g. 2,3,5")
    graphs.add_argument("--circulant", action=_Operand, metavar="N:LIST", help="e.g. 20:2,3,4,7")
    graphs.add_argument("--graph", action=_Operand, metavar="PATH", help="graph JSON file")

    parser = argparse.ArgumentParser(prog="torusear", description=__doc__.split("\n\n")[0].strip())
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", parents=[common, graphs], help="Laplacian spectrum")
    p.set_defaults(func=cmd_spectrum)
    p = sub.add_parser("hear", parents=[common], help="recover a torus from spectrum JSON")
    p.add_argument("input", nargs="?", default="-", help="spectrum JSON file (default: stdin)")
    p.set_defaults(func=cmd_hear)
    p = sub.add_parser("isospectral", parents=[common, graphs], help="compare two Laplacian spectra")
    p.set_defaults(func=cmd_isospectral)
    p = sub.add_parser("theta", parents=[common, graphs], help="theta function terms and values")
    p.add_argument("--at", type=float, action="append", metavar="T", help="evaluate at t (repeatable)")
    p.set_defaults(func=cmd_theta)
    p = sub.add_parser("search", parents=[common], help="cospectral circulant sweep")
    p.add_argument("--n", default="3..19", metavar="A..B")
    p.add_argument("--connected-only", action="store_true")
    p.add_argument("--workers", type=int, default=1, metavar="K")
    p.set_defaults(func=cmd_search)
    p = sub.add_parser("verify-counterexample", parents=[common],
                       help="check the order-20 cospectral non-isomorphic circulant pair")
    p.set_defaults(func=cmd_verify_counterexample)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    try:
        parser = build_parser(_precision_default())
    except UsageError as exc:
        print(f"torusear: {exc}", file=sys.stderr)
        return USAGE
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.precision < 53:
        parser.print_usage(sys.stderr)
        print("torusear: --precision must be at least 53", file=sys.stderr)
        return USAGE
    if getattr(args, "workers", 1) < 1:
        print("torusear: --workers must be positive", file=sys.stderr)
        return USAGE
    try:
        return args.func(args)
    except (UsageError, InvalidParameter) as exc:
        parser.print_usage(sys.stderr)
        print(f"torusear: {exc}", file=sys.stderr)
        return USAGE
    except TorusearError as exc:
        print(f"torusear: {exc}", file=sys.stderr)
        return NEGATIVE


if __name__ == "__main__":
    sys.exit(main())
