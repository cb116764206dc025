"""Command line front end: ``orbistar {check,table,ages,compare} CORPUS``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from . import __version__
from .errors import OrbistarError
from .hkr import CompareReport, compare, load_resolution, load_skeleton
from .orbdata import OrbifoldDatum, load
from .rationals import format_rational
from .stringy import Theory, ages, parse_theory, product_table
from .verify import SUITES, run_suite

LOGGER = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s %(message)s"

THEORY_CHOICES = {"chow": (Theory.CHOW,), "k": (Theory.KTHEORY,), "both": (Theory.CHOW, Theory.KTHEORY)}


def _configure_logging(args):
    level = logging.WARNING
    if args.verbose:
        level = logging.DEBUG
    elif args.quiet:
        level = logging.ERROR
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr)


def _aligned(rows: Sequence[Sequence[str]]) -> List[str]:
    if not rows:
        return []
    widths = [max(len(row[k]) for row in rows) for k in range(len(rows[0]))]
    lines = []
    for row in rows:
        cells = [cell.ljust(width) for cell, width in zip(row, widths)]
        lines.append("  ".join(cells).rstrip())
    return lines


def _emit(args, payload: Dict, lines: Sequence[str]):
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False))
    else:
        for line in lines:
            print(line)


def _read_json(path: str):
    try:
        with Path(path).open(encoding="utf-8") as handle:
            return json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise OrbistarError(f"cannot read {path}: {exc}") from None


# ---------------------------------------------------------------------------
# commands


def cmd_check(args) -> int:
    datum = load(args.corpus)
    reports = run_suite(datum, args.suite, THEORY_CHOICES[args.theory])
    bad = [r for r in reports if not r.passed]
    payload = {
        "corpus": datum.name,
        "suite": args.suite,
        "checks": len(reports),
        "failures": [r.to_dict() for r in bad],
        "passed": not bad,
    }
    lines = [f"{datum.name}: {len(reports)} checks, {len(bad)} failed"]
    shown = reports if args.all_reports else bad
    lines.extend(r.summary() for r in shown)
    _emit(args, payload, lines)
    return 0 if not bad else 1


def _format_row(table, row: Dict[int, object], rank: Dict[int, int]) -> str:
    if not row:
        return "0"
    terms = sorted(row.items(), key=lambda item: rank[item[0]])
    return " + ".join(f"{format_rational(c)}*{table.labels[k]}" for k, c in terms)


def cmd_table(args) -> int:
    datum = load(args.corpus)
    table = product_table(datum, parse_theory(args.theory), invariant=args.invariant_only)
    order = table.sector_order()
    rank = {n: r for r, n in enumerate(order)}
    basis_rows = [
        (str(n), table.labels[n], str(table.degrees[n]) if table.degrees[n] is not None else "mixed")
        for n in order
    ]
    products = [(i, j, table.product(i, j)) for i in order for j in order if table.product(i, j)]
    product_rows = [
        (table.labels[i], "*", table.labels[j], "=", _format_row(table, row, rank)) for i, j, row in products
    ]
    payload = {
        "corpus": datum.name,
        "theory": table.theory.value,
        "invariant": args.invariant_only,
        "basis": [{"label": label, "degree": degree} for _, label, degree in basis_rows],
        "products": [
            {"left": table.labels[i], "right": table.labels[j],
             "result": {table.labels[k]: format_rational(c) for k, c in sorted(row.items())}}
            for i, j, row in products
        ],
    }
    lines = [f"{datum.name} ({table.theory.value}): {len(table)} basis elements"]
    lines.extend(_aligned(basis_rows))
    lines.append("")
    lines.extend(_aligned(product_rows))
    _emit(args, payload, lines)
    return 0


def cmd_ages(args) -> int:
    datum = load(args.corpus)
    rows = [(g, locus, format_rational(a)) for g, locus, a in ages(datum)]
    payload = {"corpus": datum.name, "ages": [{"element": g, "locus": locus, "age": a} for g, locus, a in rows]}
    _emit(args, payload, _aligned(rows))
    return 0


def _compare_lines(report: CompareReport) -> List[str]:
    lines = ["degree  orbifold  resolution"]
    lines.extend(_aligned([(d, str(a), str(b)) for d, a, b in report.dims.rows]))
    solution = report.solution
    if solution is not None:
        for label, value in sorted(solution.squares.items()):
            lines.append(f"s[{label}]^2 = {format_rational(value)}")
        for (a, b), value in sorted(solution.pair_products.items()):
            lines.append(f"s[{a}]*s[{b}] = {format_rational(value)}")
        if solution.free:
            lines.append("undetermined: " + ", ".join(solution.free))
        if solution.witness is not None:
            lines.append(f"witness: {solution.witness}")
    if report.iso is not None and not report.iso.passed:
        lines.append(f"witness: {report.iso.detail}")
    lines.append(f"verdict: {report.verdict}")
    return lines


def _compare_payload(datum: OrbifoldDatum, report: CompareReport) -> Dict:
    payload = {
        "corpus": datum.name,
        "dims": [{"degree": d, "orbifold": a, "resolution": b} for d, a, b in report.dims.rows],
        "verdict": report.verdict,
        "passed": report.passed,
    }
    if report.solution is not None:
        payload["status"] = report.solution.status
        payload["squares"] = {k: format_rational(v) for k, v in sorted(report.solution.squares.items())}
        payload["undetermined"] = list(report.solution.free)
    return payload


def cmd_compare(args) -> int:
    datum = load(args.corpus)
    if args.resolution:
        resolution = load_resolution(_read_json(args.resolution))
    elif datum.resolution is not None:
        resolution = load_resolution(datum.resolution)
    else:
        raise OrbistarError(f"{datum.name} carries no resolution; pass --resolution")
    skeleton_spec = _read_json(args.map) if args.map else datum.iso_skeleton
    skeleton = load_skeleton(skeleton_spec) if skeleton_spec is not None else None
    theory = args.theory or (skeleton.theory if skeleton is not None else Theory.CHOW)
    table = product_table(datum, parse_theory(theory), invariant=True)
    report = compare(table, resolution, skeleton)
    _emit(args, _compare_payload(datum, report), _compare_lines(report))
    return 0 if report.passed else 1


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", help="log at DEBUG level")
    common.add_argument("-q", "--quiet", action="store_true", help="log errors only")
    common.add_argument("--json", action="store_true", help="machine-readable output")

    parser = argparse.ArgumentParser(prog="orbistar", description="Exact stringy products of global quotients.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", parents=[common], help="run check suites on a corpus document")
    check.add_argument("corpus")
    check.add_argument("--theory", choices=sorted(THEORY_CHOICES), default="both")
    check.add_argument("--suite", choices=("all",) + SUITES, default="all")
    check.add_argument("--all-reports", action="store_true", help="print passing checks too")
    check.set_defaults(func=cmd_check)

    table = sub.add_parser("table", parents=[common], help="print the structure constants")
    table.add_argument("corpus")
    table.add_argument("--theory", choices=("chow", "k"), default="chow")
    table.add_argument("--invariant-only", action="store_true", help="restrict to the G-invariant ring")
    table.set_defaults(func=cmd_table)

    ages_ = sub.add_parser("ages", parents=[common], help="list the age of every sector component")
    ages_.add_argument("corpus")
    ages_.set_defaults(func=cmd_ages)

    compare_ = sub.add_parser("compare", parents=[common], help="compare with a resolution")
    compare_.add_argument("corpus")
    compare_.add_argument("--resolution", help="resolution document (default: the corpus 'resolution' block)")
    compare_.add_argument("--map", help="iso skeleton document (default: the corpus 'iso_skeleton' block)")
    compare_.add_argument("--theory", choices=("chow", "k"), default=None)
    compare_.set_defaults(func=cmd_compare)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    _configure_logging(args)
    try:
        return args.func(args)
    except OrbistarError as exc:
        LOGGER.debug("command failed", exc_info=True)
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
