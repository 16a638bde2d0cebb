"""Command-line interface: analyze files, simulate expressions, reproduce experiments."""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from typing import List, Optional, Sequence

import numpy as np

from . import experiments as ex
from .process import EmptyResult, ParseError, SimulationAborted, parse_expr, simulate
from .report import FORMATS, BenfordReport, build_report, format_report, report_to_dict
from .sampling import InvalidSpec

__all__ = ["NoNumericData", "analyze_file", "read_numbers", "main"]

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_CHECK = 0, 1, 2, 3


class NoNumericData(ValueError):
    pass


class _UsageError(Exception):
    pass


def _unescape(delimiter: Optional[str]) -> Optional[str]:
    if delimiter is None:
        return None
    d = delimiter.encode().decode("unicode_escape")
    if len(d) != 1:
        raise ValueError(f"delimiter must be a single character, got {delimiter!r}")
    return d


def read_numbers(path, column: Optional[int] = None, delimiter: Optional[str] = None):
    """Numbers from a text file, plus the count of tokens that did not parse.

    Lines starting with ``#`` and blank lines are ignored. ``column`` is
    0-based; without it each line must hold a single value. A row that is
    too short for ``column`` counts as one unparsed token.
    """
    delimiter = _unescape(delimiter) or ","
    values: List[float] = []
    unparsed = 0
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if column is None:
                token = line
            else:
                cells = line.split(delimiter)
                if column >= len(cells):
                    unparsed += 1
                    continue
                token = cells[column]
            try:
                values.append(float(token.strip()))
            except ValueError:
                unparsed += 1
    return np.asarray(values, dtype=np.float64), unparsed


def analyze_file(path, column: Optional[int] = None, delimiter: Optional[str] = None,
                 name: Optional[str] = None) -> BenfordReport:
    """First-digit report over the numbers in a text file."""
    if column is not None and column < 0:
        raise ValueError("column must be >= 0")
    t0 = time.perf_counter()
    values, unparsed = read_numbers(path, column, delimiter)
    finite = values[np.isfinite(values) & (values != 0)]
    if finite.size == 0:
        raise NoNumericData(f"{path}: no usable numbers")
    ms = int(round((time.perf_counter() - t0) * 1000))
    return build_report(values, name=name or os.path.basename(str(path)), expression="",
                        runs=values.size, seed=None, elapsed_ms=ms, unparsed=unparsed)


def _emit(text: str, out: Optional[str]) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: error: {message}")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="text")
    common.add_argument("--out", metavar="PATH", help="write here instead of stdout")

    p = _Parser(prog="benfordsim", description="First-digit simulation and analysis.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    a = sub.add_parser("analyze", parents=[common], help="first-digit report for a numeric file")
    a.add_argument("path")
    a.add_argument("--column", type=int, help="0-based column index")
    a.add_argument("--delimiter", help="column separator (default ',')")

    s = sub.add_parser("simulate", parents=[common], help="Monte Carlo run of an expression")
    s.add_argument("--expr", required=True)
    s.add_argument("--runs", type=int, default=35000)
    s.add_argument("--seed", type=int, default=ex.DEFAULT_SEED)
    s.add_argument("--emp", action="append", default=[], metavar="PATH",
                   help="data file for EMP(i); repeat for EMP(0), EMP(1), ...")
    s.add_argument("--jobs", type=int, default=1)

    r = sub.add_parser("reproduce", parents=[common], help="run registered experiments")
    r.add_argument("id", nargs="?")
    r.add_argument("--all", action="store_true")
    r.add_argument("--check", action="store_true", help="exit 3 if a band fails")
    r.add_argument("--seed", type=int)
    r.add_argument("--runs", type=int)
    r.add_argument("--jobs", type=int, default=1)

    sub.add_parser("list", parents=[common], help="list registered experiments")
    return p


def _format_many(reports: Sequence[BenfordReport], fmt: str) -> str:
    if fmt == "json" and len(reports) > 1:
        return json.dumps([report_to_dict(r) for r in reports], indent=2) + "\n"
    return "\n".join(format_report(r, fmt) for r in reports)


def _cmd_list(args) -> int:
    defs = ex.list_experiments()
    if args.format == "json":
        rows = [{"id": d.id, "description": d.description, "default_runs": d.default_runs,
                 "ssd_band": list(d.ssd_band)} for d in defs]
        _emit(json.dumps(rows, indent=2) + "\n", args.out)
    elif args.format == "csv":
        lines = ["id,default_runs,ssd_lo,ssd_hi,description"]
        lines += [f'{d.id},{d.default_runs},{d.ssd_band[0]},{d.ssd_band[1]},"{d.description}"'
                  for d in defs]
        _emit("\n".join(lines) + "\n", args.out)
    else:
        width = max(len(d.id) for d in defs)
        _emit("".join(f"{d.id:<{width}}  {d.default_runs:>6}  {d.description}\n"
                      for d in defs), args.out)
    return EXIT_OK


def _cmd_analyze(args) -> int:
    report = analyze_file(args.path, args.column, args.delimiter)
    _emit(format_report(report, args.format), args.out)
    return EXIT_OK


def _cmd_simulate(args) -> int:
    if args.runs < 1:
        raise _UsageError("--runs must be >= 1")
    datasets = [read_numbers(path)[0] for path in args.emp]
    expr = parse_expr(args.expr, datasets=datasets)
    report = simulate(expr, args.runs, args.seed, n_jobs=max(1, args.jobs))
    _emit(format_report(report, args.format), args.out)
    return EXIT_OK


def _cmd_reproduce(args) -> int:
    if args.all == (args.id is not None):
        raise _UsageError("give exactly one of an experiment id or --all")
    if args.runs is not None and args.runs < 1:
        raise _UsageError("--runs must be >= 1")
    ids = list(ex.REGISTRY) if args.all else [args.id]
    try:
        results = ex.run_many(ids, runs=args.runs, seed=args.seed, jobs=max(1, args.jobs))
    except ex.UnknownExperiment as exc:
        raise _UsageError(str(exc)) from None
    _emit(_format_many([r for r, _ in results], args.format), args.out)
    if not args.check:
        return EXIT_OK
    failed = 0
    for report, fails in results:
        status = "FAIL" if fails else "pass"
        failed += bool(fails)
        sys.stderr.write(f"{status} {report.name}" + (": " + "; ".join(fails) if fails else "")
                         + "\n")
    return EXIT_CHECK if failed else EXIT_OK


_COMMANDS = {"list": _cmd_list, "analyze": _cmd_analyze, "simulate": _cmd_simulate,
             "reproduce": _cmd_reproduce}


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_USAGE
    except (ParseError, InvalidSpec) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except (OSError, NoNumericData, EmptyResult, SimulationAborted, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
