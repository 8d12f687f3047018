"""
Command line entry point.

Exit codes: 0 when every requested suite passes, 1 when a suite fails,
2 for configuration, function spec or argument errors.
"""

import argparse
import asyncio
import csv
import json
import logging
import os
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, TextIO

from pydantic import ValidationError

from .config import DensitySpec, load_config, suite_configs
from .function_spec import FunctionSpec, build_function
from .functions import GridFunction, MaxAffineFunction
from .report import PropertyReport, report_schema, write_report
from .runner import run_suite, run_suite_async
from .steiner import SteinerExpansion, steiner_expand
from .suites import get_suite
from .transform import conjugate_grid, conjugate_max_affine
from .valuation_error import ArgumentError, ValuationError

logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

_GREEN = "\033[32m"
_RED = "\033[31m"
_RESET = "\033[0m"


def _use_color(stream: TextIO) -> bool:
    return "NO_COLOR" not in os.environ and stream.isatty()


def _status(passed: bool, color: bool) -> str:
    word = "pass" if passed else "FAIL"
    if not color:
        return word
    return f"{_GREEN if passed else _RED}{word}{_RESET}"


def summary_table(reports: Sequence[PropertyReport], *, color: bool = False) -> str:
    """One row per suite run: name, resolution, cases, max residual, tolerance, status."""
    width = max([len("suite")] + [len(r.suite) for r in reports])
    lines = [
        f"{'suite':<{width}}  {'resolution':>10}  {'cases':>6}  {'max residual':>12}  "
        f"{'tolerance':>10}  status"
    ]
    for r in reports:
        resolution = "-" if r.resolution is None else str(r.resolution)
        lines.append(
            f"{r.suite:<{width}}  {resolution:>10}  {r.case_count:>6}  {r.max_residual:>12.3g}  "
            f"{r.tolerance:>10.3g}  {_status(r.passed, color)}"
        )
    return "\n".join(lines)


def _read_document(value: str) -> Any:
    """A JSON document given inline or as a path to a file."""
    text = value
    try:
        candidate = Path(value)
        if candidate.is_file():
            text = candidate.read_text(encoding="utf-8")
    except OSError:
        # inline documents can exceed the file name length limit
        pass
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ArgumentError("not a JSON document or file", detail={"value": value}) from exc


def _write_json(payload: Any, out: Optional[Path]) -> None:
    text = json.dumps(payload, indent=2)
    if out is None:
        print(text)
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text + "\n", encoding="utf-8")
    logger.info("wrote %s", out)


def cmd_verify(args: argparse.Namespace) -> int:
    loaded = load_config(args.config)
    only: Optional[List[str]] = args.only
    for name in only or []:
        get_suite(name)
    configs = suite_configs(loaded.config, loaded.operators, only=only, seed=args.seed)
    fmt = loaded.config.output.format
    out_dir = Path(args.out) if args.out else Path(loaded.config.output.path)

    reports = []
    for config in configs:
        if args.concurrent:
            report = asyncio.run(run_suite_async(config.name, config))
        else:
            report = run_suite(config.name, config)
        write_report(report, out_dir / f"{config.label}.{fmt}", fmt=fmt)
        reports.append(report)

    print(summary_table(reports, color=_use_color(sys.stdout)))
    return EXIT_PASS if all(r.passed for r in reports) else EXIT_FAILURE


def _print_expansion(expansion: SteinerExpansion) -> None:
    print(
        f"dim {expansion.dim}, condition {expansion.condition_number:.3g}, "
        f"fit residual {expansion.fit_residual:.3g}"
    )
    for part in expansion.attributed:
        z = "-" if part.z_part is None else f"z_{part.z_part[0] + 1}={part.z_part[1].tolist()}"
        t = "-" if part.t_part is None else f"t_{part.t_part[0]}={part.t_part[1].tolist()}"
        print(
            f"r^{part.power}: {part.coefficient.tolist()}  {z}  {t}  "
            f"cross-check {part.cross_check:.3g}"
        )


def _write_samples(expansion: SteinerExpansion, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(
            ["r", *(f"m_{i + 1}" for i in range(expansion.dim)), "error_estimate"]
        )
        writer.writerows(expansion.sample_rows())
    logger.info("wrote %d samples to %s", len(expansion.r_values), path)


def cmd_steiner(args: argparse.Namespace) -> int:
    spec = FunctionSpec.model_validate(_read_document(args.fn))
    v = build_function(spec.model_copy(update={"representation": "grid"}))
    assert isinstance(v, GridFunction)
    density_doc: Dict[str, Any] = (
        {"kind": "alpha", "family": "hat"} if args.density is None else _read_document(args.density)
    )
    alpha = DensitySpec.model_validate(density_doc).build()
    expansion = steiner_expand(v, alpha, args.r_values, smooth=args.smooth)
    if args.json:
        print(json.dumps(expansion.as_dict(), indent=2))
    else:
        _print_expansion(expansion)
    if args.csv:
        _write_samples(expansion, Path(args.csv))
    return EXIT_PASS


def cmd_conjugate(args: argparse.Namespace) -> int:
    spec = FunctionSpec.model_validate(_read_document(args.fn))
    v = build_function(spec)
    if isinstance(v, MaxAffineFunction):
        payload = conjugate_max_affine(v).as_dict()
    else:
        dual = conjugate_grid(v)
        payload = {
            "dim": dual.dim,
            "lower": dual.lower.tolist(),
            "upper": dual.upper.tolist(),
            "resolution": list(dual.resolution),
            "values": dual.values.tolist(),
        }
    _write_json(payload, Path(args.out) if args.out else None)
    return EXIT_PASS


def cmd_schema(args: argparse.Namespace) -> int:
    _write_json(report_schema(), Path(args.out) if args.out else None)
    return EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="functional-valuations",
        description="Valuations on convex functions: property suites, expansions and conjugates.",
    )
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v info, -vv debug")
    commands = parser.add_subparsers(dest="command", required=True)

    verify = commands.add_parser("verify", help="run property suites and write reports")
    verify.add_argument(
        "--config", type=Path, help="run configuration (bundled default if omitted)"
    )
    verify.add_argument("--only", action="append", help="suite to run; repeatable")
    verify.add_argument("--seed", type=int, help="override the configured seed")
    verify.add_argument("--out", help="report directory")
    verify.add_argument(
        "--concurrent", action="store_true", help="check cases concurrently in a thread pool"
    )
    verify.set_defaults(handler=cmd_verify)

    steiner = commands.add_parser("steiner", help="fit the polynomial expansion of m*(v + r q)")
    steiner.add_argument("--fn", required=True, help="function spec: JSON text or file")
    steiner.add_argument("--density", help="kind alpha density spec: JSON text or file")
    steiner.add_argument("--r-values", type=float, nargs="+", help="sample radii")
    steiner.add_argument("--csv", help="write the samples as CSV")
    steiner.add_argument("--smooth", action="store_true", help="mollify before differencing")
    steiner.add_argument("--json", action="store_true", help="print the expansion as JSON")
    steiner.set_defaults(handler=cmd_steiner)

    conjugate = commands.add_parser("conjugate", help="emit the conjugate of a function spec")
    conjugate.add_argument("--fn", required=True, help="function spec: JSON text or file")
    conjugate.add_argument("--out", help="output path (stdout if omitted)")
    conjugate.set_defaults(handler=cmd_conjugate)

    schema = commands.add_parser("schema", help="print the property report JSON schema")
    schema.add_argument("--out", help="output path (stdout if omitted)")
    schema.set_defaults(handler=cmd_schema)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = (logging.WARNING, logging.INFO, logging.DEBUG)[min(args.verbose, 2)]
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        code: int = args.handler(args)
    except ValidationError as exc:
        print(f"error: invalid document\n{exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValuationError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return code


if __name__ == "__main__":
    raise SystemExit(main())
