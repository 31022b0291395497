"""Command line: factorize, check and scan."""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

import pydantic

from src.certificates import check_report
from src.cli.logging_setup import configure_logging
from src.cli.schemas import FactorizationReport
from src.config import get_settings
from src.errors import FactorizationError
from src.service import FactorizationService, resolve_settings
from src.utils import emit_svg, load_problem

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 2


def build_parser() -> argparse.ArgumentParser:
    defaults = get_settings()
    parser = argparse.ArgumentParser(
        prog="toric-factorize",
        description="Factor a projective birational toric morphism into weighted blowups and blowdowns.",
    )
    parser.add_argument("--log-level", default=defaults.log_level)
    sub = parser.add_subparsers(dest="command", required=True)

    bounds = argparse.ArgumentParser(add_help=False)
    bounds.add_argument("--dmax", dest="d_max", type=int, help=f"section table degree bound (default {defaults.d_max})")
    bounds.add_argument("--scaling-max", dest="scaling_max", type=int, help=f"default {defaults.scaling_max}")
    bounds.add_argument("--m-max", dest="m_max", type=int, help=f"default {defaults.m_max}")
    bounds.add_argument("--c-max", dest="c_max", type=int, help=f"default {defaults.c_max}")
    bounds.add_argument("--samples", type=int, help=f"samples per chamber interval (default {defaults.samples})")
    bounds.add_argument("--n-max", dest="n_max", type=int, help=f"default {defaults.n_max}")
    bounds.add_argument("--tie-break", dest="tie_break", choices=["centroid-lex", "centroid-revlex"])

    factorize = sub.add_parser("factorize", parents=[bounds], help="run the full pipeline")
    factorize.add_argument("input", type=Path)
    factorize.add_argument("--out", type=Path, help="report file (stdout when omitted)")
    factorize.add_argument("--svg", type=Path, help="directory for SVG drawings (rank 2 only)")
    factorize.add_argument("--allow-trivial", action="store_true", help="accept X = Y with zero steps")

    check = sub.add_parser("check", help="re-validate a report")
    check.add_argument("report", type=Path)

    scan = sub.add_parser("scan", parents=[bounds], help="chamber scan on a rational grid")
    scan.add_argument("input", type=Path)
    scan.add_argument("--grid", type=int, help=f"grid size (default {defaults.grid})")
    return parser


def _flags(args: argparse.Namespace) -> dict:
    keys = ("d_max", "scaling_max", "m_max", "c_max", "samples", "n_max", "tie_break", "grid")
    return {key: getattr(args, key, None) for key in keys}


def _write(text: str, out: Optional[Path]):
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text, encoding="utf-8")


def _factorize(args: argparse.Namespace) -> int:
    problem = load_problem(args.input)
    service = FactorizationService(resolve_settings(problem, **_flags(args)))
    report = service.run_factorize(problem, allow_trivial=args.allow_trivial)
    _write(report.model_dump_json(indent=2) + "\n", args.out)
    if args.svg is not None:
        emit_svg(report, args.svg)
    logger.debug("stage metrics: %s", service.metrics.get_metrics_summary())
    print(f"factorized: {len(report.steps())} step(s), {len(report.walls)} wall(s)", file=sys.stderr)
    return EXIT_OK


def _check(args: argparse.Namespace) -> int:
    report = FactorizationReport.model_validate_json(args.report.read_text(encoding="utf-8"))
    result = check_report(report)
    print(f"check passed: {len(result.claims)} claims", file=sys.stderr)
    return EXIT_OK


def _scan(args: argparse.Namespace) -> int:
    problem = load_problem(args.input)
    settings = resolve_settings(problem, **_flags(args))
    report = FactorizationService(settings).run_scan(problem, settings.grid)
    _write(report.model_dump_json(indent=2) + "\n", None)
    return EXIT_OK


COMMANDS = {"factorize": _factorize, "check": _check, "scan": _scan}


def main(argv: Optional[List[str]] = None) -> int:
    """
    Run one subcommand and map failures to exit codes.

    Returns:
        0 success, 2 validation, 3 search exhausted, 4 certificate
        mismatch, 1 any other failure
    """
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)
    try:
        return COMMANDS[args.command](args)
    except pydantic.ValidationError as exc:
        logger.error("invalid document: %s", exc)
        return EXIT_VALIDATION
    except FactorizationError as exc:
        logger.error("%s: %s", type(exc).__name__, exc)
        return exc.exit_code
    except OSError as exc:
        logger.error("i/o failure: %s", exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
