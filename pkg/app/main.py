"""
Command-line entry point.

    python -m app <command> [options]

Exit codes: 0 success, 2 parse/parameter error, 3 degeneracy,
4 budget or cap exceeded, 1 anything unexpected.
"""

import argparse
import sys
from typing import List, Optional

from pydantic import ValidationError

from app import commands
from app.utils.errors import ParameterError, ToolkitError
from app.utils.logger import app_logger as logger
from app.utils.logger import setup_logger


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("-o", "--output", help="write the result here instead of stdout")


def _add_pipeline_options(parser: argparse.ArgumentParser):
    parser.add_argument("--epsilon", help="regularity epsilon as p/q (default PIPELINE_EPSILON)")
    parser.add_argument("--k-max", type=int, dest="k_max", help="part cap (default PIPELINE_K_MAX)")
    parser.add_argument("--effort", type=int, help="violating-pair search restarts")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crossdraw",
        description="Near-optimal straight-line drawings of dense graphs and exact crossing numbers of small ones.",
    )
    parser.add_argument("--log-level", help="override LOG_LEVEL")
    parser.add_argument("--catalog-dir", dest="catalog_dir", help="override CATALOG_DIR")
    parser.add_argument("--seed", type=int, help="override DEFAULT_SEED")
    parser.add_argument("--timings", action="store_true", help="include wall-clock timings in reports")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("draw", help="run the drawing pipeline on a graph")
    p.add_argument("graph", help="graph text file or '-'")
    _add_pipeline_options(p)
    p.add_argument("--min-parts", type=int, dest="min_parts", help="refine to at least this many parts")
    p.add_argument("--colors", type=int, default=1, help="k-colored variant when > 1")
    p.add_argument("--singletons", action="store_true", help="one part per vertex (n <= 10)")
    p.add_argument("--svg", help="also write an SVG rendering here")
    _add_common(p)
    p.set_defaults(handler=commands.cmd_draw)

    p = sub.add_parser("exact", help="exact rectilinear crossing number over the catalog")
    p.add_argument("graph")
    _add_common(p)
    p.set_defaults(handler=commands.cmd_exact)

    p = sub.add_parser("kplanar", help="exact k-colored (k-planar) crossing number")
    p.add_argument("graph")
    p.add_argument("--colors", type=int, required=True)
    _add_common(p)
    p.set_defaults(handler=commands.cmd_kplanar)

    p = sub.add_parser("count", help="count crossings of a drawing")
    p.add_argument("drawing", nargs="?", help="drawing JSON (or a pipeline report)")
    p.add_argument("--graph", help="graph text, with --points")
    p.add_argument("--points", help="one point per line, with --graph")
    p.add_argument("--pairs", action="store_true", help="list crossing edge pairs")
    p.add_argument("--monochromatic", action="store_true", help="count only equally colored pairs")
    _add_common(p)
    p.set_defaults(handler=commands.cmd_count)

    p = sub.add_parser("partition", help="weak regular partition with certificate")
    p.add_argument("graph")
    _add_pipeline_options(p)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--certificate", help="certificate JSON path (text format)")
    _add_common(p)
    p.set_defaults(handler=commands.cmd_partition)

    p = sub.add_parser("cutdist", help="cut distance of two graphs on the same vertices")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--method", choices=("auto", "exact", "search"), default="auto")
    p.add_argument("--effort", type=int)
    _add_common(p)
    p.set_defaults(handler=commands.cmd_cutdist)

    p = sub.add_parser("estimate", help="sampling estimate of the crossing number")
    p.add_argument("graph")
    p.add_argument("--t", type=int, required=True, help="sample size (4..8)")
    p.add_argument("--trials", type=int, default=10)
    _add_common(p)
    p.set_defaults(handler=commands.cmd_estimate)

    p = sub.add_parser("experiment", help="quasi-random graph trend experiment")
    p.add_argument("--family", choices=("gnp", "paley", "complete", "file"), required=True)
    p.add_argument("--sizes", help="comma-separated n (q for paley)")
    p.add_argument("--p", default="1/2", help="gnp density as p/q")
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--graph", help="graph file for the file family")
    p.add_argument("--workers", type=int, help="override EXPERIMENT_WORKERS")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--store", action="store_true", help="store trials in DATABASE_URL")
    p.add_argument("--run-label", dest="run_label")
    p.add_argument("--epsilon")
    p.add_argument("--k-max", type=int, dest="k_max")
    _add_common(p)
    p.set_defaults(handler=commands.cmd_experiment)

    p = sub.add_parser("history", help="list stored experiment trials")
    p.add_argument("--run-label", dest="run_label")
    p.add_argument("--limit", type=int, default=200)
    _add_common(p)
    p.set_defaults(handler=commands.cmd_history)

    p = sub.add_parser("runs", help="list stored experiment runs with their trial counts")
    _add_common(p)
    p.set_defaults(handler=commands.cmd_runs)

    p = sub.add_parser("render", help="render a drawing JSON as SVG")
    p.add_argument("drawing")
    p.add_argument("--size", type=int, default=640)
    p.add_argument("--no-crossings", action="store_true", dest="no_crossings")
    _add_common(p)
    p.set_defaults(handler=commands.cmd_render)

    catalog = sub.add_parser("catalog", help="order-type catalogs")
    catalog_sub = catalog.add_subparsers(dest="catalog_command", required=True)

    p = catalog_sub.add_parser("build", help="build and save the catalog for n points")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--grid-side", type=int, dest="grid_side", help="enumerate this grid only")
    p.add_argument("--budget", type=int, help="override ENUM_BUDGET")
    _add_common(p)
    p.set_defaults(handler=commands.cmd_catalog_build)

    p = catalog_sub.add_parser("ingest", help="merge a raw point-set database into the catalog")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("database")
    _add_common(p)
    p.set_defaults(handler=commands.cmd_catalog_ingest)

    p = catalog_sub.add_parser("info", help="describe (building if needed) the catalog for n points")
    p.add_argument("--n", type=int, required=True)
    _add_common(p)
    p.set_defaults(handler=commands.cmd_catalog_info)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    if args.log_level:
        setup_logger(args.log_level)

    try:
        return args.handler(args)
    except ToolkitError as e:
        logger.error(f"[CLI] {args.command}: {e.detail}")
        return e.exit_code
    except ValidationError as e:
        logger.error(f"[CLI] {args.command}: invalid parameters: {e}")
        return ParameterError.exit_code
    except Exception as e:
        logger.exception(f"[CLI] {args.command} failed unexpectedly: {e}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
