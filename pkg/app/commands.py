"""
CLI subcommand handlers. Each takes the parsed arguments and returns the
process exit code; results go to stdout (or --output), logs to stderr.
"""

import asyncio
import json
import sys
from argparse import Namespace
from fractions import Fraction
from pathlib import Path
from typing import List, Optional

from app.config import get_settings
from app.database.connection import get_db_connection
from app.database.repository import ExperimentRepository
from app.models.experiment_data import ExperimentSpec, TrialRow
from app.models.geometry import Configuration
from app.models.graph import Drawing
from app.models.results import ExactReport
from app.services.catalog_store import CatalogStore
from app.services.catalog import enumerate_grid_order_types
from app.services.crossings import count_crossings, min_k_colored_crossing, min_rectilinear_crossing
from app.services.cut_distance import cut_distance_exact, cut_distance_lower_bound
from app.services.experiment import quasirandom_experiment, rows_to_csv, store_report
from app.services.graph_io import drawing_to_document, load_drawing, parse_graph
from app.services.pipeline import PipelineConfig, run_pipeline
from app.services.regularity import weak_regular_partition
from app.services.sampling import sample_estimate
from app.services.svg_renderer import render_svg
from app.utils.errors import BudgetExceededError, ParameterError
from app.utils.logger import app_logger as logger


def read_text(source: str) -> str:
    """File contents, or stdin for '-'"""
    if source == "-":
        return sys.stdin.read()
    path = Path(source)
    if not path.exists():
        raise ParameterError(f"no such file: {source}")
    return path.read_text()


def write_output(args: Namespace, text: str):
    if not text.endswith("\n"):
        text += "\n"
    if getattr(args, "output", None):
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _fraction(text: Optional[str]) -> Optional[Fraction]:
    if text is None:
        return None
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ParameterError(f"not a rational number: {text!r}")


def _store(args: Namespace) -> CatalogStore:
    return CatalogStore(args.catalog_dir, budget=getattr(args, "budget", None))


def _seed(args: Namespace) -> int:
    return get_settings().DEFAULT_SEED if args.seed is None else args.seed


def _timings(args: Namespace) -> bool:
    return bool(args.timings) or get_settings().REPORT_TIMINGS


def cmd_draw(args: Namespace) -> int:
    g = parse_graph(read_text(args.graph))
    cfg = PipelineConfig(
        epsilon=_fraction(args.epsilon),
        K_max=args.k_max,
        min_parts=args.min_parts,
        colors=args.colors,
        force_singletons=args.singletons,
        seed=_seed(args),
        effort=args.effort,
        store=_store(args),
        timings=_timings(args),
    )
    result = run_pipeline(g, cfg)
    if args.svg:
        Path(args.svg).write_text(render_svg(result.drawing, result.coloring or None))
    write_output(args, result.to_report().model_dump_json(indent=2))
    return 0


def _exact_report(g, result, colors: int) -> str:
    report = ExactReport(
        n=g.n,
        m=g.m,
        value=str(result.value),
        order_types_scanned=result.entries_scanned,
        colors=colors,
        drawing=drawing_to_document(result.drawing, result.coloring if colors > 1 else None),
    )
    return report.model_dump_json(indent=2, exclude_none=True)


def cmd_exact(args: Namespace) -> int:
    g = parse_graph(read_text(args.graph))
    result = min_rectilinear_crossing(g, _store(args).get(g.n))
    write_output(args, _exact_report(g, result, 1))
    return 0


def cmd_kplanar(args: Namespace) -> int:
    g = parse_graph(read_text(args.graph))
    result = min_k_colored_crossing(g, args.colors, _store(args).get(g.n))
    write_output(args, _exact_report(g, result, args.colors))
    return 0


def cmd_count(args: Namespace) -> int:
    if args.drawing:
        drawing, coloring = load_drawing(read_text(args.drawing))
    else:
        if not (args.graph and args.points):
            raise ParameterError("count needs a drawing JSON or both --graph and --points")
        g = parse_graph(read_text(args.graph))
        drawing, coloring = Drawing(g, Configuration.parse(read_text(args.points))), None
    report = count_crossings(drawing, with_pairs=args.pairs, coloring=coloring if args.monochromatic else None)
    payload = {"count": str(report.count)}
    if args.pairs:
        payload["pairs"] = [[list(e), list(f)] for e, f in report.pairs]
    write_output(args, json.dumps(payload, indent=2))
    return 0


def cmd_partition(args: Namespace) -> int:
    g = parse_graph(read_text(args.graph))
    epsilon = _fraction(args.epsilon) or get_settings().pipeline_epsilon
    result = weak_regular_partition(g, epsilon, args.k_max, effort=args.effort, seed=_seed(args))
    if args.format == "text":
        write_output(args, result.partition.to_text())
        if args.certificate:
            Path(args.certificate).write_text(result.certificate.model_dump_json(indent=2))
    else:
        payload = {
            "assignment": list(result.partition.assignment),
            "certificate": json.loads(result.certificate.model_dump_json()),
        }
        write_output(args, json.dumps(payload, indent=2))
    if result.certificate.cap_exceeded:
        logger.warning(f"[Partition] part cap reached at K={result.partition.K}")
        return BudgetExceededError.exit_code
    return 0


def cmd_cutdist(args: Namespace) -> int:
    g = parse_graph(read_text(args.first))
    h = parse_graph(read_text(args.second))
    exact = args.method == "exact" or (args.method == "auto" and g.n <= get_settings().CUT_EXACT_MAX_N)
    if exact:
        witness = cut_distance_exact(g, h)
    else:
        witness = cut_distance_lower_bound(g, h, effort=args.effort, seed=_seed(args))
    payload = {"value": str(witness.value), "S": list(witness.S), "T": list(witness.T), "exact": exact}
    write_output(args, json.dumps(payload, indent=2))
    return 0


def cmd_estimate(args: Namespace) -> int:
    g = parse_graph(read_text(args.graph))
    result = sample_estimate(g, args.t, args.trials, seed=_seed(args), store=_store(args))
    write_output(args, result.to_report().model_dump_json(indent=2))
    return 0


def _sizes(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ParameterError(f"sizes must be comma-separated integers, got {text!r}")


def cmd_experiment(args: Namespace) -> int:
    graph_text = read_text(args.graph) if args.family == "file" and args.graph else None
    spec = ExperimentSpec(
        family=args.family,
        sizes=[parse_graph(graph_text).n] if graph_text else _sizes(args.sizes or ""),
        p=args.p,
        trials=args.trials,
        seed=_seed(args),
        graph_text=graph_text,
    )
    cfg = PipelineConfig(
        epsilon=_fraction(args.epsilon),
        K_max=args.k_max,
        seed=spec.seed,
        store=_store(args),
    )
    report = quasirandom_experiment(spec, cfg, workers=args.workers, timings=_timings(args))
    write_output(args, report.to_csv() if args.format == "csv" else report.to_json())
    if args.store or get_settings().EXPERIMENT_STORE_ENABLED:
        label = args.run_label or f"{spec.family}-seed{spec.seed}"
        asyncio.run(store_report(report, label))
    return 0


def cmd_history(args: Namespace) -> int:
    async def fetch():
        db = get_db_connection()
        try:
            async for session in db.get_session():
                return await ExperimentRepository(session).list_trials(args.run_label, args.limit)
        finally:
            await db.close_db()

    records = asyncio.run(fetch())
    rows = [TrialRow.model_validate(record) for record in records]
    write_output(args, rows_to_csv(rows))
    return 0


def cmd_runs(args: Namespace) -> int:
    async def fetch():
        db = get_db_connection()
        try:
            async for session in db.get_session():
                repository = ExperimentRepository(session)
                return [
                    {"run_label": label, "trials": await repository.count_trials(label)}
                    for label in await repository.list_runs()
                ]
        finally:
            await db.close_db()

    write_output(args, json.dumps(asyncio.run(fetch()), indent=2))
    return 0


def cmd_render(args: Namespace) -> int:
    drawing, coloring = load_drawing(read_text(args.drawing))
    write_output(args, render_svg(drawing, coloring, size=args.size, mark_crossings=not args.no_crossings))
    return 0


def cmd_catalog_build(args: Namespace) -> int:
    store = _store(args)
    if args.grid_side:
        built = enumerate_grid_order_types(args.n, args.grid_side, budget=store.budget, seed=store.seed)
    else:
        built = store.build(args.n)
    catalog = store.merge_into_stored(built)
    if len(catalog) > len(built):
        logger.info(f"[CLI] catalog n={args.n}: {len(built)} built, {len(catalog)} after merging with the stored file")
    write_output(args, json.dumps({"n": catalog.n, "entries": len(catalog), "built": len(built),
                                   "path": str(store.path_for(args.n)), "metadata": built.metadata},
                                  indent=2, default=str))
    return 0


def cmd_catalog_ingest(args: Namespace) -> int:
    path = Path(args.database)
    if not path.exists():
        raise ParameterError(f"no such file: {args.database}")
    catalog = _store(args).ingest(args.n, path.read_bytes())
    write_output(args, json.dumps({"n": catalog.n, "entries": len(catalog),
                                   "metadata": catalog.metadata}, indent=2, default=str))
    return 0


def cmd_catalog_info(args: Namespace) -> int:
    store = _store(args)
    catalog = store.get(args.n)
    write_output(args, json.dumps({"n": catalog.n, "entries": len(catalog), "path": str(store.path_for(args.n)),
                                   "metadata": catalog.metadata}, indent=2, default=str))
    return 0
