"""
Quasi-Random Experiment Harness

For each size and trial: build the graph, run the pipeline for an upper
bound on its crossing number, and divide by p^2 times the pipeline's own
bound for the complete graph of the same size. Trials are independent;
their seeds depend only on (seed, n, trial), so any worker schedule gives
the same report.
"""

import csv
import io
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional

import numpy as np

from app.config import get_settings
from app.database.connection import DatabaseConnection
from app.database.repository import ExperimentRepository
from app.models.experiment_data import ExperimentSpec, TrialRow
from app.models.graph import Graph
from app.services.crossings import convex_quadruple_count, crossing_lemma_bound
from app.services.generators import complete_graph, gnp_graph, paley_graph
from app.services.graph_io import parse_graph
from app.services.pipeline import PipelineConfig, run_pipeline
from app.utils.errors import ParameterError, ToolkitError
from app.utils.logger import app_logger as logger

CSV_COLUMNS = [
    "family", "n", "p", "trial", "upper_bound", "normalizer", "ratio", "seconds",
    "convex_quadruples", "crossing_lemma_bound", "error",
]


def trial_seed(seed: int, n: int, trial: int) -> int:
    return int(np.random.SeedSequence([seed, n, trial]).generate_state(1)[0])


def family_density(spec: ExperimentSpec) -> Fraction:
    if spec.family == "gnp":
        return Fraction(spec.p)
    if spec.family == "paley":
        return Fraction(1, 2)
    return Fraction(1)


def build_graph(spec: ExperimentSpec, n: int, trial: int) -> Graph:
    if spec.family == "gnp":
        return gnp_graph(n, Fraction(spec.p), trial_seed(spec.seed, n, trial))
    if spec.family == "paley":
        return paley_graph(n)
    if spec.family == "complete":
        return complete_graph(n)
    g = parse_graph(spec.graph_text or "")
    if g.is_weighted:
        raise ParameterError("experiments need an unweighted graph")
    return g


def validate_spec(spec: ExperimentSpec):
    """Reject the whole batch up front for parameters no trial can satisfy"""
    if not spec.sizes:
        raise ParameterError("no sizes given")
    if spec.family == "gnp":
        p = Fraction(spec.p)
        if not 0 < p < 1:
            raise ParameterError(f"gnp density must lie in (0, 1), got {p}")
    if spec.family == "paley":
        for q in spec.sizes:
            paley_graph(q)
    if spec.family == "file":
        if not spec.graph_text:
            raise ParameterError("the file family needs a graph")
        parse_graph(spec.graph_text)
    if any(n < 3 for n in spec.sizes):
        raise ParameterError("pipeline sizes must be >= 3")


def rows_to_csv(rows: List[TrialRow]) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        values = row.model_dump(include=set(CSV_COLUMNS))
        writer.writerow({k: "" if v is None else v for k, v in values.items()})
    return buffer.getvalue()


@dataclass
class ExperimentReport:
    spec: ExperimentSpec
    rows: List[TrialRow] = field(default_factory=list)

    def to_csv(self) -> str:
        return rows_to_csv(self.rows)

    def to_json(self) -> str:
        return json.dumps([row.model_dump() for row in self.rows], indent=2)

    @property
    def failures(self) -> List[TrialRow]:
        return [row for row in self.rows if row.error]


def _run_trial(spec: ExperimentSpec, n: int, trial: int, cfg: PipelineConfig,
               normalizer: Optional[Fraction], timings: bool) -> TrialRow:
    p = family_density(spec)
    row = TrialRow(family=spec.family, n=n, p=str(p), trial=trial, seed=trial_seed(spec.seed, n, trial))
    started = time.perf_counter()
    try:
        g = build_graph(spec, n, trial)
        row.n = g.n
        result = run_pipeline(g, cfg)
        row.upper_bound = result.crossing_count
        row.convex_quadruples = convex_quadruple_count(result.drawing.placement)
        row.crossing_lemma_bound = str(crossing_lemma_bound(g.n, g.m))
        if normalizer is not None:
            row.normalizer = str(normalizer)
            if normalizer:
                row.ratio = str(Fraction(result.crossing_count) / normalizer)
    except ToolkitError as e:
        logger.error(f"[Experiment] {spec.family} n={n} trial {trial} failed: {e.detail}")
        row.error = e.detail
    if timings:
        row.seconds = round(time.perf_counter() - started, 6)
    return row


def _normalizer(spec: ExperimentSpec, n: int, cfg: PipelineConfig) -> Optional[Fraction]:
    """p^2 times the pipeline's crossing count for K_n"""
    if spec.family == "file":
        return None
    try:
        bound = run_pipeline(complete_graph(n), cfg).crossing_count
    except ToolkitError as e:
        logger.error(f"[Experiment] normalizer for n={n} failed: {e.detail}")
        return None
    return family_density(spec) ** 2 * bound


def quasirandom_experiment(
    spec: ExperimentSpec,
    cfg: Optional[PipelineConfig] = None,
    workers: Optional[int] = None,
    timings: Optional[bool] = None,
) -> ExperimentReport:
    settings = get_settings()
    validate_spec(spec)
    cfg = cfg or PipelineConfig(seed=spec.seed)
    workers = settings.EXPERIMENT_WORKERS if workers is None else workers
    timings = settings.REPORT_TIMINGS if timings is None else timings

    normalizers: Dict[int, Optional[Fraction]] = {n: _normalizer(spec, n, cfg) for n in spec.sizes}
    tasks = [(n, trial) for n in spec.sizes for trial in range(spec.trials)]
    logger.info(f"[Experiment] {spec.family}: {len(tasks)} trials on {max(workers, 1)} worker(s)")

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_run_trial, spec, n, trial, cfg, normalizers[n], timings)
                for n, trial in tasks
            ]
            rows = [future.result() for future in futures]
    else:
        rows = [_run_trial(spec, n, trial, cfg, normalizers[n], timings) for n, trial in tasks]

    report = ExperimentReport(spec, rows)
    if report.failures:
        logger.warning(f"[Experiment] {len(report.failures)} of {len(rows)} trials failed")
    return report


async def store_report(report: ExperimentReport, run_label: str, url: Optional[str] = None) -> int:
    """Insert the report rows into the experiment store; returns the row count"""
    db = DatabaseConnection(url)
    try:
        async for session in db.get_session():
            await ExperimentRepository(session).insert_trials_batch(run_label, report.rows)
    finally:
        await db.close_db()
    logger.info(f"[Experiment] stored {len(report.rows)} trials as run '{run_label}'")
    return len(report.rows)
