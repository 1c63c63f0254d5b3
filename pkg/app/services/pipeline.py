"""
Drawing Pipeline

End-to-end construction of a straight-line drawing of a dense graph:
  1. weak regular partition of the vertices
  2. exact minimum crossing drawing of the reduced graph over the catalog
  3. every part placed on a tiny circular arc around its small-drawing point
  4. crossing count and the envelope check against the small optimum
"""

import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, isqrt
from typing import Dict, List, Optional, Tuple

from app.config import get_settings
from app.models.geometry import Configuration, ExactPoint
from app.models.graph import Drawing, Edge, EquitablePartition, Graph, ReducedGraph
from app.models.results import PipelineDiagnostics, PipelineReport, RegularityCertificate
from app.services.catalog import MAX_N
from app.services.catalog_store import CatalogStore
from app.services.crossings import (
    count_crossings,
    crossing_lemma_bound,
    min_k_colored_crossing,
    min_rectilinear_crossing,
)
from app.services.geom import find_collinear_triple, min_point_line_distance, orient_coords
from app.services.regularity import equitable_split, reduced_graph, weak_regular_partition
from app.utils.errors import DegeneracyError, ParameterError, SizeError
from app.utils.logger import app_logger as logger


@dataclass
class PipelineConfig:
    epsilon: Optional[Fraction] = None
    K_max: Optional[int] = None
    min_parts: Optional[int] = None
    colors: int = 1
    force_singletons: bool = False
    seed: Optional[int] = None
    effort: Optional[int] = None
    catalog_dir: Optional[str] = None
    store: Optional[CatalogStore] = None
    timings: Optional[bool] = None

    def __post_init__(self):
        settings = get_settings()
        self.epsilon = settings.pipeline_epsilon if self.epsilon is None else Fraction(self.epsilon)
        self.K_max = settings.PIPELINE_K_MAX if self.K_max is None else self.K_max
        self.min_parts = settings.PIPELINE_MIN_PARTS if self.min_parts is None else self.min_parts
        self.seed = settings.DEFAULT_SEED if self.seed is None else self.seed
        self.timings = settings.REPORT_TIMINGS if self.timings is None else self.timings
        if not 0 < self.epsilon < 1:
            raise ParameterError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if not 2 <= self.K_max <= MAX_N:
            raise ParameterError(f"K_max must lie in [2, {MAX_N}], got {self.K_max}")
        if not 1 <= self.min_parts <= MAX_N:
            raise ParameterError(f"min_parts must lie in [1, {MAX_N}], got {self.min_parts}")
        if self.colors < 1:
            raise ParameterError(f"colors must be >= 1, got {self.colors}")
        if self.store is None:
            self.store = CatalogStore(self.catalog_dir)


@dataclass
class PipelineResult:
    drawing: Drawing
    crossing_count: int
    partition: EquitablePartition
    reduced: ReducedGraph
    small_drawing: Drawing
    small_value: Fraction
    diagnostics: PipelineDiagnostics
    epsilon: Fraction
    coloring: Dict[Edge, int] = field(default_factory=dict)

    def to_report(self) -> PipelineReport:
        g = self.drawing.graph
        edges = g.edge_list()
        return PipelineReport(
            n=g.n,
            K=self.partition.K,
            epsilon=str(self.epsilon),
            crossing_count=self.crossing_count,
            small_value=str(self.small_value),
            partition=list(self.partition.assignment),
            points=[p.to_row() for p in self.drawing.placement],
            edges=[list(e) for e in edges],
            small_points=[p.to_row() for p in self.small_drawing.placement],
            edge_colors=[self.coloring.get(e, 0) for e in edges] if self.coloring else None,
            diagnostics=self.diagnostics,
        )


def rational_sqrt_below(x: Fraction) -> Fraction:
    """Positive dyadic rational r with r^2 <= x, within a few percent of sqrt(x)"""
    if x <= 0:
        raise ParameterError(f"need a positive value, got {x}")
    scale = 16
    while isqrt(x.numerator * scale * scale // x.denominator) < 64:
        scale *= 16
    return Fraction(isqrt(x.numerator * scale * scale // x.denominator), scale)


def _arc_point(center: ExactPoint, radius: Fraction, t: Fraction) -> ExactPoint:
    """Exact rational point of the circle: ((1 - t^2), 2t) / (1 + t^2)"""
    denom = 1 + t * t
    return ExactPoint(center.x + radius * (1 - t * t) / denom, center.y + radius * 2 * t / denom)


def _cluster_points(small: Configuration, parts: List[List[int]], radius: Fraction, attempt: int) -> List[ExactPoint]:
    points: List[Optional[ExactPoint]] = [None] * sum(len(p) for p in parts)
    for i, part in enumerate(parts):
        size = len(part)
        shift = Fraction(attempt * (i + 1), 31 * (size + 1) ** 2)
        for j, v in enumerate(part):
            t = Fraction(j + 1, size + 1) + shift
            points[v] = _arc_point(small[i], radius, t)
    return points


def _placement_defect(points: List[ExactPoint], assignment: Tuple[int, ...], small: Configuration) -> Optional[str]:
    """First reason the placement is unusable, None if it is sound"""
    coords = [p.as_tuple() for p in points]
    triple = find_collinear_triple(coords)
    if triple is not None:
        return f"collinear triple {triple}"
    centers = small.coords()
    n = len(points)
    for a in range(n):
        for b in range(a + 1, n):
            if assignment[b] == assignment[a]:
                continue
            for c in range(b + 1, n):
                if assignment[c] in (assignment[a], assignment[b]):
                    continue
                expected = orient_coords(centers[assignment[a]], centers[assignment[b]], centers[assignment[c]])
                if orient_coords(coords[a], coords[b], coords[c]) != expected:
                    return f"cross-part triple {(a, b, c)} changes orientation"
    return None


@dataclass
class ClusterPlacement:
    placement: Configuration
    radius_sq: Fraction
    retries: int


def place_cluster_layout(
    small: Configuration,
    partition: EquitablePartition,
    max_retries: Optional[int] = None,
) -> ClusterPlacement:
    """place_clusters, also reporting the radius used and the retry count"""
    K = small.n
    if partition.K != K:
        raise SizeError(f"small drawing has {K} points for {partition.K} parts")
    if K < 3:
        raise ParameterError(f"cluster placement needs at least 3 parts, got {K}")
    max_retries = get_settings().PLACEMENT_MAX_RETRIES if max_retries is None else max_retries

    delta_sq = min_point_line_distance(small)
    radius = rational_sqrt_below(delta_sq / 400)
    parts = partition.parts()
    for attempt in range(max_retries + 1):
        points = _cluster_points(small, parts, radius, attempt)
        defect = _placement_defect(points, partition.assignment, small)
        if defect is None:
            if attempt:
                logger.warning(f"[Pipeline] placement needed {attempt} retries")
            return ClusterPlacement(Configuration(tuple(points)), radius * radius, attempt)
        logger.debug(f"[Pipeline] placement attempt {attempt} rejected: {defect}")
        radius /= 2
    raise DegeneracyError(f"no general-position cluster placement after {max_retries} retries")


def place_clusters(small: Configuration, partition: EquitablePartition, n: Optional[int] = None) -> Configuration:
    """
    Put the points of part i on a tiny arc inside the disk of radius
    delta/20 around small point i, where delta is the minimum point-line
    distance of the small configuration.
    """
    if n is not None and n != partition.n:
        raise SizeError(f"partition covers {partition.n} vertices, expected {n}")
    return place_cluster_layout(small, partition).placement


def _trivial_certificate(epsilon: Fraction, p: EquitablePartition) -> RegularityCertificate:
    return RegularityCertificate(
        epsilon=str(epsilon), K=p.K, best_deviation="0", threshold=str(epsilon * p.n * p.n),
        verified_exact=True,
    )


def run_pipeline(g: Graph, cfg: Optional[PipelineConfig] = None) -> PipelineResult:
    cfg = cfg or PipelineConfig()
    n = g.n
    if n < 3:
        raise ParameterError(f"the pipeline needs n >= 3, got n={n}")
    started = time.perf_counter()
    timings: Dict[str, float] = {}

    # 1. partition
    if cfg.force_singletons:
        if n > MAX_N:
            raise ParameterError(f"one part per vertex needs n <= {MAX_N}, got n={n}")
        partition = EquitablePartition.singletons(n)
        certificate = _trivial_certificate(cfg.epsilon, partition)
    else:
        regular = weak_regular_partition(g, cfg.epsilon, cfg.K_max, effort=cfg.effort, seed=cfg.seed)
        partition, certificate = regular.partition, regular.certificate
    refined = False
    target = min(cfg.min_parts, n)
    if partition.K < max(target, 3):
        coarse_K = partition.K
        partition = equitable_split(partition, max(target, 3))
        certificate = certificate.model_copy(update={"K": partition.K, "refined_from_K": coarse_K})
        refined = True
        logger.info(f"[Pipeline] refined partition to K={partition.K}")
    K = partition.K
    timings["partition"] = time.perf_counter() - started

    # 2. exact small instance
    rg = reduced_graph(g, partition)
    small_graph = rg.to_weighted_graph()
    catalog = cfg.store.get(K)
    if cfg.colors == 1:
        small = min_rectilinear_crossing(small_graph, catalog)
    else:
        small = min_k_colored_crossing(small_graph, cfg.colors, catalog)
    small_value = Fraction(small.value)
    timings["small"] = time.perf_counter() - started

    # 3. blow the small drawing up
    layout = place_cluster_layout(small.drawing.placement, partition)
    drawing = Drawing(g, layout.placement)
    timings["placement"] = time.perf_counter() - started

    # 4. count and check
    crossing_count = count_crossings(drawing).count
    coloring: Dict[Edge, int] = {}
    monochromatic = None
    part = partition.assignment
    if cfg.colors > 1:
        for u, v in g.edge_list():
            i, j = part[u], part[v]
            coloring[(u, v)] = 0 if i == j else small.coloring.get((min(i, j), max(i, j)), 0)
        monochromatic = count_crossings(drawing, coloring=coloring).count
    envelope = Fraction(n, K) ** 4 * small_value + Fraction(n ** 4, 2 * K)
    checked = crossing_count if monochromatic is None else monochromatic
    envelope_ok = checked <= envelope
    if not envelope_ok:
        logger.warning(f"[Pipeline] {checked} crossings exceed the envelope {envelope}")
    bad_quadruples = sum(comb(size, 2) for size in partition.sizes()) * comb(n - 2, 2)
    timings["total"] = time.perf_counter() - started

    diagnostics = PipelineDiagnostics(
        certificate=certificate,
        envelope_bound=str(envelope),
        envelope_ok=envelope_ok,
        bad_quadruple_bound=bad_quadruples,
        placement_radius_sq=str(layout.radius_sq),
        placement_retries=layout.retries,
        crossing_lemma_bound=str(crossing_lemma_bound(n, g.m)),
        refined_to_min_parts=refined,
        colors=cfg.colors,
        monochromatic_crossings=monochromatic,
        timings={k: round(v, 6) for k, v in timings.items()} if cfg.timings else None,
    )
    logger.info(
        f"[Pipeline] n={n} K={K}: {crossing_count} crossings, small value {small_value}, envelope {envelope}"
    )
    return PipelineResult(
        drawing=drawing,
        crossing_count=crossing_count,
        partition=partition,
        reduced=rg,
        small_drawing=small.drawing,
        small_value=small_value,
        diagnostics=diagnostics,
        epsilon=cfg.epsilon,
        coloring=coloring,
    )
