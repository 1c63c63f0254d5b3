"""
Sampling estimator: exact crossing numbers of random induced t-vertex
subgraphs, scaled by n^4 / t^4.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from statistics import median
from typing import List, Optional

import numpy as np

from app.config import get_settings
from app.models.graph import AnyGraph
from app.models.results import EstimateReport
from app.services.catalog_store import CatalogStore
from app.services.crossings import min_rectilinear_crossing
from app.utils.errors import ParameterError, ToolkitError
from app.utils.logger import app_logger as logger

MAX_SAMPLE_SIZE = 8


@dataclass
class EstimateResult:
    n: int
    t: int
    seed: int
    estimate: Fraction
    values: List[Fraction] = field(default_factory=list)
    failures: List[str] = field(default_factory=list)

    def to_report(self) -> EstimateReport:
        return EstimateReport(
            n=self.n,
            t=self.t,
            trials=len(self.values) + len(self.failures),
            seed=self.seed,
            estimate=str(self.estimate),
            values=[str(v) for v in self.values],
            failures=self.failures,
        )


def sample_estimate(
    g: AnyGraph,
    t: int,
    trials: int,
    seed: Optional[int] = None,
    store: Optional[CatalogStore] = None,
) -> EstimateResult:
    """Median over trials of cr(H) * n^4 / t^4 for random induced t-subsets H"""
    n = g.n
    if not 4 <= t <= n:
        raise ParameterError(f"sample size must satisfy 4 <= t <= n={n}, got t={t}")
    if t > MAX_SAMPLE_SIZE:
        raise ParameterError(f"exact sampled crossings are limited to t <= {MAX_SAMPLE_SIZE}")
    if trials < 1:
        raise ParameterError("need at least one trial")
    seed = get_settings().DEFAULT_SEED if seed is None else seed
    store = store or CatalogStore()
    catalog = store.get(t)
    scale = Fraction(n ** 4, t ** 4)

    values: List[Fraction] = []
    failures: List[str] = []
    for trial in range(trials):
        rng = np.random.default_rng([seed, trial])
        subset = sorted(int(v) for v in rng.choice(n, size=t, replace=False))
        try:
            value = Fraction(min_rectilinear_crossing(g.induced(subset), catalog).value)
            values.append(value * scale)
        except ToolkitError as e:
            logger.error(f"[Estimate] trial {trial} failed: {e.detail}")
            failures.append(f"trial {trial}: {e.detail}")

    estimate = median(values) if values else Fraction(0)
    logger.info(f"[Estimate] n={n} t={t} trials={trials}: estimate {estimate}")
    return EstimateResult(n, t, seed, Fraction(estimate), values, failures)
