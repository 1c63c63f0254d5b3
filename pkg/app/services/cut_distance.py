"""
Cut Distance

d(G, H) = max over vertex sets S, T of |e_G(S,T) - e_H(S,T)|, where e sums
w(s,t) over ordered pairs s in S, t in T (pairs inside S∩T count twice).

Both graphs are turned into one exact difference matrix scaled to
integers, so the exhaustive search and the alternating local search
work in numpy integer arithmetic and only the final value is divided back.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Optional, Tuple

import numpy as np

from app.config import get_settings
from app.models.graph import AnyGraph
from app.utils.errors import SizeError
from app.utils.logger import app_logger as logger

INT64_SAFE = 2 ** 62


@dataclass(frozen=True)
class CutWitness:
    """Best (S, T) pair found and its exact deviation"""

    value: Fraction
    S: Tuple[int, ...] = ()
    T: Tuple[int, ...] = ()


def difference_matrix(g: AnyGraph, h: AnyGraph) -> Tuple[np.ndarray, int]:
    """
    Integer matrix L·(w_G - w_H) with zero diagonal, and the scale L.

    Uses int64 when no sum over an n x n block can overflow, Python ints
    (object dtype) otherwise.
    """
    if g.n != h.n:
        raise SizeError(f"graphs differ in vertex count ({g.n} vs {h.n})")
    n = g.n
    pairs = set(g.edges) | set(h.edges)
    diffs = {e: g.weight(*e) - h.weight(*e) for e in pairs}
    scale = 1
    for d in diffs.values():
        scale = lcm(scale, d.denominator)
    values = {e: int(d * scale) for e, d in diffs.items()}
    max_abs = max((abs(v) for v in values.values()), default=0)
    dtype = np.int64 if max_abs * max(n, 1) ** 2 < INT64_SAFE else object
    matrix = np.zeros((n, n), dtype=dtype)
    for (u, v), value in values.items():
        matrix[u, v] = value
        matrix[v, u] = value
    return matrix, scale


def _subset_rows(n: int, dtype) -> np.ndarray:
    """Row S is the 0/1 indicator of the bitmask S, for all 2^n subsets"""
    masks = np.arange(2 ** n, dtype=np.int64)
    bits = (masks[:, None] >> np.arange(n, dtype=np.int64)[None, :]) & 1
    return bits.astype(dtype)


def _members(indicator) -> Tuple[int, ...]:
    return tuple(int(i) for i in np.flatnonzero(np.asarray(indicator, dtype=bool)))


def exact_max_deviation(matrix: np.ndarray) -> Tuple[int, Tuple[int, ...], Tuple[int, ...]]:
    """
    Exhaustive max over S of the best T: for a fixed S the optimal T takes
    every column with positive (or every column with negative) sum.
    """
    n = matrix.shape[0]
    if n == 0:
        return 0, (), ()
    rows = _subset_rows(n, matrix.dtype)
    column_sums = rows @ matrix
    positive = np.where(column_sums > 0, column_sums, 0).sum(axis=1)
    negative = -np.where(column_sums < 0, column_sums, 0).sum(axis=1)
    best_pos = int(np.argmax(positive))
    best_neg = int(np.argmax(negative))
    if positive[best_pos] >= negative[best_neg]:
        s = best_pos
        value = int(positive[s])
        t = column_sums[s] > 0
    else:
        s = best_neg
        value = int(negative[s])
        t = column_sums[s] < 0
    if value == 0:
        return 0, (), ()
    return value, _members(rows[s]), _members(t)


def _alternate(matrix: np.ndarray, s_mask: np.ndarray, sign: int) -> Tuple[int, np.ndarray, np.ndarray]:
    """Alternate best-response T given S and S given T until the value stops rising"""
    signed = matrix * sign
    value = None
    t_mask = np.zeros_like(s_mask)
    while True:
        t_mask = (s_mask.astype(signed.dtype) @ signed) > 0
        s_mask = (signed @ t_mask.astype(signed.dtype)) > 0
        current = int(s_mask.astype(signed.dtype) @ signed @ t_mask.astype(signed.dtype))
        if value is not None and current <= value:
            return value, s_mask, t_mask
        value = current


def search_max_deviation(
    matrix: np.ndarray,
    effort: int,
    seed: int = 0,
) -> Tuple[int, Tuple[int, ...], Tuple[int, ...]]:
    """
    Alternating local search with `effort` seeded restarts, both signs per
    restart. Keeps the first strictly better witness, so the lowest seed
    wins ties. Never exceeds the true maximum.
    """
    n = matrix.shape[0]
    best_value, best_s, best_t = 0, (), ()
    if n == 0:
        return best_value, best_s, best_t
    for restart in range(max(effort, 1)):
        rng = np.random.default_rng([seed, restart])
        start = rng.random(n) < 0.5
        if restart == 0:
            start = np.ones(n, dtype=bool)
        for sign in (1, -1):
            value, s_mask, t_mask = _alternate(matrix, start, sign)
            if value > best_value:
                best_value, best_s, best_t = value, _members(s_mask), _members(t_mask)
    return best_value, best_s, best_t


def cut_distance_exact(g: AnyGraph, h: AnyGraph, max_n: Optional[int] = None) -> CutWitness:
    """Exact cut distance over all 4^n (S, T) pairs"""
    max_n = get_settings().CUT_EXACT_MAX_N if max_n is None else max_n
    if g.n > max_n:
        raise SizeError(f"exact cut distance is limited to n <= {max_n}, got n={g.n}")
    matrix, scale = difference_matrix(g, h)
    value, s, t = exact_max_deviation(matrix)
    return CutWitness(Fraction(value, scale), s, t)


def cut_distance_lower_bound(
    g: AnyGraph,
    h: AnyGraph,
    effort: Optional[int] = None,
    seed: Optional[int] = None,
) -> CutWitness:
    """Best cut discrepancy found by restarted alternating search"""
    settings = get_settings()
    effort = settings.CUT_SEARCH_EFFORT if effort is None else effort
    seed = settings.DEFAULT_SEED if seed is None else seed
    matrix, scale = difference_matrix(g, h)
    value, s, t = search_max_deviation(matrix, effort, seed)
    logger.debug(f"[CutDistance] n={g.n} effort={effort}: lower bound {Fraction(value, scale)}")
    return CutWitness(Fraction(value, scale), s, t)
