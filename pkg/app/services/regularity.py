"""
Weak Regularity

Frieze-Kannan style weak regular partitions found by energy-increment
refinement, plus the reduced graph G/P, the partition-average graph G_P
and blow-ups of weighted graphs.

Densities use d(i,j) = e_G(V_i,V_j) / (|V_i||V_j|) with e summed over
ordered pairs, for i = j as well.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import ceil
from typing import Dict, List, Optional, Sequence, Tuple

from app.config import get_settings
from app.models.graph import AnyGraph, EquitablePartition, ReducedGraph, WeightedGraph
from app.models.results import RegularityCertificate
from app.services.cut_distance import difference_matrix, exact_max_deviation, search_max_deviation
from app.utils.errors import ParameterError, SizeError
from app.utils.logger import app_logger as logger


def _check_partition(g: AnyGraph, p: EquitablePartition):
    if p.n != g.n:
        raise SizeError(f"partition covers {p.n} vertices, graph has {g.n}")


def part_edge_sums(g: AnyGraph, p: EquitablePartition) -> List[List[Fraction]]:
    """e_G(V_i, V_j) over ordered pairs; the diagonal counts each inner edge twice"""
    _check_partition(g, p)
    sums = [[Fraction(0)] * p.K for _ in range(p.K)]
    part = p.assignment
    for (u, v), w in g.weighted_edges():
        i, j = part[u], part[v]
        if i == j:
            sums[i][i] += 2 * w
        else:
            sums[i][j] += w
            sums[j][i] += w
    return sums


def part_densities(g: AnyGraph, p: EquitablePartition) -> List[List[Fraction]]:
    sums = part_edge_sums(g, p)
    sizes = p.sizes()
    return [[sums[i][j] / (sizes[i] * sizes[j]) for j in range(p.K)] for i in range(p.K)]


def reduced_graph(g: AnyGraph, p: EquitablePartition) -> ReducedGraph:
    """G/P with weights e_G(V_i,V_j)/(|V_i||V_j|), zero diagonal"""
    d = part_densities(g, p)
    return ReducedGraph(p.K, tuple(
        tuple(Fraction(0) if i == j else d[i][j] for j in range(p.K)) for i in range(p.K)
    ))


def partition_average_graph(g: AnyGraph, p: EquitablePartition) -> WeightedGraph:
    """G_P: every pair u != v weighs the density between their parts"""
    d = part_densities(g, p)
    part = p.assignment
    return WeightedGraph(g.n, {
        (u, v): d[part[u]][part[v]]
        for u in range(g.n) for v in range(u + 1, g.n)
        if d[part[u]][part[v]]
    })


def partition_index(g: AnyGraph, p: EquitablePartition) -> Fraction:
    """Sum over part pairs of |V_i||V_j| d(i,j)^2, divided by n^2"""
    if g.n == 0:
        return Fraction(0)
    d = part_densities(g, p)
    sizes = p.sizes()
    total = sum(
        (sizes[i] * sizes[j] * d[i][j] ** 2 for i in range(p.K) for j in range(p.K)),
        Fraction(0),
    )
    return total / (g.n * g.n)


def natural_partition(K: int, m: int) -> EquitablePartition:
    """Parts U_i = {i*m, ..., i*m + m - 1} of a blow-up"""
    return EquitablePartition(K * m, K, tuple(v // m for v in range(K * m)))


def blow_up_weights(rg: ReducedGraph, m: int) -> WeightedGraph:
    """
    G[m]: vertex i*m + a is clone a of vertex i; clones of i and j are
    joined with weight w(i,j), clones of the same vertex are not joined.
    """
    if m < 1:
        raise ParameterError(f"blow-up multiplicity must be >= 1, got {m}")
    n = rg.K * m
    weights: Dict[Tuple[int, int], Fraction] = {}
    for u in range(n):
        for v in range(u + 1, n):
            w = rg.weights[u // m][v // m]
            if w:
                weights[(u, v)] = w
    return WeightedGraph(n, weights)


def equitable_split(p: EquitablePartition, K: int) -> EquitablePartition:
    """
    Cut the vertices, listed part by part in index order, into K
    consecutive equitable chunks. Used to raise the part count.
    """
    if not 1 <= K <= p.n:
        raise ParameterError(f"cannot split {p.n} vertices into {K} parts")
    order = sorted(range(p.n), key=lambda v: (p.assignment[v], v))
    base, extra = divmod(p.n, K)
    assignment = [0] * p.n
    pos = 0
    for part in range(K):
        size = base + (1 if part < extra else 0)
        for v in order[pos:pos + size]:
            assignment[v] = part
        pos += size
    return EquitablePartition(p.n, K, tuple(assignment))


class _Rebalancer:
    """Moves vertices out of oversized parts, disturbing densities least"""

    def __init__(self, g: AnyGraph, parts: List[List[int]]):
        self.g = g
        self.parts = parts

    def _link(self, v: int, part: Sequence[int]) -> Fraction:
        return sum((self.g.weight(v, u) for u in part if u != v), Fraction(0))

    def _density(self, part: Sequence[int]) -> Fraction:
        if len(part) < 2:
            return Fraction(0)
        inner = sum((self.g.weight(a, b) for i, a in enumerate(part) for b in part[i + 1:]), Fraction(0))
        return 2 * inner / (len(part) * (len(part) - 1))

    def run(self) -> List[List[int]]:
        parts = self.parts
        n = sum(len(p) for p in parts)
        K = len(parts)
        base, extra = divmod(n, K)
        # larger atoms keep the larger targets, ties by atom index
        by_size = sorted(range(K), key=lambda i: (-len(parts[i]), i))
        target = [base] * K
        for i in by_size[:extra]:
            target[i] = base + 1

        while True:
            over = [i for i in range(K) if len(parts[i]) > target[i]]
            if not over:
                return parts
            source = over[0]
            part = parts[source]
            density = self._density(part)
            denom = len(part) - 1
            mover = min(part, key=lambda v: (abs(self._link(v, part) / denom - density), v))
            under = [i for i in range(K) if len(parts[i]) < target[i]]

            def fit(i: int):
                receiving = parts[i]
                if not receiving:
                    return (Fraction(0), i)
                link = self._link(mover, receiving) / len(receiving)
                return (abs(link - self._density(receiving)), i)

            receiver = min(under, key=fit)
            part.remove(mover)
            parts[receiver].append(mover)
            parts[receiver].sort()


def refine_partition(g: AnyGraph, p: EquitablePartition, S: Sequence[int], T: Sequence[int]) -> EquitablePartition:
    """Split every part by membership in S and T, then re-equalize"""
    in_s, in_t = set(S), set(T)
    atoms: Dict[Tuple[int, bool, bool], List[int]] = {}
    for v in range(p.n):
        atoms.setdefault((p.assignment[v], v in in_s, v in in_t), []).append(v)
    parts = [atoms[key] for key in sorted(atoms)]
    parts = _Rebalancer(g, parts).run()
    assignment = [0] * p.n
    for index, part in enumerate(parts):
        for v in part:
            assignment[v] = index
    return EquitablePartition(p.n, len(parts), tuple(assignment))


@dataclass
class RegularityResult:
    partition: EquitablePartition
    certificate: RegularityCertificate


def _find_violation(g: AnyGraph, p: EquitablePartition, exact: bool, effort: int, seed: int):
    matrix, scale = difference_matrix(g, partition_average_graph(g, p))
    if exact:
        value, s, t = exact_max_deviation(matrix)
    else:
        value, s, t = search_max_deviation(matrix, effort, seed)
    return Fraction(value, scale), s, t


def _index_preserving_refinement(
    g: AnyGraph, p: EquitablePartition, S: Sequence[int], T: Sequence[int], current: Fraction
) -> Optional[EquitablePartition]:
    """
    First of the (S, T), S-only and T-only refinements whose partition index
    does not fall below `current`; None if rebalancing lowers all three.
    """
    for s, t in ((S, T), (S, ()), ((), T)):
        candidate = refine_partition(g, p, s, t)
        if partition_index(g, candidate) >= current:
            return candidate
    return None


def weak_regular_partition(
    g: AnyGraph,
    epsilon: Fraction,
    K_max: Optional[int] = None,
    effort: Optional[int] = None,
    seed: Optional[int] = None,
) -> RegularityResult:
    """
    Refine from a single part while a pair (S, T) with
    |e_G(S,T) - e_GP(S,T)| >= epsilon n^2 is found.

    Stops when no violation is found, when a refinement would exceed
    K_max parts (flag cap_exceeded), after 8/epsilon^2 rounds, or when
    rebalancing would lower the partition index (flag index_stalled).
    """
    settings = get_settings()
    epsilon = Fraction(epsilon)
    if not 0 < epsilon < 1:
        raise ParameterError(f"epsilon must lie in (0, 1), got {epsilon}")
    if K_max is None:
        K_max = 2 ** ceil(1 / epsilon ** 2)
    if K_max < 1 / epsilon:
        raise ParameterError(f"K_max={K_max} is below 1/epsilon={1 / epsilon}")
    effort = settings.CUT_SEARCH_EFFORT if effort is None else effort
    seed = settings.DEFAULT_SEED if seed is None else seed

    n = g.n
    if n == 0:
        raise ParameterError("cannot partition an empty vertex set")
    exact = n <= settings.CUT_EXACT_MAX_N
    threshold = epsilon * n * n
    round_cap = ceil(8 / epsilon ** 2)

    p = EquitablePartition.trivial(n)
    history = [partition_index(g, p)]
    rounds = 0
    cap_exceeded = False
    index_stalled = False

    while True:
        deviation, s, t = _find_violation(g, p, exact, effort, seed + rounds)
        logger.debug(f"[Regularity] round {rounds}: K={p.K} deviation {deviation} (threshold {threshold})")
        if deviation < threshold:
            break
        if rounds >= round_cap:
            logger.warning(f"[Regularity] round cap {round_cap} reached with K={p.K}")
            cap_exceeded = True
            break
        refined = _index_preserving_refinement(g, p, s, t, history[-1])
        if refined is None:
            logger.warning(f"[Regularity] every refinement of K={p.K} lowers the partition index; stopping")
            index_stalled = True
            break
        if refined.K > K_max:
            logger.warning(f"[Regularity] refinement to K={refined.K} exceeds K_max={K_max}; stopping")
            cap_exceeded = True
            break
        if refined == p:
            break
        p = refined
        rounds += 1
        history.append(partition_index(g, p))

    certificate = RegularityCertificate(
        epsilon=str(epsilon),
        K=p.K,
        best_deviation=str(deviation),
        threshold=str(threshold),
        witness_S=list(s),
        witness_T=list(t),
        verified_exact=exact,
        rounds=rounds,
        cap_exceeded=cap_exceeded,
        index_stalled=index_stalled,
        index_history=[str(x) for x in history],
    )
    if not exact:
        logger.warning(f"[Regularity] n={n} above exact limit; certificate is heuristic")
    logger.info(f"[Regularity] n={n} epsilon={epsilon}: K={p.K} after {rounds} rounds, deviation {deviation}")
    return RegularityResult(p, certificate)
