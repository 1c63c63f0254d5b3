"""
Crossing Counting and Exact Minimization

Crossings of straight-line drawings depend only on the order type of the
placement, so every count goes through the orientation signature of the
points. Exact minimization scans an order-type catalog and, per entry,
searches vertex-to-point assignments by branch-and-bound.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from math import lcm
from typing import Dict, List, Optional, Tuple, Union

from app.config import get_settings
from app.models.catalog import OrderTypeCatalog
from app.models.geometry import Configuration, OrderTypeSignature
from app.models.graph import AnyGraph, CrossingReport, Drawing, Edge
from app.services.geom import check_general_position, order_type
from app.utils.errors import BudgetExceededError, ParameterError, SizeError
from app.utils.logger import app_logger as logger

Value = Union[int, Fraction]


def segments_cross(sig: OrderTypeSignature, a: int, b: int, c: int, d: int) -> bool:
    """Open segments ab and cd intersect (four distinct points, general position)"""
    return sig.sign(a, b, c) != sig.sign(a, b, d) and sig.sign(c, d, a) != sig.sign(c, d, b)


def count_crossings(
    d: Drawing,
    with_pairs: bool = False,
    coloring: Optional[Dict[Edge, int]] = None,
) -> CrossingReport:
    """
    Count unordered pairs of edges whose interiors meet.

    Weighted graphs contribute w(e)·w(f) per crossing pair. With a
    coloring, only pairs of equally colored edges count.
    """
    check_general_position(d.placement)
    sig = order_type(d.placement)
    weighted = d.graph.weighted_edges()
    weighted_input = d.graph.is_weighted

    total = Fraction(0)
    pairs: List[Tuple[Edge, Edge]] = []
    for idx, (e, we) in enumerate(weighted):
        a, b = e
        for f, wf in weighted[idx + 1:]:
            c, dd = f
            if len({a, b, c, dd}) < 4:
                continue
            if coloring is not None and coloring.get(e, 0) != coloring.get(f, 0):
                continue
            if segments_cross(sig, a, b, c, dd):
                total += we * wf
                if with_pairs:
                    pairs.append((e, f))

    count: Value = total if weighted_input else int(total)
    return CrossingReport(count=count, pairs=tuple(pairs) if with_pairs else None)


def quadruple_is_convex(sig: OrderTypeSignature, a: int, b: int, c: int, d: int) -> bool:
    """No point of the four lies inside the triangle of the other three"""
    for p, q, r, x in ((a, b, c, d), (a, b, d, c), (a, c, d, b), (b, c, d, a)):
        t = sig.sign(p, q, r)
        if sig.sign(p, q, x) == t and sig.sign(q, r, x) == t and sig.sign(r, p, x) == t:
            return False
    return True


def convex_quadruple_count(config: Configuration) -> int:
    """Number of 4-subsets in convex position (= crossings of K_n on config)"""
    check_general_position(config)
    sig = order_type(config)
    return sum(1 for quad in combinations(range(config.n), 4) if quadruple_is_convex(sig, *quad))


def crossing_lemma_bound(n: int, e: int) -> Fraction:
    """e^3 / (64 n^2) - 4n; meaningful when e >= 4n"""
    if n <= 0:
        raise ParameterError("crossing lemma needs n >= 1")
    return Fraction(e ** 3, 64 * n * n) - 4 * n


@dataclass
class MinCrossingResult:
    """Exact minimum over a catalog and the drawing that attains it"""

    value: Value
    drawing: Drawing
    key: OrderTypeSignature
    entries_scanned: int = 0
    coloring: Dict[Edge, int] = field(default_factory=dict)


def _integer_weights(g: AnyGraph) -> Tuple[List[Tuple[Edge, int]], int]:
    """Positive edge weights scaled to integers over a common denominator"""
    weighted = g.weighted_edges()
    denominator = 1
    for _, w in weighted:
        denominator = lcm(denominator, w.denominator)
    return [(e, int(w * denominator)) for e, w in weighted], denominator


def _pair_crossing_table(sig: OrderTypeSignature) -> List[List[bool]]:
    """table[pair(p,q)][pair(r,s)]: segments pq and rs cross"""
    n = sig.n
    pair_ids = list(combinations(range(n), 2))
    table = [[False] * len(pair_ids) for _ in pair_ids]
    for i, (a, b) in enumerate(pair_ids):
        for j in range(i + 1, len(pair_ids)):
            c, d = pair_ids[j]
            if len({a, b, c, d}) == 4 and segments_cross(sig, a, b, c, d):
                table[i][j] = table[j][i] = True
    return table


def _pair_index(n: int) -> List[List[int]]:
    index = [[-1] * n for _ in range(n)]
    for pos, (a, b) in enumerate(combinations(range(n), 2)):
        index[a][b] = index[b][a] = pos
    return index


def _check_catalog(g: AnyGraph, cat: OrderTypeCatalog):
    if g.n != cat.n:
        raise SizeError(f"graph has {g.n} vertices but the catalog is for n={cat.n}")
    if len(cat) == 0:
        raise ParameterError(f"catalog for n={cat.n} is empty")


class AssignmentSearch:
    """
    Branch-and-bound over vertex-to-point assignments for one graph,
    sharing the incumbent across catalog entries.
    """

    def __init__(self, g: AnyGraph):
        self.g = g
        self.n = g.n
        self.edges, self.denominator = _integer_weights(g)
        degree = [0] * self.n
        for (u, v), _ in self.edges:
            degree[u] += 1
            degree[v] += 1
        self.order = sorted(range(self.n), key=lambda v: (-degree[v], v))
        position = {v: t for t, v in enumerate(self.order)}
        # edges that close when the t-th vertex of the order is placed
        self.closing: List[List[Tuple[int, int]]] = [[] for _ in range(self.n)]
        for (u, v), w in self.edges:
            later, earlier = (u, v) if position[u] > position[v] else (v, u)
            self.closing[position[later]].append((earlier, w))
        self.pair_index = _pair_index(self.n)
        self.best: Optional[int] = None
        self.best_points: Optional[List[int]] = None
        self.best_key: Optional[OrderTypeSignature] = None
        self.best_witness: Optional[Configuration] = None
        self.nodes = 0

    def scan(self, key: OrderTypeSignature, witness: Configuration):
        if self.best == 0:
            return
        table = _pair_crossing_table(order_type(witness))
        pair_index = self.pair_index
        order = self.order
        closing = self.closing
        n = self.n
        point_of = [-1] * n
        used = [False] * n
        placed: List[Tuple[int, int]] = []

        def descend(depth: int, partial: int):
            self.nodes += 1
            if depth == n:
                if self.best is None or partial < self.best:
                    self.best = partial
                    self.best_points = list(point_of)
                    self.best_key = key
                    self.best_witness = witness
                return
            v = order[depth]
            for p in range(n):
                if used[p]:
                    continue
                new_pairs = [(pair_index[p][point_of[u]], w) for u, w in closing[depth]]
                increment = 0
                for pid, w in new_pairs:
                    row = table[pid]
                    for qid, wq in placed:
                        if row[qid]:
                            increment += w * wq
                total = partial + increment
                if self.best is not None and total >= self.best:
                    continue
                used[p] = True
                point_of[v] = p
                placed.extend(new_pairs)
                descend(depth + 1, total)
                del placed[len(placed) - len(new_pairs):]
                point_of[v] = -1
                used[p] = False
                if self.best == 0:
                    return

        descend(0, 0)

    def result(self, scanned: int) -> MinCrossingResult:
        placement = Configuration(tuple(self.best_witness[p] for p in self.best_points))
        total = Fraction(self.best, self.denominator * self.denominator)
        value: Value = total if self.g.is_weighted else int(total)
        return MinCrossingResult(value, Drawing(self.g, placement), self.best_key, scanned)


def min_rectilinear_crossing(g: AnyGraph, cat: OrderTypeCatalog) -> MinCrossingResult:
    """
    Exact minimum crossing value of g over all placements whose order type
    is in the catalog. Ties keep the first drawing found in catalog order.
    """
    _check_catalog(g, cat)
    search = AssignmentSearch(g)
    scanned = 0
    for key, witness in cat.sorted_entries():
        search.scan(key, witness)
        scanned += 1
        if search.best == 0:
            break
    logger.debug(
        f"[Crossings] n={g.n} m={g.m}: minimum {search.best}/{search.denominator ** 2} "
        f"after {scanned} order types, {search.nodes} nodes"
    )
    return search.result(scanned)


def _color_conflicts(
    conflicts: List[Tuple[int, int, int]],
    m: int,
    k: int,
    bound: Optional[int],
) -> Tuple[Optional[int], Optional[List[int]]]:
    """
    Minimum total weight of monochromatic conflicts over k-colorings of m
    edges, searched only below `bound`. Colors are introduced in order.
    """
    by_edge: List[List[Tuple[int, int]]] = [[] for _ in range(m)]
    for a, b, w in conflicts:
        by_edge[max(a, b)].append((min(a, b), w))
    involved = sorted({a for a, _, _ in conflicts} | {b for _, b, _ in conflicts})
    color = [0] * m
    best = [bound, None]

    def descend(pos: int, used_colors: int, partial: int):
        if pos == len(involved):
            if best[0] is None or partial < best[0]:
                best[0] = partial
                best[1] = list(color)
            return
        e = involved[pos]
        for c in range(min(k, used_colors + 1)):
            increment = sum(w for f, w in by_edge[e] if color[f] == c)
            total = partial + increment
            if best[0] is not None and total >= best[0]:
                continue
            color[e] = c
            descend(pos + 1, max(used_colors, c + 1), total)
            color[e] = 0
            if best[0] == 0:
                return

    descend(0, 0, 0)
    if best[1] is None:
        return None, None
    return best[0], best[1]


def min_k_colored_crossing(g: AnyGraph, k: int, cat: OrderTypeCatalog) -> MinCrossingResult:
    """
    Minimum monochromatic crossing value jointly over catalog placements
    and k-edge-colorings. The result carries the edge coloring.
    """
    if k < 1:
        raise ParameterError(f"need at least one color, got k={k}")
    _check_catalog(g, cat)
    if k == 1:
        result = min_rectilinear_crossing(g, cat)
        result.coloring = {e: 0 for e in g.edge_list()}
        return result

    edges, denominator = _integer_weights(g)
    m = len(edges)
    cap = get_settings().KPLANAR_MAX_COLORINGS
    if k ** m > cap:
        raise BudgetExceededError(f"{k}^{m} colorings exceed the cap of {cap}")

    n = g.n
    best: Optional[int] = None
    best_state = None
    scanned = 0
    for key, witness in cat.sorted_entries():
        scanned += 1
        sig = order_type(witness)
        for perm in permutations(range(n)):
            conflicts = []
            for i in range(m):
                (a, b), wa = edges[i]
                for j in range(i + 1, m):
                    (c, d), wc = edges[j]
                    if len({a, b, c, d}) < 4:
                        continue
                    if segments_cross(sig, perm[a], perm[b], perm[c], perm[d]):
                        conflicts.append((i, j, wa * wc))
            if not conflicts:
                value, colors = 0, [0] * m
            else:
                value, colors = _color_conflicts(conflicts, m, k, best)
            if value is not None and (best is None or value < best):
                best = value
                best_state = (key, witness, perm, colors)
            if best == 0:
                break
        if best == 0:
            break

    key, witness, perm, colors = best_state
    placement = Configuration(tuple(witness[perm[v]] for v in range(n)))
    coloring = {e: colors[i] for i, (e, _) in enumerate(edges)}
    total = Fraction(best, denominator * denominator)
    value: Value = total if g.is_weighted else int(total)
    logger.debug(f"[Crossings] k={k} n={n} m={m}: monochromatic minimum {value} after {scanned} order types")
    return MinCrossingResult(value, Drawing(g, placement), key, scanned, coloring)
