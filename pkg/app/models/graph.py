"""
Graph, drawing and partition value types.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple, Union

from app.models.geometry import Configuration
from app.utils.errors import ParameterError, SizeError

Edge = Tuple[int, int]


def normalize_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


def _check_pair(n: int, u: int, v: int):
    if u == v:
        raise ParameterError(f"loop at vertex {u}")
    if not (0 <= u < n and 0 <= v < n):
        raise ParameterError(f"edge ({u}, {v}) outside vertex range [0, {n})")


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 0..n-1"""

    n: int
    edges: FrozenSet[Edge] = frozenset()

    def __post_init__(self):
        if self.n < 0:
            raise ParameterError(f"negative vertex count {self.n}")
        normalized = set()
        for u, v in self.edges:
            _check_pair(self.n, u, v)
            normalized.add(normalize_edge(u, v))
        object.__setattr__(self, "edges", frozenset(normalized))

    @property
    def is_weighted(self) -> bool:
        return False

    @property
    def m(self) -> int:
        return len(self.edges)

    def edge_list(self) -> List[Edge]:
        return sorted(self.edges)

    def weight(self, u: int, v: int) -> Fraction:
        return Fraction(1) if normalize_edge(u, v) in self.edges else Fraction(0)

    def weighted_edges(self) -> List[Tuple[Edge, Fraction]]:
        """Positive-weight edges in sorted order"""
        return [(e, Fraction(1)) for e in self.edge_list()]

    def neighbors(self, v: int) -> List[int]:
        return sorted(b if a == v else a for a, b in self.edges if v in (a, b))

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def with_edge(self, u: int, v: int) -> "Graph":
        return Graph(self.n, self.edges | {normalize_edge(u, v)})

    def induced(self, vertices: Iterable[int]) -> "Graph":
        """Subgraph induced on `vertices`, relabeled 0..t-1 in the given order"""
        order = list(vertices)
        index = {v: i for i, v in enumerate(order)}
        return Graph(len(order), frozenset(
            normalize_edge(index[a], index[b])
            for a, b in self.edges if a in index and b in index
        ))

    def as_weighted(self) -> "WeightedGraph":
        return WeightedGraph(self.n, {e: Fraction(1) for e in self.edges})

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls(n, frozenset((u, v) for u in range(n) for v in range(u + 1, n)))


@dataclass(frozen=True)
class WeightedGraph:
    """Symmetric edge weights in [0,1]; absent pairs weigh 0"""

    n: int
    weights: Dict[Edge, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 0:
            raise ParameterError(f"negative vertex count {self.n}")
        normalized: Dict[Edge, Fraction] = {}
        for (u, v), w in self.weights.items():
            _check_pair(self.n, u, v)
            w = Fraction(w)
            if w < 0 or w > 1:
                raise ParameterError(f"weight {w} of edge ({u}, {v}) outside [0, 1]")
            e = normalize_edge(u, v)
            if e in normalized and normalized[e] != w:
                raise ParameterError(f"conflicting weights for edge {e}")
            if w:
                normalized[e] = w
        object.__setattr__(self, "weights", normalized)

    def __hash__(self):
        return hash((self.n, tuple(sorted(self.weights.items()))))

    @property
    def is_weighted(self) -> bool:
        return True

    @property
    def m(self) -> int:
        return len(self.weights)

    @property
    def edges(self) -> FrozenSet[Edge]:
        return frozenset(self.weights)

    def edge_list(self) -> List[Edge]:
        return sorted(self.weights)

    def weight(self, u: int, v: int) -> Fraction:
        if u == v:
            return Fraction(0)
        return self.weights.get(normalize_edge(u, v), Fraction(0))

    def weighted_edges(self) -> List[Tuple[Edge, Fraction]]:
        return [(e, self.weights[e]) for e in self.edge_list()]

    def degree(self, v: int) -> int:
        return sum(1 for e in self.weights if v in e)

    def total_weight(self) -> Fraction:
        return sum(self.weights.values(), Fraction(0))

    def induced(self, vertices: Iterable[int]) -> "WeightedGraph":
        order = list(vertices)
        index = {v: i for i, v in enumerate(order)}
        return WeightedGraph(len(order), {
            normalize_edge(index[a], index[b]): w
            for (a, b), w in self.weights.items() if a in index and b in index
        })

    def as_weighted(self) -> "WeightedGraph":
        return self


AnyGraph = Union[Graph, WeightedGraph]


@dataclass(frozen=True)
class Drawing:
    """A graph together with one point per vertex"""

    graph: AnyGraph
    placement: Configuration

    def __post_init__(self):
        if self.placement.n != self.graph.n:
            raise SizeError(
                f"placement has {self.placement.n} points for {self.graph.n} vertices"
            )


@dataclass(frozen=True)
class CrossingReport:
    """Crossing total of a drawing; weighted totals are exact rationals"""

    count: Union[int, Fraction]
    pairs: Optional[Tuple[Tuple[Edge, Edge], ...]] = None


@dataclass(frozen=True)
class EquitablePartition:
    """Vertex partition with part sizes differing by at most one"""

    n: int
    K: int
    assignment: Tuple[int, ...]

    def __post_init__(self):
        assignment = tuple(int(a) for a in self.assignment)
        object.__setattr__(self, "assignment", assignment)
        if len(assignment) != self.n:
            raise SizeError(f"assignment covers {len(assignment)} of {self.n} vertices")
        if self.K < 1 and self.n > 0:
            raise ParameterError("a partition needs at least one part")
        if any(not 0 <= a < self.K for a in assignment):
            raise ParameterError(f"part index outside [0, {self.K})")
        sizes = self.sizes()
        if self.n and (min(sizes) == 0 or max(sizes) - min(sizes) > 1):
            raise ParameterError(f"partition is not equitable: part sizes {sizes}")

    def sizes(self) -> List[int]:
        sizes = [0] * self.K
        for a in self.assignment:
            sizes[a] += 1
        return sizes

    def parts(self) -> List[List[int]]:
        parts: List[List[int]] = [[] for _ in range(self.K)]
        for v, a in enumerate(self.assignment):
            parts[a].append(v)
        return parts

    def to_text(self) -> str:
        """Line i holds the part of vertex i"""
        return "".join(f"{a}\n" for a in self.assignment)

    @classmethod
    def parse(cls, text: str) -> "EquitablePartition":
        assignment = [int(line) for line in text.split()]
        K = max(assignment) + 1 if assignment else 0
        return cls(len(assignment), K, tuple(assignment))

    @classmethod
    def singletons(cls, n: int) -> "EquitablePartition":
        return cls(n, n, tuple(range(n)))

    @classmethod
    def trivial(cls, n: int) -> "EquitablePartition":
        return cls(n, 1, (0,) * n)


@dataclass(frozen=True)
class ReducedGraph:
    """Weighted graph on the parts of a partition (G/P)"""

    K: int
    weights: Tuple[Tuple[Fraction, ...], ...]

    def __post_init__(self):
        if len(self.weights) != self.K or any(len(row) != self.K for row in self.weights):
            raise SizeError(f"reduced graph needs a {self.K}x{self.K} weight matrix")
        for i in range(self.K):
            if self.weights[i][i] != 0:
                raise ParameterError("reduced graph diagonal must be zero")
            for j in range(i + 1, self.K):
                if self.weights[i][j] != self.weights[j][i]:
                    raise ParameterError(f"reduced graph weights not symmetric at ({i}, {j})")

    def to_weighted_graph(self) -> WeightedGraph:
        return WeightedGraph(self.K, {
            (i, j): self.weights[i][j]
            for i in range(self.K) for j in range(i + 1, self.K) if self.weights[i][j]
        })
