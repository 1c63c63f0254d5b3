"""
Graph families for experiments: G(n,p), Paley graphs and complete graphs,
built with networkx and converted to the toolkit's Graph.
"""

from fractions import Fraction
from math import isqrt

import networkx as nx

from app.models.graph import Graph
from app.utils.errors import ParameterError


def from_networkx(nx_graph: nx.Graph) -> Graph:
    """Relabel nodes 0..n-1 in sorted order and drop loops"""
    nodes = sorted(nx_graph.nodes())
    index = {v: i for i, v in enumerate(nodes)}
    return Graph(len(nodes), frozenset(
        (index[u], index[v]) for u, v in nx_graph.edges() if u != v
    ))


def to_networkx(g: Graph) -> nx.Graph:
    nx_graph = nx.Graph()
    nx_graph.add_nodes_from(range(g.n))
    nx_graph.add_edges_from(g.edge_list())
    return nx_graph


def _is_prime(q: int) -> bool:
    """Trial division; Paley orders are pipeline vertex counts, so q stays far below 10^6"""
    if q < 2:
        return False
    if q % 2 == 0:
        return q == 2
    return all(q % d for d in range(3, isqrt(q) + 1, 2))


def gnp_graph(n: int, p: Fraction, seed: int) -> Graph:
    p = Fraction(p)
    if not 0 < p < 1:
        raise ParameterError(f"gnp density must lie in (0, 1), got {p}")
    if n < 1:
        raise ParameterError(f"gnp needs n >= 1, got {n}")
    return from_networkx(nx.gnp_random_graph(n, float(p), seed=seed))


def paley_graph(q: int) -> Graph:
    if not (_is_prime(q) and q % 4 == 1):
        raise ParameterError(f"Paley graphs need a prime q = 1 (mod 4), got {q}")
    return from_networkx(nx.paley_graph(q).to_undirected())


def complete_graph(n: int) -> Graph:
    if n < 1:
        raise ParameterError(f"complete graph needs n >= 1, got {n}")
    return Graph.complete(n)
