import os
from fractions import Fraction
from itertools import combinations

import pytest

from app.models.graph import Graph, WeightedGraph
from app.services.catalog_store import CatalogStore

# exact rectilinear crossing numbers of K4..K7
KNOWN_COMPLETE_CROSSINGS = {4: 0, 5: 1, 6: 3, 7: 9}

# number of order types of n points in general position
KNOWN_ORDER_TYPE_COUNTS = {3: 1, 4: 2, 5: 3, 6: 16, 7: 135}

RUN_SLOW = bool(os.environ.get("RUN_SLOW_TESTS"))
slow = pytest.mark.skipif(not RUN_SLOW, reason="set RUN_SLOW_TESTS=1 for catalog builds above n=6")


@pytest.fixture(scope="session")
def catalog_store(tmp_path_factory) -> CatalogStore:
    """Catalogs built once per session in a temporary directory"""
    return CatalogStore(str(tmp_path_factory.mktemp("catalogs")), budget=20_000, seed=0)


def random_weighted_graph(rng, n: int, levels: int = 4, density: float = 0.6) -> WeightedGraph:
    weights = {}
    for u, v in combinations(range(n), 2):
        if rng.random() < density:
            weights[(u, v)] = Fraction(int(rng.integers(1, levels + 1)), levels)
    return WeightedGraph(n, weights)


def graph_from_edges(n: int, edges) -> Graph:
    return Graph(n, frozenset(edges))
