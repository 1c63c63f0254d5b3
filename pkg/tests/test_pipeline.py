from fractions import Fraction

import networkx as nx
import pytest

from app.models.geometry import Configuration
from app.models.graph import EquitablePartition, Graph
from app.services.crossings import count_crossings, min_rectilinear_crossing
from app.services.generators import from_networkx
from app.services.geom import order_type, same_type_transversals
from app.services.pipeline import (
    PipelineConfig,
    place_cluster_layout,
    place_clusters,
    rational_sqrt_below,
    run_pipeline,
)
from app.services.regularity import natural_partition
from app.utils.errors import ParameterError, SizeError
from tests.conftest import slow

SMALL = Configuration.from_coords([(0, 0), (10, 0), (3, 8)])


def config(store, **kwargs) -> PipelineConfig:
    kwargs.setdefault("epsilon", Fraction(1, 4))
    kwargs.setdefault("K_max", 4)
    kwargs.setdefault("effort", 5)
    kwargs.setdefault("seed", 0)
    return PipelineConfig(store=store, **kwargs)


class TestRationalSqrt:
    @pytest.mark.parametrize("x", [Fraction(2), Fraction(1, 400), Fraction(10 ** 6, 3), Fraction(1, 10 ** 9)])
    def test_below_and_close(self, x):
        r = rational_sqrt_below(x)
        assert 0 < r * r <= x
        assert r * r >= x * Fraction(9, 10)

    def test_rejects_nonpositive(self):
        with pytest.raises(ParameterError):
            rational_sqrt_below(Fraction(0))


class TestPlaceClusters:
    def test_singletons_keep_the_order_type(self):
        placed = place_clusters(SMALL, EquitablePartition.singletons(3))
        assert order_type(placed) == order_type(SMALL)

    def test_parts_of_two_are_same_type(self):
        small = Configuration.from_coords([(0, 0), (12, 1), (5, 9), (3, 4)])
        partition = natural_partition(4, 2)
        placed = place_clusters(small, partition, 8)
        parts = [[placed[v] for v in part] for part in partition.parts()]
        assert same_type_transversals(parts)

    def test_radius_bound(self):
        layout = place_cluster_layout(SMALL, natural_partition(3, 3))
        # delta^2 of SMALL is 80^2 over its longest side squared
        assert layout.radius_sq <= Fraction(6400, 113) / 400
        assert layout.retries == 0

    def test_scaling_the_small_drawing(self):
        partition = natural_partition(3, 3)
        assert (order_type(place_clusters(SMALL.scaled(10), partition))
                == order_type(place_clusters(SMALL, partition)))

    def test_part_count_mismatch(self):
        with pytest.raises(SizeError):
            place_clusters(SMALL, natural_partition(4, 1))

    def test_vertex_count_mismatch(self):
        with pytest.raises(SizeError):
            place_clusters(SMALL, natural_partition(3, 2), n=5)


class TestRunPipeline:
    @pytest.mark.parametrize("nx_graph", [nx.cycle_graph(5), nx.wheel_graph(6), nx.octahedral_graph()])
    def test_planar_graph_with_singletons(self, catalog_store, nx_graph):
        g = from_networkx(nx_graph)
        result = run_pipeline(g, config(catalog_store, force_singletons=True))
        assert result.crossing_count == 0
        assert result.partition.K == g.n
        assert not result.diagnostics.refined_to_min_parts
        assert result.diagnostics.certificate.refined_from_K is None

    def test_singletons_match_exact_optimum(self, catalog_store):
        g = from_networkx(nx.gnp_random_graph(6, 0.7, seed=4))
        result = run_pipeline(g, config(catalog_store, force_singletons=True))
        assert result.crossing_count == min_rectilinear_crossing(g, catalog_store.get(6)).value

    @pytest.mark.parametrize("seed", range(3))
    def test_dense_random_graph(self, catalog_store, seed):
        g = from_networkx(nx.gnp_random_graph(24, 0.5, seed=seed))
        result = run_pipeline(g, config(catalog_store, seed=seed))
        diag = result.diagnostics
        assert diag.envelope_ok
        assert result.crossing_count == count_crossings(result.drawing).count
        assert 3 <= result.partition.K <= 4
        sizes = result.partition.sizes()
        assert max(sizes) - min(sizes) <= 1

    @slow
    @pytest.mark.parametrize("seed", range(30))
    def test_envelope_on_larger_graphs(self, catalog_store, seed):
        g = from_networkx(nx.gnp_random_graph(48, 0.5, seed=100 + seed))
        result = run_pipeline(g, config(catalog_store, K_max=6, seed=seed))
        assert result.partition.K <= 6
        assert result.diagnostics.envelope_ok
        n, K = g.n, result.partition.K
        assert result.crossing_count <= Fraction(n, K) ** 4 * result.small_value + Fraction(n ** 4, 2 * K)

    def test_upper_bounds_the_exact_value(self, catalog_store):
        g = from_networkx(nx.gnp_random_graph(6, 0.6, seed=8))
        result = run_pipeline(g, config(catalog_store))
        assert result.crossing_count >= min_rectilinear_crossing(g, catalog_store.get(6)).value

    def test_complete_graph_is_refined_to_three_parts(self, catalog_store):
        result = run_pipeline(Graph.complete(9), config(catalog_store))
        assert result.partition.K == 3
        assert result.diagnostics.refined_to_min_parts
        assert result.diagnostics.envelope_ok
        certificate = result.diagnostics.certificate
        assert certificate.K == 3
        assert certificate.refined_from_K == 1

    def test_deterministic_report(self, catalog_store):
        g = from_networkx(nx.gnp_random_graph(18, 0.5, seed=1))
        first = run_pipeline(g, config(catalog_store)).to_report().model_dump_json()
        second = run_pipeline(g, config(catalog_store)).to_report().model_dump_json()
        assert first == second

    def test_report_carries_exact_points(self, catalog_store):
        g = Graph.complete(6)
        report = run_pipeline(g, config(catalog_store)).to_report()
        assert len(report.points) == 6
        assert all(len(row) == 4 and row[1] > 0 and row[3] > 0 for row in report.points)
        assert report.diagnostics.timings is None

    def test_two_colors(self, catalog_store):
        result = run_pipeline(Graph.complete(6), config(catalog_store, colors=2))
        diag = result.diagnostics
        assert diag.monochromatic_crossings is not None
        assert diag.monochromatic_crossings <= result.crossing_count
        assert set(result.coloring) == set(Graph.complete(6).edges)

    def test_too_few_vertices(self, catalog_store):
        with pytest.raises(ParameterError):
            run_pipeline(Graph.complete(2), config(catalog_store))

    def test_singletons_need_small_graph(self, catalog_store):
        with pytest.raises(ParameterError):
            run_pipeline(Graph.complete(11), config(catalog_store, force_singletons=True))

    @pytest.mark.parametrize("kwargs", [
        {"epsilon": Fraction(0)},
        {"K_max": 1},
        {"K_max": 11},
        {"min_parts": 0},
        {"colors": 0},
    ])
    def test_config_validation(self, catalog_store, kwargs):
        with pytest.raises(ParameterError):
            config(catalog_store, **kwargs)
