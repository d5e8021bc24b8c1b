from fractions import Fraction

import pytest

from offpitch import (
    ConvergenceError,
    WeightedGraph,
    betweenness,
    filter_by_edge_weight,
    global_properties,
    k_core,
    pagerank,
    top_influencers,
    weighted_in_degree,
    weighted_out_degree,
)
from offpitch.metrics import CentralityTable
from oracles import betweenness_oracle, er_graph, k_core_oracle


def path_graph(n, directed=False):
    g = WeightedGraph(directed=directed)
    for i in range(n - 1):
        g.add_edge(f"n{i}", f"n{i + 1}", 1.0)
    return g


def cycle_graph(n, directed=True):
    g = WeightedGraph(directed=directed)
    for i in range(n):
        g.add_edge(f"n{i}", f"n{(i + 1) % n}", 1.0)
    return g


class TestGlobalProperties:
    def test_triangle(self):
        g = WeightedGraph()
        g.add_edge("a", "b", 1.0)
        g.add_edge("b", "c", 1.0)
        g.add_edge("c", "a", 1.0)
        m = global_properties(g)
        assert m.node_count == 3 and m.edge_count == 3
        assert m.density == pytest.approx(1.0)
        assert m.avg_clustering == pytest.approx(1.0)
        assert m.component_count == 1
        assert m.giant_fraction == pytest.approx(1.0)
        assert m.avg_path_length == pytest.approx(1.0)
        assert m.diameter == 1

    def test_path_metrics(self):
        m = global_properties(path_graph(4))
        # Distances: three 1s, two 2s, one 3 over six ordered-free pairs.
        assert m.avg_path_length == pytest.approx((3 * 1 + 2 * 2 + 1 * 3) / 6)
        assert m.diameter == 3
        assert m.avg_clustering == pytest.approx(0.0)

    def test_disconnected_giant(self):
        g = path_graph(4)
        g.add_edge("x", "y", 1.0)
        m = global_properties(g)
        assert m.component_count == 2
        assert m.giant_fraction == pytest.approx(4 / 6)
        assert m.diameter == 3  # giant component only

    def test_directed_density(self):
        g = WeightedGraph(directed=True)
        g.add_edge("a", "b", 1.0)
        m = global_properties(g)
        assert m.density == pytest.approx(0.5)

    def test_empty_graph(self):
        m = global_properties(WeightedGraph())
        assert m.node_count == 0
        assert m.avg_path_length is None and m.diameter is None

    def test_json_dict_keys(self):
        payload = global_properties(path_graph(3)).to_json_dict()
        for key in (
            "node_count", "edge_count", "density", "avg_degree", "avg_clustering",
            "component_count", "giant_fraction", "avg_path_length", "diameter",
        ):
            assert key in payload


class TestBetweenness:
    def test_path_center(self):
        scores = betweenness(path_graph(3))
        assert scores["n1"] == pytest.approx(1.0)
        assert scores["n0"] == pytest.approx(0.0)

    def test_triangle_all_zero(self):
        g = WeightedGraph()
        for a, b in (("a", "b"), ("b", "c"), ("c", "a")):
            g.add_edge(a, b, 1.0)
        assert all(v == pytest.approx(0.0) for v in betweenness(g).values())

    def test_star_center(self):
        g = WeightedGraph()
        for i in range(4):
            g.add_edge("hub", f"leaf{i}", 1.0)
        scores = betweenness(g)
        # 4 leaves: C(4,2) = 6 pairs route through the hub.
        assert scores["hub"] == pytest.approx(6.0)

    def test_split_shortest_paths(self):
        # Two parallel length-2 routes a-b-d and a-c-d share the load.
        g = WeightedGraph()
        for u, v in (("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")):
            g.add_edge(u, v, 1.0)
        scores = betweenness(g)
        assert scores["b"] == pytest.approx(0.5)
        assert scores["c"] == pytest.approx(0.5)

    def test_directed_path(self):
        scores = betweenness(path_graph(3, directed=True))
        assert scores["n1"] == pytest.approx(1.0)

    @pytest.mark.parametrize("seed", range(8))
    def test_exact_mode_matches_pair_dependency_oracle(self, seed):
        directed = seed % 2 == 1
        n = 8 + 4 * seed
        g = er_graph(seed, n, 3.0 / n, directed=directed)
        got = betweenness(g, exact=True)
        want = betweenness_oracle(g)
        assert got == want

    @pytest.mark.parametrize("seed", range(4))
    def test_float_mode_close_to_exact(self, seed):
        g = er_graph(100 + seed, 40, 0.12, directed=seed % 2 == 0)
        fast = betweenness(g)
        exact = betweenness(g, exact=True)
        for node in fast:
            assert fast[node] == pytest.approx(float(exact[node]), abs=1e-9)

    def test_exact_mode_returns_fractions(self):
        scores = betweenness(path_graph(4), exact=True)
        assert all(isinstance(v, Fraction) for v in scores.values())


class TestPagerank:
    def test_two_node_closed_form(self):
        # One edge a->b: solving the damped system with uniform dangling
        # redistribution gives x_a = 1/(2+d), x_b = (1+d)/(2+d).
        g = WeightedGraph(directed=True)
        g.add_edge("a", "b", 1.0)
        d = 0.85
        scores = pagerank(g, damping=d)
        assert scores["a"] == pytest.approx(1 / (2 + d), abs=1e-9)
        assert scores["b"] == pytest.approx((1 + d) / (2 + d), abs=1e-9)

    @pytest.mark.parametrize("n", [3, 7, 20])
    def test_cycle_uniform(self, n):
        scores = pagerank(cycle_graph(n))
        for v in scores.values():
            assert v == pytest.approx(1.0 / n, abs=1e-9)

    @pytest.mark.parametrize("seed", range(4))
    def test_sums_to_one(self, seed):
        g = er_graph(seed, 30, 0.1, directed=True)
        scores = pagerank(g)
        assert sum(scores.values()) == pytest.approx(1.0, abs=1e-9)

    def test_weights_steer_mass(self):
        g = WeightedGraph(directed=True)
        g.add_edge("src", "heavy", 9.0)
        g.add_edge("src", "light", 1.0)
        scores = pagerank(g)
        assert scores["heavy"] > scores["light"]

    def test_undirected_rejected(self):
        with pytest.raises(ValueError):
            pagerank(WeightedGraph())

    def test_nonconvergence_carries_scores(self):
        g = cycle_graph(5)
        with pytest.raises(ConvergenceError) as info:
            pagerank(g, tolerance=0.0, max_iterations=3)
        assert info.value.scores is not None
        assert sum(info.value.scores.values()) == pytest.approx(1.0, abs=1e-6)


class TestKCore:
    def test_triangle_with_tail(self):
        g = WeightedGraph()
        for u, v in (("a", "b"), ("b", "c"), ("c", "a"), ("c", "tail")):
            g.add_edge(u, v, 1.0)
        core = k_core(g, 2)
        assert set(core.nodes()) == {"a", "b", "c"}

    def test_nesting(self):
        g = er_graph(3, 40, 0.15)
        prev = set(g.nodes())
        for k in range(1, 6):
            current = set(k_core(g, k).nodes())
            assert current <= prev
            prev = current

    @pytest.mark.parametrize("seed", range(6))
    def test_matches_recomputation_oracle(self, seed):
        directed = seed % 2 == 1
        g = er_graph(seed, 30 + seed * 10, 0.1, directed=directed)
        for k in (1, 2, 3, 4):
            assert set(k_core(g, k).nodes()) == k_core_oracle(g, k), f"k={k}"

    def test_self_loop_ignored(self):
        g = WeightedGraph()
        g.add_edge("a", "a", 5.0)
        g.add_edge("a", "b", 1.0)
        assert set(k_core(g, 2).nodes()) == set()


class TestWeightFilter:
    def test_strictly_above_threshold_survives(self):
        g = WeightedGraph()
        g.add_edge("a", "b", 25.0)
        g.add_edge("c", "d", 26.0)
        f = filter_by_edge_weight(g, 25.0)
        assert not f.has_edge("a", "b")
        assert f.has_edge("c", "d")

    def test_isolated_nodes_dropped(self):
        g = WeightedGraph()
        g.add_edge("a", "b", 1.0)
        g.add_edge("b", "c", 10.0)
        f = filter_by_edge_weight(g, 5.0)
        assert set(f.nodes()) == {"b", "c"}


class TestInfluencers:
    def test_degree_helpers(self):
        g = WeightedGraph(directed=True)
        g.add_edge("a", "b", 2.0)
        g.add_edge("c", "b", 3.0)
        assert weighted_in_degree(g)["b"] == 5.0
        assert weighted_out_degree(g)["a"] == 2.0

    def test_ranking_score_then_id(self):
        table = CentralityTable(
            metric="in_degree", scores={"b": 2.0, "a": 2.0, "c": 9.0}
        )
        ranked = top_influencers(table, {}, k=3)
        assert [r.node_id for r in ranked] == ["c", "a", "b"]
        assert [r.rank for r in ranked] == [1, 2, 3]

    def test_annotation_attached(self):
        from offpitch import ActorType, UserProfile

        table = CentralityTable(metric="in_degree", scores={"a": 1.0})
        profiles = {"a": UserProfile(user_id="a", annotation=ActorType.NEWS_OUTLET)}
        ranked = top_influencers(table, profiles, k=1)
        assert ranked[0].actor_type is ActorType.NEWS_OUTLET

    def test_k_truncates(self):
        table = CentralityTable(metric="x", scores={f"n{i}": float(i) for i in range(30)})
        assert len(top_influencers(table, {}, k=5)) == 5
